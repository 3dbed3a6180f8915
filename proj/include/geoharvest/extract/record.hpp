#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoharvest/extract/numbers.hpp"
#include "geoharvest/geo/point.hpp"

namespace geoharvest::extract {

struct FieldIssue {
  enum class Kind { missing, unparseable, implausible_format, fatal };
  std::string field;
  Kind kind = Kind::missing;
  std::string detail;
};

std::string issue_kind_name(FieldIssue::Kind k);

// One scraped listing — the pipeline's unit of flow.
struct ListingRecord {
  std::string id;
  std::string url;
  std::optional<ParsedNumber> rent_net_eur;  // monthly net rent
  std::optional<ParsedNumber> size_sqm;
  std::optional<ParsedNumber> rooms;
  std::optional<int> year_built;
  std::optional<ParsedNumber> running_costs_eur;
  std::set<std::string> amenities;
  std::optional<std::string> energy_class;
  std::optional<std::string> raw_address;
  std::optional<std::string> postal_code;
  std::optional<geo::GeoPoint> coords;  // embedded at extraction; later stages may fill
  std::string scraped_at;
};

nlohmann::json record_to_json(const ListingRecord& r);
ListingRecord record_from_json(const nlohmann::json& j);

// Line-delimited JSON corpus I/O.
std::string records_to_jsonl(const std::vector<ListingRecord>& rs);
std::vector<ListingRecord> records_from_jsonl(std::string_view text);

// CSV export with a fixed, documented column order.
const std::vector<std::string>& record_csv_header();
std::vector<std::string> record_csv_row(const ListingRecord& r);

}  // namespace geoharvest::extract
