#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoharvest/geo/point.hpp"

namespace geoharvest::geo {

enum class ToponymKind { city, district, street };

std::string kind_name(ToponymKind k);
std::optional<ToponymKind> kind_from_name(std::string_view s);

struct GazetteerEntry {
  std::string toponym;
  GeoPoint point;
  ToponymKind kind = ToponymKind::city;
};

// Case-insensitive exact-match toponym dictionary, longest-token-first.
class Gazetteer {
 public:
  void add(GazetteerEntry e);  // throws ValidationError on duplicate (toponym, kind)

  // CSV columns: toponym, kind, lat, lon
  static Gazetteer load_csv(std::string_view csv_text);
  std::string to_csv() const;

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  // First entry whose toponym equals `name` case-insensitively.
  const GazetteerEntry* find(std::string_view name) const;
  const GazetteerEntry* find(std::string_view name, ToponymKind kind) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<GazetteerEntry> entries_;
};

struct ToponymMatch {
  std::string toponym;  // gazetteer spelling
  GeoPoint point;
  size_t begin = 0;  // char span within the input
  size_t end = 0;
};

// Longest-match, non-overlapping, case-insensitive toponym recognition on
// word boundaries; matches reported in input order.
std::vector<ToponymMatch> geoparse(std::string_view text, const Gazetteer& gaz);

}  // namespace geoharvest::geo
