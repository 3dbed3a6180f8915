#include "geoharvest/extract/record.hpp"

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/num.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::extract {

using nlohmann::json;

std::string issue_kind_name(FieldIssue::Kind k) {
  switch (k) {
    case FieldIssue::Kind::missing: return "missing";
    case FieldIssue::Kind::unparseable: return "unparseable";
    case FieldIssue::Kind::implausible_format: return "implausible_format";
    default: return "fatal";
  }
}

namespace {

json number_to_json(const ParsedNumber& n) {
  json j{{"value", n.value}};
  if (n.unit != Unit::none) j["unit"] = unit_name(n.unit);
  if (n.qualifier != Qualifier::exact) j["qualifier"] = qualifier_name(n.qualifier);
  return j;
}

ParsedNumber number_from_json(const json& j) {
  ParsedNumber n;
  n.value = j.at("value").get<double>();
  n.unit = unit_from_name(j.value("unit", "none"));
  n.qualifier = qualifier_from_name(j.value("qualifier", "exact"));
  return n;
}

}  // namespace

json record_to_json(const ListingRecord& r) {
  json j{{"id", r.id}, {"url", r.url}, {"scraped_at", r.scraped_at}};
  if (r.rent_net_eur) j["rent_net_eur"] = number_to_json(*r.rent_net_eur);
  if (r.size_sqm) j["size_sqm"] = number_to_json(*r.size_sqm);
  if (r.rooms) j["rooms"] = number_to_json(*r.rooms);
  if (r.year_built) j["year_built"] = *r.year_built;
  if (r.running_costs_eur) j["running_costs_eur"] = number_to_json(*r.running_costs_eur);
  if (!r.amenities.empty()) j["amenities"] = r.amenities;
  if (r.energy_class) j["energy_class"] = *r.energy_class;
  if (r.raw_address) j["raw_address"] = *r.raw_address;
  if (r.postal_code) j["postal_code"] = *r.postal_code;
  if (r.coords) {
    json c{{"lat", r.coords->lat},
           {"lon", r.coords->lon},
           {"quality", geo::quality_name(r.coords->quality)}};
    if (r.coords->positional_error_m) c["positional_error_m"] = *r.coords->positional_error_m;
    j["coords"] = c;
  }
  return j;
}

ListingRecord record_from_json(const json& j) {
  ListingRecord r;
  r.id = j.at("id").get<std::string>();
  r.url = j.at("url").get<std::string>();
  r.scraped_at = j.value("scraped_at", "");
  if (j.contains("rent_net_eur")) r.rent_net_eur = number_from_json(j["rent_net_eur"]);
  if (j.contains("size_sqm")) r.size_sqm = number_from_json(j["size_sqm"]);
  if (j.contains("rooms")) r.rooms = number_from_json(j["rooms"]);
  if (j.contains("year_built")) r.year_built = j["year_built"].get<int>();
  if (j.contains("running_costs_eur"))
    r.running_costs_eur = number_from_json(j["running_costs_eur"]);
  if (j.contains("amenities"))
    for (const auto& a : j["amenities"]) r.amenities.insert(a.get<std::string>());
  if (j.contains("energy_class")) r.energy_class = j["energy_class"].get<std::string>();
  if (j.contains("raw_address")) r.raw_address = j["raw_address"].get<std::string>();
  if (j.contains("postal_code")) r.postal_code = j["postal_code"].get<std::string>();
  if (j.contains("coords")) {
    geo::GeoPoint p;
    p.lat = j["coords"].at("lat").get<double>();
    p.lon = j["coords"].at("lon").get<double>();
    auto q = geo::quality_from_name(j["coords"].value("quality", "embedded"));
    p.quality = q.value_or(geo::CoordQuality::embedded);
    if (j["coords"].contains("positional_error_m"))
      p.positional_error_m = j["coords"]["positional_error_m"].get<double>();
    r.coords = p;
  }
  return r;
}

std::string records_to_jsonl(const std::vector<ListingRecord>& rs) {
  std::string out;
  for (const auto& r : rs) out += record_to_json(r).dump() + "\n";
  return out;
}

std::vector<ListingRecord> records_from_jsonl(std::string_view text) {
  std::vector<ListingRecord> out;
  for (const auto& line : str::split_lines(text)) {
    auto trimmed = str::trim(line);
    if (trimmed.empty()) continue;
    out.push_back(record_from_json(json::parse(trimmed)));
  }
  return out;
}

const std::vector<std::string>& record_csv_header() {
  static const std::vector<std::string> kHeader = {
      "id",          "url",        "rent_net_eur", "rent_qualifier", "size_sqm",
      "size_qualifier", "rooms",   "year_built",   "running_costs_eur", "energy_class",
      "postal_code", "raw_address", "lat",         "lon",            "coord_quality",
      "amenities",   "scraped_at"};
  return kHeader;
}

std::vector<std::string> record_csv_row(const ListingRecord& r) {
  auto opt_num = [](const std::optional<ParsedNumber>& n) {
    return n ? num::fmt_double(n->value) : std::string();
  };
  auto opt_qual = [](const std::optional<ParsedNumber>& n) {
    return n ? qualifier_name(n->qualifier) : std::string();
  };
  std::vector<std::string> amen(r.amenities.begin(), r.amenities.end());
  return {
      r.id,
      r.url,
      opt_num(r.rent_net_eur),
      opt_qual(r.rent_net_eur),
      opt_num(r.size_sqm),
      opt_qual(r.size_sqm),
      opt_num(r.rooms),
      r.year_built ? std::to_string(*r.year_built) : "",
      opt_num(r.running_costs_eur),
      r.energy_class.value_or(""),
      r.postal_code.value_or(""),
      r.raw_address.value_or(""),
      r.coords ? num::fmt_double(r.coords->lat) : "",
      r.coords ? num::fmt_double(r.coords->lon) : "",
      r.coords ? geo::quality_name(r.coords->quality) : "",
      str::join(amen, ";"),
      r.scraped_at,
  };
}

}  // namespace geoharvest::extract
