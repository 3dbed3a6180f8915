#include "geoharvest/quality/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "geoharvest/util/csv.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/timeutil.hpp"

namespace geoharvest::quality {

using extract::ListingRecord;
using nlohmann::json;

void validate_rules(const std::vector<PlausibilityRule>& rules) {
  std::set<std::string> ids;
  for (const auto& r : rules) {
    if (r.id.empty()) throw ValidationError("plausibility rule without id");
    if (!ids.insert(r.id).second) throw ValidationError("duplicate rule id " + r.id);
    if ((r.kind == PlausibilityRule::Kind::range ||
         r.kind == PlausibilityRule::Kind::price_per_sqm_range) &&
        !(r.min < r.max))
      throw ValidationError("rule " + r.id + ": range min must be < max");
    if (r.kind == PlausibilityRule::Kind::bbox && !r.bbox.well_ordered())
      throw ValidationError("rule " + r.id + ": bbox is not well ordered");
  }
}

namespace {

PlausibilityRule::Kind kind_from_string(const std::string& s) {
  if (s == "range") return PlausibilityRule::Kind::range;
  if (s == "price_per_sqm_range") return PlausibilityRule::Kind::price_per_sqm_range;
  if (s == "bbox") return PlausibilityRule::Kind::bbox;
  if (s == "renovated_year_crosscheck") return PlausibilityRule::Kind::renovated_year_crosscheck;
  throw ValidationError("unknown plausibility rule kind '" + s + "'");
}

std::string kind_to_string(PlausibilityRule::Kind k) {
  switch (k) {
    case PlausibilityRule::Kind::range: return "range";
    case PlausibilityRule::Kind::price_per_sqm_range: return "price_per_sqm_range";
    case PlausibilityRule::Kind::bbox: return "bbox";
    default: return "renovated_year_crosscheck";
  }
}

}  // namespace

std::vector<PlausibilityRule> rules_from_json(const json& j) {
  std::vector<PlausibilityRule> out;
  for (const auto& rj : j) {
    PlausibilityRule r;
    r.id = rj.at("id").get<std::string>();
    r.attribute = rj.value("attribute", "");
    r.kind = kind_from_string(rj.at("kind").get<std::string>());
    r.min = rj.value("min", 0.0);
    r.max = rj.value("max", 0.0);
    if (rj.contains("bbox")) {
      r.bbox = {rj["bbox"].at("lat_min").get<double>(), rj["bbox"].at("lat_max").get<double>(),
                rj["bbox"].at("lon_min").get<double>(), rj["bbox"].at("lon_max").get<double>()};
    }
    r.action = rj.value("action", "flag") == "null_out" ? PlausibilityRule::Action::null_out
                                                         : PlausibilityRule::Action::flag;
    r.counts_as_implausible = rj.value("counts_as_implausible", true);
    out.push_back(std::move(r));
  }
  validate_rules(out);
  return out;
}

json rules_to_json(const std::vector<PlausibilityRule>& rules) {
  json out = json::array();
  for (const auto& r : rules) {
    json rj{{"id", r.id}, {"attribute", r.attribute}, {"kind", kind_to_string(r.kind)}};
    if (r.kind == PlausibilityRule::Kind::range ||
        r.kind == PlausibilityRule::Kind::price_per_sqm_range) {
      rj["min"] = r.min;
      rj["max"] = r.max;
    }
    if (r.kind == PlausibilityRule::Kind::bbox)
      rj["bbox"] = {{"lat_min", r.bbox.lat_min},
                    {"lat_max", r.bbox.lat_max},
                    {"lon_min", r.bbox.lon_min},
                    {"lon_max", r.bbox.lon_max}};
    rj["action"] = r.action == PlausibilityRule::Action::null_out ? "null_out" : "flag";
    if (!r.counts_as_implausible) rj["counts_as_implausible"] = false;
    out.push_back(std::move(rj));
  }
  return out;
}

std::vector<PlausibilityRule> default_rules(int scrape_year,
                                            const std::optional<geo::BBox>& bbox) {
  std::vector<PlausibilityRule> rules;
  rules.push_back({"year_range", "year_built", PlausibilityRule::Kind::range, 1200.0,
                   static_cast<double>(scrape_year + 2), {0, 0, 0, 0},
                   PlausibilityRule::Action::flag, true});
  rules.push_back({"rent_positive", "rent_net_eur", PlausibilityRule::Kind::range, 0.01, 1e9,
                   {0, 0, 0, 0}, PlausibilityRule::Action::flag, true});
  rules.push_back({"size_positive", "size_sqm", PlausibilityRule::Kind::range, 0.01, 1e9,
                   {0, 0, 0, 0}, PlausibilityRule::Action::flag, true});
  rules.push_back({"price_per_sqm", "price_per_sqm", PlausibilityRule::Kind::price_per_sqm_range,
                   1.0, 100.0, {0, 0, 0, 0}, PlausibilityRule::Action::flag, true});
  rules.push_back({"renovated_recent_year", "year_built",
                   PlausibilityRule::Kind::renovated_year_crosscheck, 0.0, 0.0, {0, 0, 0, 0},
                   PlausibilityRule::Action::flag, false});
  if (bbox) {
    rules.push_back({"coords_bbox", "coords", PlausibilityRule::Kind::bbox, 0.0, 0.0, *bbox,
                     PlausibilityRule::Action::flag, true});
  }
  validate_rules(rules);
  return rules;
}

const AttributeStats* QualityReport::stats(const std::string& attribute) const {
  for (const auto& [name, st] : attributes)
    if (name == attribute) return &st;
  return nullptr;
}

double QualityReport::pct(int count, int total) {
  if (total <= 0) return 0.0;
  return std::round(10000.0 * count / total) / 100.0;
}

namespace {

bool attribute_missing(const ListingRecord& r, const std::string& attr) {
  if (attr == "rent_net_eur") return !r.rent_net_eur;
  if (attr == "size_sqm") return !r.size_sqm;
  if (attr == "price_per_sqm") return !r.rent_net_eur || !r.size_sqm;
  if (attr == "running_costs_eur") return !r.running_costs_eur;
  if (attr == "rooms") return !r.rooms;
  if (attr == "year_built") return !r.year_built;
  if (attr == "energy_class") return !r.energy_class;
  if (attr == "postal_code") return !r.postal_code;
  if (attr == "coords") return !r.coords;
  return true;
}

// Evaluates one rule; precondition: the rule's attribute is present.
bool rule_hit(const ListingRecord& r, const PlausibilityRule& rule) {
  switch (rule.kind) {
    case PlausibilityRule::Kind::range: {
      double v = 0.0;
      if (rule.attribute == "rent_net_eur") v = r.rent_net_eur->value;
      else if (rule.attribute == "size_sqm") v = r.size_sqm->value;
      else if (rule.attribute == "rooms") v = r.rooms->value;
      else if (rule.attribute == "running_costs_eur") v = r.running_costs_eur->value;
      else if (rule.attribute == "year_built") v = static_cast<double>(*r.year_built);
      else return false;
      return v < rule.min || v > rule.max;  // [min, max] is the plausible band
    }
    case PlausibilityRule::Kind::price_per_sqm_range: {
      double pps = r.rent_net_eur->value / r.size_sqm->value;
      return pps <= rule.min || pps >= rule.max;
    }
    case PlausibilityRule::Kind::bbox:
      return !rule.bbox.contains(*r.coords);
    case PlausibilityRule::Kind::renovated_year_crosscheck:
      return r.amenities.count("renovated") > 0 && *r.year_built > 2010;
  }
  return false;
}

const std::vector<std::string>& tracked_attributes() {
  static const std::vector<std::string> kAttrs = {
      "rent_net_eur", "size_sqm",     "price_per_sqm", "running_costs_eur", "rooms",
      "year_built",   "energy_class", "postal_code",   "coords"};
  return kAttrs;
}

}  // namespace

QualityReport quality_report(const std::vector<ListingRecord>& corpus,
                             const std::vector<PlausibilityRule>& rules) {
  if (corpus.empty()) throw ValidationError("quality_report: corpus is empty");
  validate_rules(rules);

  QualityReport rep;
  rep.corpus_size = static_cast<int>(corpus.size());
  rep.records_retained = rep.corpus_size;
  for (const auto& attr : tracked_attributes()) rep.attributes.emplace_back(attr, AttributeStats{});
  for (const auto& rule : rules) rep.rule_hits[rule.id] = 0;

  auto qualified = [](const ListingRecord& r, const std::string& attr) {
    const std::optional<extract::ParsedNumber>* n = nullptr;
    if (attr == "rent_net_eur") n = &r.rent_net_eur;
    else if (attr == "size_sqm") n = &r.size_sqm;
    else if (attr == "rooms") n = &r.rooms;
    else if (attr == "running_costs_eur") n = &r.running_costs_eur;
    return n && *n && (**n).qualifier != extract::Qualifier::exact;
  };

  for (const auto& r : corpus) {
    for (auto& [attr, st] : rep.attributes) {
      if (attribute_missing(r, attr)) {
        ++st.missing;
        continue;
      }
      if (qualified(r, attr)) ++st.qualified;
      bool implausible = false;
      for (const auto& rule : rules) {
        if (rule.attribute != attr) continue;
        if (rule.kind != PlausibilityRule::Kind::renovated_year_crosscheck &&
            attribute_missing(r, rule.attribute))
          continue;
        if (rule.kind == PlausibilityRule::Kind::renovated_year_crosscheck && !r.year_built)
          continue;
        if (rule_hit(r, rule)) {
          ++rep.rule_hits[rule.id];
          if (rule.counts_as_implausible) implausible = true;
        }
      }
      if (implausible) ++st.implausible;
    }
  }

  // gap days over the observed scraped_at date span
  std::set<int64_t> days;
  int64_t min_day = 0, max_day = 0;
  bool any = false;
  for (const auto& r : corpus) {
    auto tp = timeutil::parse_iso8601(r.scraped_at);
    if (!tp) continue;
    int64_t d = timeutil::utc_day_number(*tp);
    days.insert(d);
    if (!any || d < min_day) min_day = d;
    if (!any || d > max_day) max_day = d;
    any = true;
  }
  if (any) {
    for (int64_t d = min_day; d <= max_day; ++d) {
      if (!days.count(d)) {
        auto tp = timeutil::SysClock::time_point(std::chrono::hours(24 * d));
        rep.gap_days.push_back(timeutil::utc_date(tp));
      }
    }
  }
  return rep;
}

std::string report_to_text(const QualityReport& r) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-22s %10s %12s\n", "attribute", "missing%", "implausible%");
  out += buf;
  out += std::string(46, '-') + "\n";
  for (const auto& [attr, st] : r.attributes) {
    std::snprintf(buf, sizeof(buf), "%-22s %10.2f %12.2f\n", attr.c_str(),
                  QualityReport::pct(st.missing, r.corpus_size),
                  QualityReport::pct(st.implausible, r.corpus_size));
    out += buf;
  }
  out += std::string(46, '-') + "\n";
  std::snprintf(buf, sizeof(buf), "corpus size: %d, retained: %d, gap days: %zu\n", r.corpus_size,
                r.records_retained, r.gap_days.size());
  out += buf;
  if (!r.rule_hits.empty()) {
    out += "rule hits:\n";
    for (const auto& [id, n] : r.rule_hits) {
      std::snprintf(buf, sizeof(buf), "  %-24s %6d\n", id.c_str(), n);
      out += buf;
    }
  }
  return out;
}

json report_to_json(const QualityReport& r) {
  json attrs = json::array();
  for (const auto& [attr, st] : r.attributes) {
    attrs.push_back({{"attribute", attr},
                     {"missing", st.missing},
                     {"missing_pct", QualityReport::pct(st.missing, r.corpus_size)},
                     {"implausible", st.implausible},
                     {"implausible_pct", QualityReport::pct(st.implausible, r.corpus_size)},
                     {"qualified", st.qualified},
                     {"valid_pct", QualityReport::pct(
                                       r.corpus_size - st.missing - st.implausible,
                                       r.corpus_size)}});
  }
  return json{{"corpus_size", r.corpus_size},
              {"records_retained", r.records_retained},
              {"attributes", attrs},
              {"rule_hits", r.rule_hits},
              {"gap_days", r.gap_days}};
}

int ExclusionLedger::total_excluded() const {
  int total = 0;
  for (const auto& [name, n] : counts) total += n;
  return total;
}

std::string ExclusionLedger::to_csv() const {
  std::string out = "criterion,excluded\n";
  for (const auto& [name, n] : counts) out += csv::escape(name) + "," + std::to_string(n) + "\n";
  return out;
}

std::pair<std::vector<ListingRecord>, ExclusionLedger> apply_exclusions(
    const std::vector<ListingRecord>& corpus, const ExclusionCriteria& criteria) {
  ExclusionLedger ledger;
  for (const auto& f : criteria.require_fields) {
    bool known = f == "rent_net_eur" || f == "size_sqm" || f == "rooms" || f == "year_built" ||
                 f == "running_costs_eur" || f == "energy_class" || f == "postal_code" ||
                 f == "coords";
    if (!known) throw ValidationError("exclusion criteria: unknown field '" + f + "'");
    ledger.counts.emplace_back("require:" + f, 0);
  }
  if (criteria.geo != ExclusionCriteria::GeoRequirement::none) {
    ledger.counts.emplace_back(criteria.geo == ExclusionCriteria::GeoRequirement::building
                                   ? "require:geolocation_building"
                                   : "require:geolocation_any",
                               0);
  }

  std::vector<ListingRecord> retained;
  retained.reserve(corpus.size());
  for (const auto& r : corpus) {
    int failed = -1;
    for (size_t i = 0; i < criteria.require_fields.size(); ++i) {
      if (attribute_missing(r, criteria.require_fields[i])) {
        failed = static_cast<int>(i);
        break;
      }
    }
    if (failed < 0 && criteria.geo != ExclusionCriteria::GeoRequirement::none) {
      bool ok = r.coords.has_value();
      if (ok && criteria.geo == ExclusionCriteria::GeoRequirement::building)
        ok = r.coords->quality == geo::CoordQuality::embedded ||
             r.coords->quality == geo::CoordQuality::geocoded;
      if (!ok) failed = static_cast<int>(criteria.require_fields.size());
    }
    if (failed < 0) {
      retained.push_back(r);
    } else {
      ++ledger.counts[static_cast<size_t>(failed)].second;
    }
  }
  return {std::move(retained), std::move(ledger)};
}

ImputeSummary impute_distance_by_postal(std::vector<ListingRecord>& corpus,
                                        const std::map<std::string, geo::GeoPoint>& centroids,
                                        double centroid_radius_m) {
  ImputeSummary s;
  for (auto& r : corpus) {
    if (r.coords) continue;  // never overwrite an existing coordinate
    if (!r.postal_code) {
      s.unimputed_ids.push_back(r.id);
      continue;
    }
    auto it = centroids.find(*r.postal_code);
    if (it == centroids.end()) {
      s.unimputed_ids.push_back(r.id);
      continue;
    }
    geo::GeoPoint p = it->second;
    p.quality = geo::CoordQuality::imputed;
    p.positional_error_m = centroid_radius_m;
    r.coords = p;
    ++s.imputed;
  }
  return s;
}

std::map<std::string, geo::GeoPoint> centroids_from_csv(std::string_view csv_text) {
  auto table = csv::parse_table(csv_text);
  int c_plz = table.column("plz"), c_lat = table.column("lat"), c_lon = table.column("lon");
  if (c_plz < 0 || c_lat < 0 || c_lon < 0)
    throw ValidationError("postal centroid csv: expected columns plz,lat,lon");
  std::map<std::string, geo::GeoPoint> out;
  for (const auto& row : table.rows) {
    geo::GeoPoint p;
    p.lat = std::stod(row[c_lat]);
    p.lon = std::stod(row[c_lon]);
    p.quality = geo::CoordQuality::imputed;
    out[row[c_plz]] = p;
  }
  return out;
}

ObfuscationCheck obfuscation_aggregation_check(const std::vector<geo::GeoPoint>& points_true,
                                               const std::vector<geo::GeoPoint>& points_jittered,
                                               double cell_size_m, int min_cell_points) {
  if (points_true.size() != points_jittered.size())
    throw ValidationError("obfuscation check: point lists differ in length");
  if (!(cell_size_m > 0)) throw ValidationError("obfuscation check: cell size must be > 0");
  if (min_cell_points < 1) throw ValidationError("obfuscation check: min_cell_points must be >= 1");
  ObfuscationCheck out;
  if (points_true.empty()) return out;

  // local projection centered at the true centroid
  double lat0 = 0, lon0 = 0;
  for (const auto& p : points_true) {
    lat0 += p.lat;
    lon0 += p.lon;
  }
  lat0 /= static_cast<double>(points_true.size());
  lon0 /= static_cast<double>(points_true.size());
  const double d2r = M_PI / 180.0;
  const double kx = geo::kEarthRadiusM * std::cos(lat0 * d2r) * d2r;
  const double ky = geo::kEarthRadiusM * d2r;

  auto project = [&](const geo::GeoPoint& p) {
    return std::pair<double, double>{(p.lon - lon0) * kx, (p.lat - lat0) * ky};
  };

  struct CellAgg {
    double tx = 0, ty = 0, jx = 0, jy = 0;
    int n = 0;
  };
  std::map<std::pair<long, long>, CellAgg> cells;

  double point_error_sum = 0.0;
  for (size_t i = 0; i < points_true.size(); ++i) {
    auto [tx, ty] = project(points_true[i]);
    auto [jx, jy] = project(points_jittered[i]);
    point_error_sum += std::hypot(tx - jx, ty - jy);
    // aggregation uses the jittered positions: that is all an analyst has
    auto key = std::make_pair(static_cast<long>(std::floor(jx / cell_size_m)),
                              static_cast<long>(std::floor(jy / cell_size_m)));
    auto& c = cells[key];
    c.tx += tx;
    c.ty += ty;
    c.jx += jx;
    c.jy += jy;
    ++c.n;
  }
  out.mean_point_error_m = point_error_sum / static_cast<double>(points_true.size());

  double centroid_error_sum = 0.0;
  int dense = 0;
  for (const auto& [key, c] : cells) {
    if (c.n < min_cell_points) continue;
    centroid_error_sum += std::hypot(c.tx / c.n - c.jx / c.n, c.ty / c.n - c.jy / c.n);
    ++dense;
  }
  out.cells = static_cast<int>(cells.size());
  out.dense_cells = dense;
  out.mean_cell_centroid_error_m = dense > 0 ? centroid_error_sum / dense : 0.0;
  return out;
}

}  // namespace geoharvest::quality
