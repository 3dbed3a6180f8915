#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoharvest/extract/record.hpp"
#include "geoharvest/geo/point.hpp"

namespace geoharvest::quality {

// Implausibility predicates over the corpus. Cross-check rules (flag-only)
// count toward rule_hits but not toward an attribute's implausible share.
struct PlausibilityRule {
  enum class Kind { range, price_per_sqm_range, bbox, renovated_year_crosscheck };
  enum class Action { flag, null_out };

  std::string id;
  std::string attribute;
  Kind kind = Kind::range;
  double min = 0.0, max = 0.0;  // range / price_per_sqm_range
  geo::BBox bbox{0, 0, 0, 0};   // bbox kind
  Action action = Action::flag;
  bool counts_as_implausible = true;
};

void validate_rules(const std::vector<PlausibilityRule>& rules);  // throws ValidationError

std::vector<PlausibilityRule> rules_from_json(const nlohmann::json& j);
nlohmann::json rules_to_json(const std::vector<PlausibilityRule>& rules);

// Default rule set: construction year in [1200, scrape_year+2], positive
// rent/size, price per square meter in (1, 100), renovated-recently
// cross-check (flag only). A bbox rule is appended when a bbox is known.
std::vector<PlausibilityRule> default_rules(int scrape_year,
                                            const std::optional<geo::BBox>& bbox = std::nullopt);

struct AttributeStats {
  int missing = 0;
  int implausible = 0;
  int qualified = 0;  // value carried a non-exact qualifier (approx / at_least / at_most)
};

struct QualityReport {
  int corpus_size = 0;
  int records_retained = 0;
  // insertion-ordered attribute list, Table-2 style
  std::vector<std::pair<std::string, AttributeStats>> attributes;
  std::map<std::string, int> rule_hits;
  std::vector<std::string> gap_days;  // "YYYY-MM-DD" with zero retrieved records

  const AttributeStats* stats(const std::string& attribute) const;
  static double pct(int count, int total);  // two-decimal percentage
};

// Percentages computed over corpus_size; implausible counted after missing
// (the two are disjoint by construction).
QualityReport quality_report(const std::vector<extract::ListingRecord>& corpus,
                             const std::vector<PlausibilityRule>& rules);

std::string report_to_text(const QualityReport& r);
nlohmann::json report_to_json(const QualityReport& r);

struct ExclusionCriteria {
  std::vector<std::string> require_fields;  // evaluated in order
  enum class GeoRequirement { none, any, building } geo = GeoRequirement::none;
};

struct ExclusionLedger {
  // per-criterion exclusion counts, in criterion order
  std::vector<std::pair<std::string, int>> counts;
  int total_excluded() const;
  std::string to_csv() const;
};

// A record is excluded once, under its first failing criterion.
std::pair<std::vector<extract::ListingRecord>, ExclusionLedger> apply_exclusions(
    const std::vector<extract::ListingRecord>& corpus, const ExclusionCriteria& criteria);

struct ImputeSummary {
  int imputed = 0;
  std::vector<std::string> unimputed_ids;  // neither coords nor usable postal code
};

// Gives coordinate-less records their postal-code centroid (quality =
// imputed); never overwrites an existing coordinate.
ImputeSummary impute_distance_by_postal(std::vector<extract::ListingRecord>& corpus,
                                        const std::map<std::string, geo::GeoPoint>& centroids,
                                        double centroid_radius_m);

std::map<std::string, geo::GeoPoint> centroids_from_csv(std::string_view csv_text);

struct ObfuscationCheck {
  double mean_point_error_m = 0.0;
  double mean_cell_centroid_error_m = 0.0;  // over cells meeting the density floor
  int cells = 0;        // non-empty cells
  int dense_cells = 0;  // cells with >= min_cell_points members
};

// Compares per-point positional error against the error of square-grid cell
// centroids (cells keyed by the jittered positions, as an analyst would).
// Cells below the density floor are excluded from the centroid statistic:
// aggregation only pays off where the cell population is large enough.
ObfuscationCheck obfuscation_aggregation_check(const std::vector<geo::GeoPoint>& points_true,
                                               const std::vector<geo::GeoPoint>& points_jittered,
                                               double cell_size_m, int min_cell_points = 1);

}  // namespace geoharvest::quality
