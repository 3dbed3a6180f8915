#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoharvest/extract/record.hpp"
#include "geoharvest/geo/point.hpp"

namespace geoharvest::model {

// One modeling observation: rent per square meter plus the hedonic
// predictors, with optional extended features (per-amenity flags, postal
// one-hot) for the richer models.
struct FeatureRow {
  std::string id;
  double target = 0.0;  // EUR per m^2
  double dist_center_m = 0.0;
  double size_sqm = 0.0;
  double year_built = 0.0;
  double nfeatures = 0.0;
  std::vector<double> extended;  // aligned with FeatureMatrix::extended_names
};

// 0..3 = core (dist, size, year, nfeatures), 4.. = extended by position.
double feature_value(const FeatureRow& r, size_t feature_index);

struct FeatureMatrix {
  std::vector<FeatureRow> rows;
  std::vector<std::string> extended_names;

  static const std::vector<std::string>& core_names();  // dist/size/year/nfeatures
  // 0..3 = core, 4.. = extended
  double value(const FeatureRow& r, size_t feature_index) const;
  size_t feature_count() const { return 4 + extended_names.size(); }
  std::string feature_name(size_t index) const;
  int feature_index(const std::string& name) const;  // -1 when absent
};

struct BuildOptions {
  std::vector<std::string> amenity_vocab;
  bool per_amenity_features = true;
  bool plz_onehot = false;
};

struct BuildSummary {
  int rows_built = 0;
  int dropped_missing_core = 0;
};

// target = rent_net / size; rows missing any core feature are dropped and
// counted. Records are expected to have passed quality exclusions.
FeatureMatrix build_features(const std::vector<extract::ListingRecord>& corpus,
                             const geo::GeoPoint& center, const BuildOptions& opts,
                             BuildSummary* summary = nullptr);

std::string features_to_csv(const FeatureMatrix& m);
FeatureMatrix features_from_csv(std::string_view text);

}  // namespace geoharvest::model
