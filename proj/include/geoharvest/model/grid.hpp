#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoharvest/geo/point.hpp"
#include "geoharvest/model/evaluate.hpp"

namespace geoharvest::model {

// Apartment profile held constant across the study area; only location (and
// therefore dist_center_m) varies per cell.
struct GridProfile {
  double size_sqm = 55.0;
  double year_built = 2000.0;
  std::set<std::string> amenities;  // e.g. balcony, parking, basement
  std::optional<std::string> plz;

  static GridProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GridCell {
  int row = 0, col = 0;
  geo::GeoPoint center;
  double dist_center_m = 0.0;
  double pred_eur_sqm = 0.0;
};

struct PredictionGrid {
  geo::BBox bbox{0, 0, 0, 0};
  double cell_m = 0.0;
  int nx = 0, ny = 0;
  double dlat = 0.0, dlon = 0.0;  // uniform cell size in degrees
  std::vector<GridCell> cells;    // row-major, row 0 = southernmost
};

// Regular grid over the bbox; per-cell dist_center_m from the cell center,
// all profile fields constant.
PredictionGrid prediction_grid(const FittedModel& model, const geo::BBox& bbox, double cell_m,
                               const GridProfile& profile, const geo::GeoPoint& center);

// Polygon cells with a pred_eur_sqm property.
std::string grid_to_geojson(const PredictionGrid& grid);
std::string grid_to_csv(const PredictionGrid& grid);

}  // namespace geoharvest::model
