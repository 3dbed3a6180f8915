#include "geoharvest/model/grid.hpp"

#include <cmath>

#include "geoharvest/util/csv.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/num.hpp"

namespace geoharvest::model {

using nlohmann::json;

GridProfile GridProfile::from_json(const json& j) {
  GridProfile p;
  p.size_sqm = j.value("size_sqm", 55.0);
  p.year_built = j.value("year_built", 2000.0);
  for (const auto& a : j.value("amenities", json::array())) p.amenities.insert(a.get<std::string>());
  if (j.contains("plz")) p.plz = j["plz"].get<std::string>();
  return p;
}

json GridProfile::to_json() const {
  json j{{"size_sqm", size_sqm}, {"year_built", year_built}, {"amenities", amenities}};
  if (plz) j["plz"] = *plz;
  return j;
}

PredictionGrid prediction_grid(const FittedModel& model, const geo::BBox& bbox, double cell_m,
                               const GridProfile& profile, const geo::GeoPoint& center) {
  if (!bbox.well_ordered()) throw ValidationError("prediction_grid: bbox not well ordered");
  if (!(cell_m > 0)) throw ValidationError("prediction_grid: cell size must be > 0");

  PredictionGrid g;
  g.bbox = bbox;
  g.cell_m = cell_m;
  const double d2r = M_PI / 180.0;
  g.dlat = cell_m / (geo::kEarthRadiusM * d2r);
  g.dlon = cell_m / (geo::kEarthRadiusM * d2r * std::cos(center.lat * d2r));

  // profile row: extended features built against the model's training layout
  FeatureRow row;
  row.size_sqm = profile.size_sqm;
  row.year_built = profile.year_built;
  row.nfeatures = static_cast<double>(profile.amenities.size());
  auto ext_names = model.extended_names();
  row.extended.assign(ext_names.size(), 0.0);
  for (size_t i = 0; i < ext_names.size(); ++i) {
    const std::string& name = ext_names[i];
    if (name.rfind("amenity_", 0) == 0 && profile.amenities.count(name.substr(8)))
      row.extended[i] = 1.0;
    if (profile.plz && name == "plz_" + *profile.plz) row.extended[i] = 1.0;
  }

  // cell count = number of centers inside the bbox, so the emitted grid is
  // exactly nx * ny uniform cells clipped to the box
  const double lat_span = bbox.lat_max - bbox.lat_min;
  const double lon_span = bbox.lon_max - bbox.lon_min;
  g.ny = std::max(1, static_cast<int>(std::floor(lat_span / g.dlat + 0.5)));
  g.nx = std::max(1, static_cast<int>(std::floor(lon_span / g.dlon + 0.5)));

  for (int iy = 0; iy < g.ny; ++iy) {
    const double lat = bbox.lat_min + (iy + 0.5) * g.dlat;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double lon = bbox.lon_min + (ix + 0.5) * g.dlon;
      GridCell cell;
      cell.row = iy;
      cell.col = ix;
      cell.center = {lat, lon, geo::CoordQuality::embedded, std::nullopt};
      cell.dist_center_m = geo::distance_to_center(cell.center, center);
      row.dist_center_m = cell.dist_center_m;
      cell.pred_eur_sqm = model.predict_row(row);
      if (!std::isfinite(cell.pred_eur_sqm))
        throw ValidationError("prediction_grid: non-finite prediction");
      g.cells.push_back(cell);
    }
  }
  return g;
}

std::string grid_to_geojson(const PredictionGrid& g) {
  json features = json::array();
  for (const auto& c : g.cells) {
    const double lat0 = c.center.lat - g.dlat / 2.0, lat1 = c.center.lat + g.dlat / 2.0;
    const double lon0 = c.center.lon - g.dlon / 2.0, lon1 = c.center.lon + g.dlon / 2.0;
    json ring = json::array({json::array({lon0, lat0}), json::array({lon1, lat0}),
                             json::array({lon1, lat1}), json::array({lon0, lat1}),
                             json::array({lon0, lat0})});
    features.push_back(json{
        {"type", "Feature"},
        {"geometry", json{{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
        {"properties", json{{"pred_eur_sqm", c.pred_eur_sqm},
                            {"dist_center_m", c.dist_center_m},
                            {"row", c.row},
                            {"col", c.col}}}});
  }
  json out{{"type", "FeatureCollection"}, {"features", features}};
  return out.dump() + "\n";
}

std::string grid_to_csv(const PredictionGrid& g) {
  std::string out = "row,col,lat,lon,dist_center_m,pred_eur_sqm\n";
  for (const auto& c : g.cells) {
    out += csv::join_row({std::to_string(c.row), std::to_string(c.col),
                          num::fmt_double(c.center.lat), num::fmt_double(c.center.lon),
                          num::fmt_double(c.dist_center_m), num::fmt_double(c.pred_eur_sqm)});
  }
  return out;
}

}  // namespace geoharvest::model
