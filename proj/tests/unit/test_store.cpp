#include <doctest.h>

#include "geoharvest/model/evaluate.hpp"
#include "geoharvest/model/forest.hpp"
#include "geoharvest/model/gam.hpp"
#include "geoharvest/model/grid.hpp"
#include "geoharvest/model/store.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/rng.hpp"
#include "helpers.hpp"

using namespace geoharvest;
using namespace geoharvest::model;

namespace {

FeatureMatrix smooth_data(int n, uint64_t seed) {
  rng::Xoshiro256pp r(seed);
  FeatureMatrix m;
  m.extended_names = {"amenity_balcony"};
  for (int i = 0; i < n; ++i) {
    FeatureRow row;
    row.id = std::to_string(i);
    row.dist_center_m = r.uniform(0.0, 3000.0);
    row.size_sqm = r.uniform(20.0, 120.0);
    row.year_built = 1900 + r.below(120);
    row.nfeatures = r.below(4);
    row.extended = {r.bernoulli(0.5) ? 1.0 : 0.0};
    row.target = 9.0 + 3.0 * std::exp(-row.dist_center_m / 1000.0) +
                 0.4 * row.extended[0] + r.normal(0, 0.5);
    m.rows.push_back(row);
  }
  return m;
}

}  // namespace

TEST_SUITE("evaluate_and_store") {

TEST_CASE("perfect predictions give zero rmse") {
  auto data = smooth_data(100, 5);
  ForestModel f = fit_random_forest(data, {40, 0, 5}, 2);
  FittedModel m;
  m.kind = FittedModel::Kind::random_forest;
  m.forest = f;

  // score the forest against its own predictions: rmse must be exactly 0
  auto self = data;
  for (auto& row : self.rows) row.target = f.predict_row(row);
  EvalMetrics eval = evaluate(m, self.rows);
  CHECK(eval.rmse == 0.0);
  CHECK(eval.r2 == doctest::Approx(1.0));
}

TEST_CASE("mean-only model scores near-zero r2") {
  auto data = smooth_data(400, 6);
  // single-leaf forest: every tree predicts its bootstrap mean
  ForestModel f = fit_random_forest(data, {100, 0, 100000}, 3);
  FittedModel m;
  m.kind = FittedModel::Kind::random_forest;
  m.forest = f;
  EvalMetrics eval = evaluate(m, smooth_data(400, 7).rows);
  CHECK(std::abs(eval.r2) < 0.05);
  CHECK(eval.r2_adj_is_plain);
}

TEST_CASE("forest blob round-trips bit-exactly") {
  TempDir dir("store_forest");
  auto data = smooth_data(200, 8);
  FittedModel m;
  m.kind = FittedModel::Kind::random_forest;
  m.forest = fit_random_forest(data, {50, 0, 5}, 77);

  save_model(m, dir / "f.bin");
  FittedModel back = load_model(dir / "f.bin");
  REQUIRE(back.kind == FittedModel::Kind::random_forest);
  CHECK(back.forest->oob_rmse == m.forest->oob_rmse);
  CHECK(back.forest->feature_names == m.forest->feature_names);
  auto test = smooth_data(100, 9);
  for (const auto& row : test.rows) CHECK(back.predict_row(row) == m.predict_row(row));
}

TEST_CASE("gam blob round-trips bit-exactly") {
  TempDir dir("store_gam");
  auto data = smooth_data(300, 10);
  GamSpec spec = GamSpec::defaults(true);
  spec.linear_terms = {"amenity_balcony"};
  FittedModel m;
  m.kind = FittedModel::Kind::gam_shrinkage;
  m.gam = fit_gam(data, spec, 0);

  save_model(m, dir / "g.bin");
  FittedModel back = load_model(dir / "g.bin");
  REQUIRE(back.kind == FittedModel::Kind::gam_shrinkage);
  CHECK(back.gam->info.gcv == m.gam->info.gcv);
  CHECK(back.gam->info.edf_total == m.gam->info.edf_total);
  CHECK(back.gam->train_ids == m.gam->train_ids);
  auto test = smooth_data(100, 11);
  for (const auto& row : test.rows) CHECK(back.predict_row(row) == m.predict_row(row));
}

TEST_CASE("corrupt blob is rejected") {
  TempDir dir("store_bad");
  fsio::write_file(dir / "junk.bin", "definitely not a model");
  CHECK_THROWS_AS(load_model(dir / "junk.bin"), ParseError);
  CHECK_THROWS_AS(load_model(dir / "missing.bin"), IoError);
}

TEST_CASE("prediction grid geometry and consistency") {
  auto data = smooth_data(300, 12);
  GamSpec spec;
  spec.smooths = {{"dist_center_m", 10}};
  spec.lambda_grid = GamSpec::default_lambda_grid();
  FittedModel m;
  m.kind = FittedModel::Kind::gam;
  m.gam = fit_gam(data, spec, 0);

  geo::GeoPoint center{51.34, 12.37, geo::CoordQuality::embedded, std::nullopt};
  geo::BBox bbox{51.31, 51.37, 12.32, 12.42};
  GridProfile profile;
  profile.size_sqm = 55;
  profile.year_built = 2000;
  profile.amenities = {"balcony", "parking", "basement"};

  PredictionGrid grid = prediction_grid(m, bbox, 500.0, profile, center);
  CHECK(grid.cells.size() == static_cast<size_t>(grid.nx * grid.ny));
  // uniform spacing
  for (const auto& c : grid.cells) {
    CHECK(c.center.lat == doctest::Approx(bbox.lat_min + (c.row + 0.5) * grid.dlat));
    CHECK(c.center.lon == doctest::Approx(bbox.lon_min + (c.col + 0.5) * grid.dlon));
  }

  // grid prediction equals a direct predict on the identical row
  const auto& cell = grid.cells[grid.cells.size() / 2];
  FeatureRow probe;
  probe.dist_center_m = cell.dist_center_m;
  probe.size_sqm = 55;
  probe.year_built = 2000;
  probe.nfeatures = 3;
  CHECK(cell.pred_eur_sqm == m.predict_row(probe));

  // GeoJSON structure
  auto gj = nlohmann::json::parse(grid_to_geojson(grid));
  CHECK(gj["type"] == "FeatureCollection");
  REQUIRE(gj["features"].size() == grid.cells.size());
  const auto& f0 = gj["features"][0];
  CHECK(f0["geometry"]["type"] == "Polygon");
  CHECK(f0["geometry"]["coordinates"][0].size() == 5);  // closed ring
  CHECK(f0["properties"].contains("pred_eur_sqm"));
}

TEST_CASE("ten by ten grid over a unit box") {
  auto data = smooth_data(100, 13);
  GamSpec spec;
  spec.smooths = {{"dist_center_m", 6}};
  spec.lambda_grid = {1.0};
  FittedModel m;
  m.kind = FittedModel::Kind::gam;
  m.gam = fit_gam(data, spec, 0);

  geo::GeoPoint center{0.0, 0.0, geo::CoordQuality::embedded, std::nullopt};
  const double deg_m = geo::kEarthRadiusM * M_PI / 180.0;  // meters per degree at the equator
  geo::BBox bbox{0.0, 10 * 500.0 / deg_m, 0.0, 10 * 500.0 / deg_m};
  PredictionGrid grid = prediction_grid(m, bbox, 500.0, GridProfile{}, center);
  CHECK(grid.nx == 10);
  CHECK(grid.ny == 10);
  CHECK(grid.cells.size() == 100);
}

}  // TEST_SUITE
