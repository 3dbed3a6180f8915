#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "geoharvest/model/evaluate.hpp"
#include "geoharvest/model/forest.hpp"
#include "geoharvest/util/rng.hpp"

using namespace geoharvest;
using namespace geoharvest::model;

namespace {

FeatureMatrix step_data(int n, uint64_t seed, double noise_sd) {
  rng::Xoshiro256pp r(seed);
  FeatureMatrix m;
  for (int i = 0; i < n; ++i) {
    FeatureRow row;
    row.id = std::to_string(i);
    row.dist_center_m = r.uniform(0.0, 3000.0);
    row.size_sqm = r.uniform(20.0, 120.0);
    row.year_built = 1900 + r.below(120);
    row.nfeatures = r.below(5);
    // hard step in one feature: tree-friendly, line-hostile
    row.target = (row.dist_center_m < 1500.0 ? 12.0 : 8.0) + r.normal(0, noise_sd);
    m.rows.push_back(row);
  }
  return m;
}

// least-squares line on dist as the linear-model reference
double linear_fit_rmse(const FeatureMatrix& train, const FeatureMatrix& test) {
  Eigen::MatrixXd X(train.rows.size(), 2);
  Eigen::VectorXd y(train.rows.size());
  for (size_t i = 0; i < train.rows.size(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = train.rows[i].dist_center_m;
    y(i) = train.rows[i].target;
  }
  Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
  double sse = 0;
  for (const auto& row : test.rows) {
    double pred = beta(0) + beta(1) * row.dist_center_m;
    sse += (pred - row.target) * (pred - row.target);
  }
  return std::sqrt(sse / test.rows.size());
}

}  // namespace

TEST_SUITE("forest") {

TEST_CASE("constant target degenerates to a constant predictor") {
  FeatureMatrix m;
  rng::Xoshiro256pp r(1);
  for (int i = 0; i < 50; ++i) {
    FeatureRow row;
    row.id = std::to_string(i);
    row.dist_center_m = r.uniform(0, 100);
    row.size_sqm = r.uniform(20, 100);
    row.year_built = 2000;
    row.nfeatures = 0;
    row.target = 7.5;
    m.rows.push_back(row);
  }
  ForestModel f = fit_random_forest(m, {50, 0, 5}, 3);
  CHECK(f.degenerate_constant);
  for (const auto& row : m.rows) CHECK(f.predict_row(row) == 7.5);
}

TEST_CASE("same seed gives bit-identical predictions") {
  auto data = step_data(300, 41, 0.5);
  ForestModel a = fit_random_forest(data, {60, 0, 5}, 1234);
  ForestModel b = fit_random_forest(data, {60, 0, 5}, 1234);
  ForestModel c = fit_random_forest(data, {60, 0, 5}, 1235);

  auto test = step_data(100, 42, 0.5);
  auto pa = a.predict(test.rows), pb = b.predict(test.rows), pc = c.predict(test.rows);
  bool identical = true, different = false;
  for (size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] != pb[i]) identical = false;
    if (pa[i] != pc[i]) different = true;
  }
  CHECK(identical);
  CHECK(different);
  CHECK(a.oob_rmse == b.oob_rmse);
}

TEST_CASE("step-function target beats a straight line") {
  auto train = step_data(600, 51, 0.4);
  auto test = step_data(400, 52, 0.4);
  ForestModel f = fit_random_forest(train, {150, 0, 5}, 7);

  std::vector<double> pred, truth;
  for (const auto& row : test.rows) {
    pred.push_back(f.predict_row(row));
    truth.push_back(row.target);
  }
  double forest_rmse = rmse(pred, truth);
  double line_rmse = linear_fit_rmse(train, test);
  CHECK(forest_rmse < line_rmse);
}

TEST_CASE("oob error tracks holdout error") {
  auto train = step_data(500, 61, 0.5);
  auto test = step_data(500, 62, 0.5);
  ForestModel f = fit_random_forest(train, {200, 0, 5}, 99);

  std::vector<double> pred, truth;
  for (const auto& row : test.rows) {
    pred.push_back(f.predict_row(row));
    truth.push_back(row.target);
  }
  double holdout = rmse(pred, truth);
  CHECK(std::abs(f.oob_rmse - holdout) / holdout < 0.15);
}

TEST_CASE("mtry defaults to ceil(p/3)") {
  auto data = step_data(50, 71, 0.5);  // 4 core features
  ForestModel f = fit_random_forest(data, {10, 0, 5}, 1);
  CHECK(f.params.mtry == 2);  // ceil(4/3)
}

}  // TEST_SUITE
