#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoharvest/model/bspline.hpp"
#include "geoharvest/model/features.hpp"
#include "geoharvest/model/linalg.hpp"

namespace geoharvest::model {

struct SmoothSpec {
  std::string feature;
  int basis_size = 10;  // k >= 4
};

struct GamSpec {
  std::vector<SmoothSpec> smooths;
  std::vector<std::string> linear_terms;  // penalized linear columns (extended features)
  bool shrinkage = false;                 // double-penalty construction
  std::vector<double> lambda_grid;        // positive, ascending
  int max_sweeps = 5;                     // coordinate-descent passes over the GCV grid

  // identity link, gaussian family: the four hedonic smooths
  static GamSpec defaults(bool shrinkage);
  static std::vector<double> default_lambda_grid();  // 40 points, 1e-4..1e6 log-spaced

  static GamSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws ValidationError
};

// One fitted P-spline smooth: cubic B-spline basis over the observed range,
// second-order difference penalty, sum-to-zero constraint absorbed into a
// (k-1)-column reparameterization Z.
struct SmoothTerm {
  std::string feature;
  int feature_index = -1;
  double a = 0.0, b = 1.0;
  int k = 10;
  Matrix Z;   // k x (k-1)
  Matrix S;   // Z^T (D2^T D2) Z
  Matrix S0;  // null-space penalty (shrinkage variant only)
  double lambda = 1.0;
  double lambda0 = 0.0;
  double edf = 0.0;
  size_t col_offset = 0;  // within the joint coefficient vector
  size_t n_cols = 0;      // k-1
};

struct LinearTerm {
  std::string feature;
  int feature_index = -1;
  double mean = 0.0, sd = 1.0;
  double lambda = 0.0;  // ridge weight; shrinkage-selected
  double edf = 0.0;
  size_t col = 0;
};

struct GamFitInfo {
  int n_train = 0;
  double gcv = 0.0;
  double rss = 0.0;
  double edf_total = 0.0;
  double r2_adj = 0.0;
  double train_rmse = 0.0;
  std::vector<std::pair<std::string, double>> edf_by_term;
};

class GamModel {
 public:
  GamSpec spec;
  std::vector<SmoothTerm> terms;
  std::vector<LinearTerm> linears;
  std::vector<double> beta;  // [intercept | smooth blocks | linear columns]
  std::vector<std::string> extended_names;  // training feature layout
  GamFitInfo info;
  std::vector<std::string> train_ids;

  double predict_row(const FeatureRow& row) const;
  std::vector<double> predict(const std::vector<FeatureRow>& rows) const;

  // centered contribution of one smooth at x (for effect curves)
  double smooth_effect(size_t term_index, double x) const;
};

// Joint penalized least squares with per-smooth GCV smoothing selection.
// Throws ValidationError on non-finite targets or a singular design (the
// error names the offending term).
GamModel fit_gam(const FeatureMatrix& data, const GamSpec& spec, uint64_t seed);

// One penalized solve at fixed penalties; exposed for oracle tests.
struct GamSolveResult {
  std::vector<double> beta;
  double rss = 0.0;
  double gcv = 0.0;
  double edf_total = 0.0;
};
GamSolveResult gam_penalized_solve(const Matrix& design, std::span<const double> y,
                                   const Matrix& penalty);

}  // namespace geoharvest::model
