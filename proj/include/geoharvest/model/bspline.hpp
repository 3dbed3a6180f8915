#pragma once

#include <span>

#include "geoharvest/model/linalg.hpp"

namespace geoharvest::model {

// Cubic B-spline basis with k functions on equally spaced knots over [a, b].
// Inputs outside [a, b] are clamped to the boundary (flat extrapolation of
// the basis), which keeps prediction-grid evaluation defined.
class BSplineBasis {
 public:
  BSplineBasis(double a, double b, int k);  // k >= 4; throws ValidationError

  int size() const { return k_; }
  double lower() const { return a_; }
  double upper() const { return b_; }

  // Writes all k basis values at x into out (out.size() >= k).
  void eval(double x, std::span<double> out) const;

  // n x k design matrix.
  Matrix design(std::span<const double> x) const;

  // D2^T D2 with D2 the (k-2) x k second-order difference operator.
  static Matrix second_diff_penalty(int k);

 private:
  double a_, b_, h_;
  int k_;
};

}  // namespace geoharvest::model
