#include "geoharvest/model/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "geoharvest/util/errors.hpp"

namespace geoharvest::model {

BSplineBasis::BSplineBasis(double a, double b, int k) : a_(a), b_(b), k_(k) {
  if (k < 4) throw ValidationError("bspline basis needs k >= 4");
  if (!(b_ > a_)) b_ = a_ + 1.0;  // degenerate range (constant feature)
  h_ = (b_ - a_) / static_cast<double>(k_ - 3);
}

void BSplineBasis::eval(double x, std::span<double> out) const {
  for (int i = 0; i < k_; ++i) out[i] = 0.0;
  x = std::clamp(x, a_, b_);
  double u = (x - a_) / h_;
  int cell = std::min(static_cast<int>(u), k_ - 4);
  double t = u - cell;

  // uniform cubic B-spline blending weights on one knot cell
  const double omt = 1.0 - t;
  out[cell] = omt * omt * omt / 6.0;
  out[cell + 1] = (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
  out[cell + 2] = (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
  out[cell + 3] = t * t * t / 6.0;
}

Matrix BSplineBasis::design(std::span<const double> x) const {
  Matrix m(x.size(), static_cast<size_t>(k_));
  std::vector<double> row(static_cast<size_t>(k_));
  for (size_t i = 0; i < x.size(); ++i) {
    eval(x[i], row);
    for (int j = 0; j < k_; ++j) m(i, static_cast<size_t>(j)) = row[static_cast<size_t>(j)];
  }
  return m;
}

Matrix BSplineBasis::second_diff_penalty(int k) {
  Matrix S(static_cast<size_t>(k), static_cast<size_t>(k));
  // accumulate D2^T D2 row by row: each difference row is (1, -2, 1)
  for (int r = 0; r + 2 < k; ++r) {
    const double d[3] = {1.0, -2.0, 1.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        S(static_cast<size_t>(r + i), static_cast<size_t>(r + j)) += d[i] * d[j];
  }
  return S;
}

}  // namespace geoharvest::model
