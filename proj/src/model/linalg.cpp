#include "geoharvest/model/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "geoharvest/kernels/kernels.hpp"

namespace geoharvest::model {

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix crossprod(const Matrix& x) {
  const size_t p = x.cols();
  Matrix out(p, p);
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = i; j < p; ++j) {
      double v = kernels::dot(x.col(i), x.col(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

std::vector<double> crossprod_vec(const Matrix& x, std::span<const double> y) {
  std::vector<double> out(x.cols());
  for (size_t j = 0; j < x.cols(); ++j) out[j] = kernels::dot(x.col(j), y);
  return out;
}

std::vector<double> matvec(const Matrix& x, std::span<const double> b) {
  std::vector<double> out(x.rows(), 0.0);
  for (size_t j = 0; j < x.cols(); ++j) kernels::axpy(b[j], x.col(j), out);
  return out;
}

Matrix cholesky(const Matrix& a) {
  const size_t n = a.rows();
  Matrix L(n, n);
  for (size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) throw SingularMatrixError(j);
    L(j, j) = std::sqrt(d);
    for (size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

std::vector<double> cholesky_solve(const Matrix& L, std::span<const double> b) {
  const size_t n = L.rows();
  std::vector<double> y(b.begin(), b.end());
  for (size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (size_t k = 0; k < i; ++k) s -= L(i, k) * y[k];
    y[i] = s / L(i, i);
  }
  for (size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * y[k];
    y[ii] = s / L(ii, ii);
  }
  return y;
}

Matrix cholesky_solve_matrix(const Matrix& L, const Matrix& B) {
  Matrix out(B.rows(), B.cols());
  for (size_t j = 0; j < B.cols(); ++j) {
    auto x = cholesky_solve(L, B.col(j));
    std::copy(x.begin(), x.end(), out.col(j).begin());
  }
  return out;
}

void sym_eigen(const Matrix& a, Matrix& V, std::vector<double>& w) {
  const size_t n = a.rows();
  Matrix A = a;
  V = Matrix::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-26) break;

    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  w.resize(n);
  for (size_t i = 0; i < n; ++i) w[i] = A(i, i);

  // sort ascending, permuting eigenvectors alongside
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return w[x] < w[y]; });
  Matrix Vs(n, n);
  std::vector<double> ws(n);
  for (size_t j = 0; j < n; ++j) {
    ws[j] = w[order[j]];
    for (size_t i = 0; i < n; ++i) Vs(i, j) = V(i, order[j]);
  }
  V = std::move(Vs);
  w = std::move(ws);
}

}  // namespace geoharvest::model
