#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoharvest::model {

// Column-major dense matrix sized for penalized normal equations (p ~ tens).
// Column-major so that cross products reduce to contiguous dot kernels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(size_t i, size_t j) { return data_[j * rows_ + i]; }
  double operator()(size_t i, size_t j) const { return data_[j * rows_ + i]; }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  std::span<double> col(size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(size_t j) const { return {data_.data() + j * rows_, rows_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  static Matrix identity(size_t n);

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

struct SingularMatrixError : std::runtime_error {
  size_t pivot;
  explicit SingularMatrixError(size_t pivot_index)
      : std::runtime_error("matrix is singular at pivot " + std::to_string(pivot_index)),
        pivot(pivot_index) {}
};

// X^T X via column dot products (symmetric).
Matrix crossprod(const Matrix& x);

// X^T y
std::vector<double> crossprod_vec(const Matrix& x, std::span<const double> y);

// y = X b (X column-major: accumulate axpy over columns)
std::vector<double> matvec(const Matrix& x, std::span<const double> b);

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Throws SingularMatrixError naming the failing pivot.
Matrix cholesky(const Matrix& a);

// Solves A x = b given the Cholesky factor L of A.
std::vector<double> cholesky_solve(const Matrix& L, std::span<const double> b);

// A^{-1} B column-by-column given the Cholesky factor of A.
Matrix cholesky_solve_matrix(const Matrix& L, const Matrix& B);

// Cyclic Jacobi eigendecomposition of a small symmetric matrix:
// a = V diag(w) V^T, eigenvalues ascending.
void sym_eigen(const Matrix& a, Matrix& V, std::vector<double>& w);

}  // namespace geoharvest::model
