#pragma once

#include <cstddef>
#include <vector>

#include "momgan/rng.hpp"

namespace momgan {

using Vector = std::vector<double>;

// Dense row-major matrix of 64-bit reals. Sized for desk-scale work
// (network layers, covariance matrices); no BLAS, no sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Vector matvec(const Matrix& a, const Vector& x);

double frobenius_norm(const Matrix& a);
double trace(const Matrix& a);
bool is_symmetric(const Matrix& a, double tol);

struct EigenDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, matching order
};

// Cyclic Jacobi eigendecomposition for symmetric matrices (dims <= 64).
// Throws std::invalid_argument on non-symmetric input and
// std::runtime_error if the sweep cap is hit before convergence.
EigenDecomposition sym_eig(const Matrix& s);

// Symmetric PSD square root via sym_eig. Eigenvalues within 1e-10 of zero
// (relative to the largest, floored at 1) are clamped to 0; anything more
// negative is rejected.
Matrix psd_sqrt(const Matrix& s);

// Power-iteration estimate of the largest singular value. Never exceeds
// the true value; the zero matrix yields 0.
double spectral_norm(const Matrix& a, std::size_t iters, Rng& rng);

}  // namespace momgan
