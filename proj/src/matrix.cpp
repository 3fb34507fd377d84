#include "momgan/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace momgan {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions do not match");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

double trace(const Matrix& a) {
  const std::size_t n = std::min(a.rows(), a.cols());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a(i, i);
  return sum;
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    }
  }
  return true;
}

namespace {

double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw std::invalid_argument("sym_eig: matrix must be square");
  }
  if (s.rows() > 64) {
    throw std::invalid_argument("sym_eig: dimension cap is 64");
  }
  const double sym_tol = 1e-9 * std::max(1.0, max_abs_entry(s));
  if (!is_symmetric(s, sym_tol)) {
    throw std::invalid_argument("sym_eig: matrix is not symmetric");
  }

  const std::size_t n = s.rows();
  Matrix a = s;
  // Fold rounding-level asymmetry away before rotating.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Matrix v = Matrix::identity(n);

  const double scale = frobenius_norm(a);
  const double target = 1e-14 * std::max(scale, 1e-300);
  const std::size_t max_sweeps = 100;
  bool converged = (n < 2) || off_diagonal_norm(a) <= target;

  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged) {
    throw std::runtime_error("sym_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

Matrix psd_sqrt(const Matrix& s) {
  EigenDecomposition eig = sym_eig(s);
  const std::size_t n = s.rows();
  const double lead = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
  const double neg_tol = 1e-10 * std::max(1.0, std::abs(lead));
  Vector roots(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda < -neg_tol) {
      throw std::invalid_argument("psd_sqrt: matrix has a negative eigenvalue");
    }
    roots[i] = std::sqrt(std::max(lambda, 0.0));
  }
  const Matrix& v = eig.eigenvectors;
  Matrix r = matmul(matmul(v, Matrix::diagonal(roots)), transpose(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (r(i, j) + r(j, i));
      r(i, j) = m;
      r(j, i) = m;
    }
  }
  return r;
}

double spectral_norm(const Matrix& a, std::size_t iters, Rng& rng) {
  if (iters < 1) throw std::invalid_argument("spectral_norm: iters must be >= 1");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;

  Vector v(a.cols());
  double norm_v = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm_v += x * x;
  }
  norm_v = std::sqrt(norm_v);
  if (norm_v == 0.0) return 0.0;
  for (double& x : v) x /= norm_v;

  const Matrix at = transpose(a);
  for (std::size_t it = 0; it < iters; ++it) {
    Vector u = matvec(a, v);
    double norm_u = 0.0;
    for (double x : u) norm_u += x * x;
    norm_u = std::sqrt(norm_u);
    if (norm_u == 0.0) return 0.0;

    Vector w = matvec(at, u);
    double norm_w = 0.0;
    for (double x : w) norm_w += x * x;
    norm_w = std::sqrt(norm_w);
    if (norm_w == 0.0) return 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / norm_w;
  }

  Vector u = matvec(a, v);
  double norm_u = 0.0;
  for (double x : u) norm_u += x * x;
  return std::sqrt(norm_u);
}

}  // namespace momgan
