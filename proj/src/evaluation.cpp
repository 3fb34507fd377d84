#include "momgan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momgan {

double w1_exact_1d(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("w1_exact_1d: sample sizes differ");
  }
  if (a.empty()) {
    throw std::invalid_argument("w1_exact_1d: empty samples");
  }
  std::vector<double> sa = a;
  std::vector<double> sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) sum += std::abs(sa[i] - sb[i]);
  return sum / static_cast<double>(sa.size());
}

namespace {

Vector random_unit_direction(std::size_t dim, Rng& rng) {
  Vector u(dim);
  for (;;) {
    double norm = 0.0;
    for (double& v : u) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 1e-12) {
      for (double& v : u) v /= norm;
      return u;
    }
  }
}

}  // namespace

double sliced_w1(const std::vector<Vector>& a, const std::vector<Vector>& b,
                 std::size_t n_proj, Rng& rng) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("sliced_w1: sample sizes differ");
  }
  if (a.empty()) throw std::invalid_argument("sliced_w1: empty samples");
  if (n_proj < 1) throw std::invalid_argument("sliced_w1: n_proj must be >= 1");
  const std::size_t dim = a.front().size();

  std::vector<double> pa(a.size());
  std::vector<double> pb(b.size());
  double total = 0.0;
  for (std::size_t k = 0; k < n_proj; ++k) {
    const Vector u = random_unit_direction(dim, rng);
    for (std::size_t i = 0; i < a.size(); ++i) {
      double sa = 0.0;
      double sb = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        sa += u[j] * a[i][j];
        sb += u[j] * b[i][j];
      }
      pa[i] = sa;
      pb[i] = sb;
    }
    total += w1_exact_1d(pa, pb);
  }
  return total / static_cast<double>(n_proj);
}

GaussianSummary fit_gaussian(const std::vector<Vector>& samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("fit_gaussian: need at least two samples");
  }
  const std::size_t n = samples.size();
  const std::size_t dim = samples.front().size();

  GaussianSummary g;
  g.mean.assign(dim, 0.0);
  for (const Vector& x : samples) {
    for (std::size_t j = 0; j < dim; ++j) g.mean[j] += x[j];
  }
  for (double& v : g.mean) v /= static_cast<double>(n);

  g.covariance = Matrix(dim, dim);
  for (const Vector& x : samples) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double di = x[i] - g.mean[i];
      for (std::size_t j = i; j < dim; ++j) {
        g.covariance(i, j) += di * (x[j] - g.mean[j]);
      }
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double v = g.covariance(i, j) / denom;
      g.covariance(i, j) = v;
      g.covariance(j, i) = v;
    }
  }
  return g;
}

double frechet_distance(const GaussianSummary& g1, const GaussianSummary& g2) {
  if (g1.mean.size() != g2.mean.size()) {
    throw std::invalid_argument("frechet_distance: dimension mismatch");
  }
  double mean_gap = 0.0;
  for (std::size_t i = 0; i < g1.mean.size(); ++i) {
    const double d = g1.mean[i] - g2.mean[i];
    mean_gap += d * d;
  }

  const Matrix root1 = psd_sqrt(g1.covariance);
  Matrix inner = matmul(matmul(root1, g2.covariance), root1);
  for (std::size_t i = 0; i < inner.rows(); ++i) {
    for (std::size_t j = i + 1; j < inner.cols(); ++j) {
      const double v = 0.5 * (inner(i, j) + inner(j, i));
      inner(i, j) = v;
      inner(j, i) = v;
    }
  }
  const double cross = trace(psd_sqrt(inner));
  const double value =
      mean_gap + trace(g1.covariance) + trace(g2.covariance) - 2.0 * cross;
  return std::max(value, 0.0);
}

}  // namespace momgan
