#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "momgan/evaluation.hpp"

using namespace momgan;

namespace {

// Minimum transport cost over every assignment; usable up to n = 6.
double w1_brute_force(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(a.size());
}

std::vector<Vector> shifted(const std::vector<Vector>& points, const Vector& v) {
  std::vector<Vector> out = points;
  for (Vector& p : out) {
    for (std::size_t j = 0; j < v.size(); ++j) p[j] += v[j];
  }
  return out;
}

}  // namespace

TEST_CASE("w1_exact_1d basics") {
  const std::vector<double> a = {0.0, 2.0};
  CHECK(w1_exact_1d(a, a) == 0.0);
  CHECK(w1_exact_1d(a, {1.0, 3.0}) == doctest::Approx(1.0));

  std::vector<double> b = {5.0, -1.0, 2.0};
  std::vector<double> bc = b;
  for (double& v : bc) v += 3.25;
  CHECK(w1_exact_1d(b, bc) == doctest::Approx(3.25));

  CHECK_THROWS_AS(w1_exact_1d(a, b), std::invalid_argument);
}

TEST_CASE("w1_exact_1d equals the brute-force assignment minimum") {
  Rng rng(1, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (double& v : a) v = rng.uniform(-5, 5);
    for (double& v : b) v = rng.uniform(-5, 5);
    CHECK(w1_exact_1d(a, b) == doctest::Approx(w1_brute_force(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("w1_exact_1d satisfies the metric axioms") {
  Rng rng(2, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<double> a(n), b(n), c(n);
    for (double& v : a) v = rng.uniform(-3, 3);
    for (double& v : b) v = rng.uniform(-3, 3);
    for (double& v : c) v = rng.uniform(-3, 3);
    const double ab = w1_exact_1d(a, b);
    const double ba = w1_exact_1d(b, a);
    const double ac = w1_exact_1d(a, c);
    const double cb = w1_exact_1d(c, b);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab <= ac + cb + 1e-12);
    CHECK(w1_exact_1d(a, a) == 0.0);
  }
}

TEST_CASE("sliced_w1 vanishes on equal samples and is symmetric per seed") {
  Rng rng(3, 0);
  std::vector<Vector> a(50, Vector(2));
  for (Vector& p : a) {
    p[0] = rng.uniform(-1, 1);
    p[1] = rng.uniform(-1, 1);
  }
  Rng proj(9, 0);
  CHECK(sliced_w1(a, a, 32, proj) == 0.0);

  std::vector<Vector> b = shifted(a, {0.3, -0.4});
  Rng p1(10, 0);
  Rng p2(10, 0);
  CHECK(sliced_w1(a, b, 64, p1) == doctest::Approx(sliced_w1(b, a, 64, p2)));
}

TEST_CASE("sliced_w1 of a pure shift approaches (2/pi)|v| in 2-D") {
  Rng rng(4, 0);
  std::vector<Vector> a(200, Vector(2));
  for (Vector& p : a) {
    p[0] = rng.uniform(-1, 1);
    p[1] = rng.uniform(-1, 1);
  }
  const Vector v = {0.6, -0.8};  // norm 1
  const std::vector<Vector> b = shifted(a, v);
  Rng proj(11, 0);
  const double value = sliced_w1(a, b, 10000, proj);
  CHECK(value == doctest::Approx(2.0 / 3.14159265358979323846).epsilon(0.05));
}

TEST_CASE("fit_gaussian moments") {
  const std::vector<Vector> two = {{1.0, 3.0}, {3.0, 5.0}};
  const GaussianSummary g = fit_gaussian(two);
  CHECK(g.mean[0] == doctest::Approx(2.0));
  CHECK(g.mean[1] == doctest::Approx(4.0));

  const std::vector<Vector> equal(5, Vector{0.7, 0.2});
  const GaussianSummary flat = fit_gaussian(equal);
  for (double v : flat.covariance.data()) CHECK(v == doctest::Approx(0.0));

  CHECK_THROWS_AS(fit_gaussian({Vector{1.0}}), std::invalid_argument);

  Rng rng(5, 0);
  std::vector<Vector> normal(100000, Vector(2));
  for (Vector& p : normal) {
    p[0] = rng.normal();
    p[1] = rng.normal();
  }
  const GaussianSummary fitted = fit_gaussian(normal);
  Matrix delta = fitted.covariance;
  delta(0, 0) -= 1.0;
  delta(1, 1) -= 1.0;
  CHECK(frobenius_norm(delta) < 0.05);
}

TEST_CASE("frechet_distance closed forms") {
  GaussianSummary g1{{0.0, 0.0}, Matrix::identity(2)};
  CHECK(frechet_distance(g1, g1) == doctest::Approx(0.0));

  GaussianSummary g2{{3.0, 4.0}, Matrix::identity(2)};
  CHECK(frechet_distance(g1, g2) == doctest::Approx(25.0));

  GaussianSummary g3{{0.0, 0.0}, Matrix::diagonal({4.0, 1.0})};
  GaussianSummary g4{{0.0, 0.0}, Matrix::diagonal({1.0, 1.0})};
  CHECK(frechet_distance(g3, g4) == doctest::Approx(1.0));

  GaussianSummary g5{{0.0}, Matrix::identity(1)};
  CHECK_THROWS_AS(frechet_distance(g1, g5), std::invalid_argument);
}

TEST_CASE("frechet_distance is symmetric and matches the diagonal closed form") {
  Rng rng(6, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t p = 1 + rng.below(4);
    Vector m1(p), m2(p), d1(p), d2(p);
    for (std::size_t i = 0; i < p; ++i) {
      m1[i] = rng.uniform(-2, 2);
      m2[i] = rng.uniform(-2, 2);
      d1[i] = rng.uniform(0.01, 4.0);
      d2[i] = rng.uniform(0.01, 4.0);
    }
    const GaussianSummary g1{m1, Matrix::diagonal(d1)};
    const GaussianSummary g2{m2, Matrix::diagonal(d2)};

    double closed = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double dm = m1[i] - m2[i];
      const double ds = std::sqrt(d1[i]) - std::sqrt(d2[i]);
      closed += dm * dm + ds * ds;
    }
    const double forward_value = frechet_distance(g1, g2);
    const double backward_value = frechet_distance(g2, g1);
    CHECK(std::abs(forward_value - closed) < 1e-8);
    CHECK(std::abs(forward_value - backward_value) < 1e-9);
  }
}
