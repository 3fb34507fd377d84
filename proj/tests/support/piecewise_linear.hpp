#pragma once

// Piecewise-linear functions on a shared uniform knot grid over [0,1].
// Differences of two grid functions are again piecewise linear with the
// same knots, so sup-norms and expectations under discrete measures are
// exact finite computations. Used to check the error-decomposition
// inequality with no Monte Carlo slack on either side.

#include <algorithm>
#include <cmath>
#include <vector>

#include "momgan/rng.hpp"

namespace momgan::testing {

class PiecewiseLinear {
 public:
  explicit PiecewiseLinear(std::vector<double> knot_values)
      : values_(std::move(knot_values)) {}

  std::size_t knots() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  double operator()(double x) const {
    const std::size_t cells = values_.size() - 1;
    const double t = std::clamp(x, 0.0, 1.0) * static_cast<double>(cells);
    const std::size_t cell = std::min(static_cast<std::size_t>(t), cells - 1);
    const double frac = t - static_cast<double>(cell);
    return values_[cell] * (1.0 - frac) + values_[cell + 1] * frac;
  }

  PiecewiseLinear negated() const {
    std::vector<double> v = values_;
    for (double& x : v) x = -x;
    return PiecewiseLinear(std::move(v));
  }

  // Exact sup-norm of f - g over [0,1]; attained at a knot because the
  // difference is linear on every cell.
  static double sup_distance(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.values_.size(); ++i) {
      m = std::max(m, std::abs(f.values_[i] - g.values_[i]));
    }
    return m;
  }

  // Random 1-Lipschitz function clipped into [-bound, bound]: slopes drawn
  // from [-1, 1] per cell, values clamped at the knots (clamping preserves
  // both the Lipschitz constant and the piecewise-linear form).
  static PiecewiseLinear random_clipped_lipschitz(std::size_t cells, double bound,
                                                  Rng& rng) {
    const double step = 1.0 / static_cast<double>(cells);
    std::vector<double> v(cells + 1);
    v[0] = rng.uniform(-bound, bound);
    for (std::size_t i = 0; i < cells; ++i) {
      v[i + 1] = std::clamp(v[i] + rng.uniform(-1.0, 1.0) * step, -bound, bound);
    }
    return PiecewiseLinear(std::move(v));
  }

  // Random map into [0,1] (no Lipschitz constraint); used as a generator.
  static PiecewiseLinear random_into_unit(std::size_t cells, Rng& rng) {
    std::vector<double> v(cells + 1);
    for (double& x : v) x = rng.uniform();
    return PiecewiseLinear(std::move(v));
  }

 private:
  std::vector<double> values_;
};

// Expectation of f under the uniform discrete measure on the atoms.
inline double discrete_expectation(const PiecewiseLinear& f,
                                   const std::vector<double>& atoms) {
  double sum = 0.0;
  for (double a : atoms) sum += f(a);
  return sum / static_cast<double>(atoms.size());
}

}  // namespace momgan::testing
