#pragma once

#include <cstddef>
#include <vector>

#include "momgan/matrix.hpp"
#include "momgan/rng.hpp"

namespace momgan {

// Exact Wasserstein-1 between equal-size 1-D samples: mean absolute gap
// of sorted order statistics, the optimal coupling in one dimension.
double w1_exact_1d(const std::vector<double>& a, const std::vector<double>& b);

// Average of w1_exact_1d over n_proj uniform random unit directions.
double sliced_w1(const std::vector<Vector>& a, const std::vector<Vector>& b,
                 std::size_t n_proj, Rng& rng);

struct GaussianSummary {
  Vector mean;
  Matrix covariance;  // symmetric PSD
};

// Sample mean and unbiased sample covariance (symmetrized); needs n >= 2.
GaussianSummary fit_gaussian(const std::vector<Vector>& samples);

// Frechet distance between the fitted Gaussians:
//   |m1 - m2|^2 + tr(S1 + S2 - 2 (S1 S2)^{1/2})
// with the cross term evaluated as tr of psd_sqrt(sqrt(S1) S2 sqrt(S1)),
// which shares its trace with (S1 S2)^{1/2}. Clamped at zero.
double frechet_distance(const GaussianSummary& g1, const GaussianSummary& g2);

}  // namespace momgan
