#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "momgan/rng.hpp"

namespace momgan {

// Inputs of the non-asymptotic error bound. Counts follow the usual cast:
// n real samples (eps*n of them outliers), m simulated samples, data
// dimension p, K blocks. The network class is described by the F-norm
// radius r, spectral cap M, activation Lipschitz constant a, sup bound B,
// score standard deviation sigma, and the width/depth pairs of generator
// and discriminator. The evaluation smoothness is b = s + q. e_max_norm_x
// estimates E max_i |x_i| over the inliers (it also serves the
// single-block factor); e_max_norm_z the same for the latents.
struct BoundInputs {
  std::size_t n = 1;
  std::size_t m = 1;
  std::size_t p = 1;
  std::size_t K = 1;
  double eps = 0.0;
  double alpha_val = 0.0;  // 0 means "derive a default"
  double eta = 1.0;
  double r = 1.0;
  double M = 1.0;
  double a = 1.0;
  double B = 1.0;
  double sigma = 1.0;
  std::size_t width_g = 8, depth_g = 2;
  std::size_t width_d = 1, depth_d = 1;
  std::size_t s = 0;
  double q = 1.0;
  double t = 1.0;
  double e_max_norm_x = 1.0;
  double e_max_norm_z = 1.0;
  double c_p = 1.0;

  double b() const { return static_cast<double>(s) + q; }
  void validate() const;
};

// 2 r sqrt(L) (aM)^L / sqrt(n) * E max|x|, the network complexity bound.
double rademacher_nn_bound(double r, double M, double a, std::size_t L,
                           std::size_t n, double e_max_norm);

// Sane-block fraction 1 - eps/alpha; requires 2*eps < alpha < 1.
double eta_fraction(double eps, double alpha_val);

// A default alpha obeying the constraints 2*eps < alpha < 1 and alpha <= K/n
// where possible: min(0.99, max(2.02*eps, K/n)).
double default_alpha(double eps, std::size_t K, std::size_t n);

// Deviation threshold for the supremum of the median-of-means process:
//   16*rad_block/(1-(2 eta)^{-1})  v  sqrt([(16 sigma^2) ^ (32 B^2/e)] K^2
//                                          / ([1-(2 eta)^{-1}] n))
// where ^ is min and v is max. Throws for eta <= 0.5 (vacuous regime).
double mom_supremum_bound(double rad_block, double sigma, double B,
                          std::size_t K, std::size_t n, double eta);

// Failure probability of the supremum bound above at sane fraction eta:
// exp(-K*eta/8 * (1 - 1/(2 eta))^2).
double concentration_failure_bound(std::size_t K, double eta);

// Largest n with (1-eps)*n <= (W-p-1)/2 * floor((W-p-1)/(6p)) * floor(L/2) + 2.
// Requires width >= 7p+1 and depth >= 2.
std::size_t capacity_max_n(std::size_t width_g, std::size_t depth_g,
                           std::size_t p, double eps);

// A value that may exceed the double range; log10_value is always valid,
// value is +inf once past ~1e300 and log_only is set.
struct LogValue {
  double value = 0.0;
  double log10_value = 0.0;
  bool log_only = false;
};

// Lipschitz cap of the discriminator class:
//   (s+1) p^{s+1/2} L (N L)^{((4b-4) v 0)/p} (1260 N^2 L^2 2^{L^2} + 19 s 7^s).
LogValue lipschitz_J(std::size_t s, std::size_t p, std::size_t width_d,
                     std::size_t depth_d, double b);

// Network approximation error over the unit cube:
//   6 (s+1)^2 p^{(s+b/2) v 1} floor((N L)^{2/p})^{-b},  N >= 6, L >= 2.
double approx_error_bound(std::size_t s, double b, std::size_t p,
                          std::size_t width, std::size_t depth);

struct ProbabilityResult {
  double probability = 0.0;  // max(0, raw)
  double raw = 0.0;
  bool vacuous = false;      // raw <= 0
};

// 1 - exp(-K/32) - 2 exp(-K/(8 eta) (1 - 1/(2 eta))^2) - exp(-t),
// clamped into [0, 1] with the vacuity flagged rather than hidden.
ProbabilityResult failure_probability(std::size_t K, double eta, double t);

// Parameter-space Lipschitz factor of a network pair at input norm |x|:
//   2 a^L sqrt(L) |x| max_l prod_{j != l} max(spec_a[j], spec_b[j]);
// spec_a/spec_b hold the per-layer spectral norms (L+1 entries each).
double lipschitz_param_constant(const std::vector<double>& spec_a,
                                const std::vector<double>& spec_b,
                                double activation_lipschitz, double x_norm);

struct BoundReport {
  double bias = 0.0;
  double inlier_rademacher = 0.0;
  double block = 0.0;
  double mom_rademacher = 0.0;
  double mom_variance = 0.0;
  double mom = 0.0;  // max of the two branches
  double sim_rademacher = 0.0;
  double sim_deviation = 0.0;
  double total = 0.0;
  ProbabilityResult probability;
  bool vacuous = false;  // probability vacuous or eta <= 0.5

  std::string to_json() const;
};

// Assembles the full bound with the explicit constants:
//   12 (s+1)^2 p^{(s+b/2) v 1} / [C_p^{2/p} n^{1/p} - 1]^b      (bias)
// + 4 E|x| r sqrt(L_D) M^{L_D} / sqrt(n)                        (inliers)
// + [64 sqrt(K) E|x| r sqrt(L_D) M^{L_D} / ((1-(2 eta)^{-1}) sqrt(n))]
//     v sqrt([(16 sigma^2) ^ (32/e)] K^2 / ((1-(2 eta)^{-1}) n))  (MoM)
// + 4 r sqrt(L_D+L_G+1) M^{L_D+L_G+1} E|z| / sqrt(m)            (simulated)
// + 2 sqrt(8 t / m) + sqrt(K / ((1-eps) n)).
BoundReport theorem_total_bound(const BoundInputs& inputs);

// ---------------------------------------------------------------------------
// Monte Carlo verification of the MoM concentration statement
// ---------------------------------------------------------------------------

// The probed family: linear functionals f_a(x) = a (x - 1/2) on the
// uniform inlier law over [0,1], so E f_a = 0, Var f_a = a^2/12 and
// sup|f_a| = |a|/2 exactly. corrupt_blocks blocks (at most (1-eta)K) are
// filled with the outlier value before each trial's MoM is taken.
struct ConcentrationSetup {
  std::size_t block_size = 32;  // n = K * block_size
  std::vector<double> family_slopes = {-1.0, -0.6, -0.2, 0.2, 0.6, 1.0};
  double eta = 1.0;
  std::size_t corrupt_blocks = 0;
  double outlier_value = 1e6;
  std::size_t rad_reps = 200;   // Monte Carlo estimate of the block-size
                                // Rademacher complexity
};

struct ConcentrationReport {
  double threshold = 0.0;      // deviation level from the displayed bound
  double rad_estimate = 0.0;   // estimated block-size Rademacher complexity
  double bound = 0.0;          // theoretical failure probability
  std::size_t failures = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double mc_stderr = 0.0;
};

ConcentrationReport verify_mom_concentration(std::size_t trials, std::size_t K,
                                             const ConcentrationSetup& setup,
                                             Rng& rng);

}  // namespace momgan
