#include "momgan/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "momgan/mom.hpp"

namespace momgan {

namespace {
constexpr double kE = 2.718281828459045235360287471353;
constexpr double kLogCap = 300.0;  // switch J to log-only past 1e300
}  // namespace

void BoundInputs::validate() const {
  if (n < 1 || m < 1 || p < 1 || K < 1) {
    throw std::invalid_argument("BoundInputs: counts must be >= 1");
  }
  if (eps < 0.0 || eps >= 0.5) {
    throw std::invalid_argument("BoundInputs: eps must be in [0, 0.5)");
  }
  if (!(q > 0.0) || q > 1.0) {
    throw std::invalid_argument("BoundInputs: q must be in (0, 1]");
  }
  if (eta <= 0.0 || eta > 1.0) {
    throw std::invalid_argument("BoundInputs: eta must be in (0, 1]");
  }
  if (t <= 0.0) throw std::invalid_argument("BoundInputs: t must be positive");
  if (r <= 0.0 || M <= 0.0 || a <= 0.0 || B <= 0.0 || sigma <= 0.0) {
    throw std::invalid_argument("BoundInputs: norm caps must be positive");
  }
  if (c_p <= 0.0) throw std::invalid_argument("BoundInputs: C_p must be positive");
  if (width_g < 1 || depth_g < 1 || width_d < 1 || depth_d < 1) {
    throw std::invalid_argument("BoundInputs: network sizes must be >= 1");
  }
}

double rademacher_nn_bound(double r, double M, double a, std::size_t L,
                           std::size_t n, double e_max_norm) {
  if (r < 0.0 || M < 0.0 || a < 0.0 || e_max_norm < 0.0) {
    throw std::invalid_argument("rademacher_nn_bound: negative input");
  }
  if (L < 1 || n < 1) {
    throw std::invalid_argument("rademacher_nn_bound: L and n must be >= 1");
  }
  const double depth = static_cast<double>(L);
  return 2.0 * r * std::sqrt(depth) * std::pow(a * M, depth) /
         std::sqrt(static_cast<double>(n)) * e_max_norm;
}

double eta_fraction(double eps, double alpha_val) {
  if (eps < 0.0) throw std::invalid_argument("eta_fraction: eps must be >= 0");
  if (!(2.0 * eps < alpha_val) || !(alpha_val < 1.0)) {
    throw std::invalid_argument("eta_fraction: need 2*eps < alpha < 1");
  }
  return 1.0 - eps / alpha_val;
}

double default_alpha(double eps, std::size_t K, std::size_t n) {
  const double ratio = static_cast<double>(K) / static_cast<double>(n);
  return std::min(0.99, std::max(2.02 * eps, ratio));
}

double mom_supremum_bound(double rad_block, double sigma, double B,
                          std::size_t K, std::size_t n, double eta) {
  if (eta <= 0.5) {
    throw std::invalid_argument("mom_supremum_bound: vacuous for eta <= 0.5");
  }
  if (rad_block < 0.0 || sigma < 0.0 || B < 0.0) {
    throw std::invalid_argument("mom_supremum_bound: negative input");
  }
  const double gap = 1.0 - 1.0 / (2.0 * eta);
  const double branch_rad = 16.0 * rad_block / gap;
  const double kk = static_cast<double>(K) * static_cast<double>(K);
  const double variance_cap = std::min(16.0 * sigma * sigma, 32.0 * B * B / kE);
  const double branch_var =
      std::sqrt(variance_cap * kk / (gap * static_cast<double>(n)));
  return std::max(branch_rad, branch_var);
}

double concentration_failure_bound(std::size_t K, double eta) {
  if (eta <= 0.5) {
    throw std::invalid_argument("concentration_failure_bound: need eta > 0.5");
  }
  const double gap = 1.0 - 1.0 / (2.0 * eta);
  return std::exp(-static_cast<double>(K) * eta / 8.0 * gap * gap);
}

std::size_t capacity_max_n(std::size_t width_g, std::size_t depth_g,
                           std::size_t p, double eps) {
  if (p < 1) throw std::invalid_argument("capacity_max_n: p must be >= 1");
  if (width_g < 7 * p + 1) {
    throw std::invalid_argument("capacity_max_n: width must be >= 7p+1");
  }
  if (depth_g < 2) {
    throw std::invalid_argument("capacity_max_n: depth must be >= 2");
  }
  if (eps < 0.0 || eps >= 1.0) {
    throw std::invalid_argument("capacity_max_n: eps must be in [0, 1)");
  }
  const double margin = static_cast<double>(width_g - p - 1);
  const double cap = margin / 2.0 *
                         std::floor(margin / (6.0 * static_cast<double>(p))) *
                         std::floor(static_cast<double>(depth_g) / 2.0) +
                     2.0;
  return static_cast<std::size_t>(std::floor(cap / (1.0 - eps)));
}

LogValue lipschitz_J(std::size_t s, std::size_t p, std::size_t width_d,
                     std::size_t depth_d, double b) {
  if (p < 1 || width_d < 1 || depth_d < 1) {
    throw std::invalid_argument("lipschitz_J: sizes must be >= 1");
  }
  const double sd = static_cast<double>(s);
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(width_d);
  const double ld = static_cast<double>(depth_d);

  // log10 of the prefactor (s+1) p^{s+1/2} L (N L)^{((4b-4) v 0)/p}.
  const double exponent = std::max(4.0 * b - 4.0, 0.0) / pd;
  double log_pre = std::log10(sd + 1.0) + (sd + 0.5) * std::log10(pd) +
                   std::log10(ld) + exponent * std::log10(nd * ld);

  // log10 of (1260 N^2 L^2 2^{L^2} + 19 s 7^s) via log-sum.
  const double log_first = std::log10(1260.0) + 2.0 * std::log10(nd) +
                           2.0 * std::log10(ld) + ld * ld * std::log10(2.0);
  double log_sum = log_first;
  if (s > 0) {
    const double log_second = std::log10(19.0 * sd) + sd * std::log10(7.0);
    const double hi = std::max(log_first, log_second);
    const double lo = std::min(log_first, log_second);
    log_sum = hi + std::log10(1.0 + std::pow(10.0, lo - hi));
  }

  LogValue out;
  out.log10_value = log_pre + log_sum;
  if (out.log10_value > kLogCap) {
    out.value = std::numeric_limits<double>::infinity();
    out.log_only = true;
  } else {
    out.value = std::pow(10.0, out.log10_value);
  }
  return out;
}

double approx_error_bound(std::size_t s, double b, std::size_t p,
                          std::size_t width, std::size_t depth) {
  if (width < 6 || depth < 2) {
    throw std::invalid_argument("approx_error_bound: need N >= 6 and L >= 2");
  }
  if (b <= 0.0) throw std::invalid_argument("approx_error_bound: b must be positive");
  const double sd = static_cast<double>(s);
  const double pd = static_cast<double>(p);
  const double base = std::floor(std::pow(
      static_cast<double>(width) * static_cast<double>(depth), 2.0 / pd));
  if (base < 1.0) {
    throw std::invalid_argument("approx_error_bound: floor((NL)^{2/p}) < 1");
  }
  const double p_exp = std::max(sd + b / 2.0, 1.0);
  return 6.0 * (sd + 1.0) * (sd + 1.0) * std::pow(pd, p_exp) * std::pow(base, -b);
}

ProbabilityResult failure_probability(std::size_t K, double eta, double t) {
  if (eta <= 0.5 || eta > 1.0) {
    throw std::invalid_argument("failure_probability: eta must be in (0.5, 1]");
  }
  if (t <= 0.0) throw std::invalid_argument("failure_probability: t must be positive");
  const double kd = static_cast<double>(K);
  const double gap = 1.0 - 1.0 / (2.0 * eta);
  ProbabilityResult out;
  out.raw = 1.0 - std::exp(-kd / 32.0) -
            2.0 * std::exp(-kd / (8.0 * eta) * gap * gap) - std::exp(-t);
  out.vacuous = out.raw <= 0.0;
  out.probability = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

double lipschitz_param_constant(const std::vector<double>& spec_a,
                                const std::vector<double>& spec_b,
                                double activation_lipschitz, double x_norm) {
  if (spec_a.size() != spec_b.size() || spec_a.size() < 2) {
    throw std::invalid_argument("lipschitz_param_constant: need matching layer lists");
  }
  const std::size_t layers = spec_a.size();  // L + 1
  const double depth = static_cast<double>(layers - 1);

  double best = 0.0;
  for (std::size_t skip = 0; skip < layers; ++skip) {
    double prod = 1.0;
    for (std::size_t j = 0; j < layers; ++j) {
      if (j == skip) continue;
      prod *= std::max(spec_a[j], spec_b[j]);
    }
    best = std::max(best, prod);
  }
  return 2.0 * std::pow(activation_lipschitz, depth) * std::sqrt(depth) *
         x_norm * best;
}

BoundReport theorem_total_bound(const BoundInputs& in) {
  in.validate();
  const double nd = static_cast<double>(in.n);
  const double md = static_cast<double>(in.m);
  const double kd = static_cast<double>(in.K);
  const double pd = static_cast<double>(in.p);
  const double sd = static_cast<double>(in.s);
  const double ld = static_cast<double>(in.depth_d);
  const double lg = static_cast<double>(in.depth_g);
  const double b = in.b();

  BoundReport rep;

  const double resolution = std::pow(in.c_p, 2.0 / pd) * std::pow(nd, 1.0 / pd) - 1.0;
  if (resolution <= 0.0) {
    rep.bias = std::numeric_limits<double>::infinity();
  } else {
    rep.bias = 12.0 * (sd + 1.0) * (sd + 1.0) *
               std::pow(pd, std::max(sd + b / 2.0, 1.0)) / std::pow(resolution, b);
  }

  const double m_pow_ld = std::pow(in.M, ld);
  rep.inlier_rademacher =
      4.0 * in.e_max_norm_x * in.r * std::sqrt(ld) * m_pow_ld / std::sqrt(nd);
  rep.block = std::sqrt(kd / ((1.0 - in.eps) * nd));

  if (in.eta > 0.5) {
    const double gap = 1.0 - 1.0 / (2.0 * in.eta);
    rep.mom_rademacher = 64.0 * std::sqrt(kd) * in.e_max_norm_x * in.r *
                         std::sqrt(ld) * m_pow_ld / (gap * std::sqrt(nd));
    const double variance_cap = std::min(16.0 * in.sigma * in.sigma, 32.0 / kE);
    rep.mom_variance = std::sqrt(variance_cap * kd * kd / (gap * nd));
    rep.mom = std::max(rep.mom_rademacher, rep.mom_variance);
  } else {
    rep.mom_rademacher = std::numeric_limits<double>::infinity();
    rep.mom_variance = std::numeric_limits<double>::infinity();
    rep.mom = std::numeric_limits<double>::infinity();
    rep.vacuous = true;
  }

  rep.sim_rademacher = 4.0 * in.r * std::sqrt(ld + lg + 1.0) *
                       std::pow(in.M, ld + lg + 1.0) * in.e_max_norm_z /
                       std::sqrt(md);
  rep.sim_deviation = 2.0 * std::sqrt(8.0 * in.t / md);

  rep.total = rep.bias + rep.inlier_rademacher + rep.mom + rep.sim_rademacher +
              rep.sim_deviation + rep.block;

  if (in.eta > 0.5) {
    rep.probability = failure_probability(in.K, in.eta, in.t);
    rep.vacuous = rep.vacuous || rep.probability.vacuous;
  } else {
    rep.probability.raw = 0.0;
    rep.probability.probability = 0.0;
    rep.probability.vacuous = true;
    rep.vacuous = true;
  }
  return rep;
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["bias"] = bias;
  doc["inlier_rademacher"] = inlier_rademacher;
  doc["block"] = block;
  doc["mom_rademacher"] = mom_rademacher;
  doc["mom_variance"] = mom_variance;
  doc["mom"] = mom;
  doc["sim_rademacher"] = sim_rademacher;
  doc["sim_deviation"] = sim_deviation;
  doc["total"] = total;
  doc["probability"] = probability.probability;
  doc["probability_raw"] = probability.raw;
  doc["vacuous"] = vacuous;
  return doc.dump(2);
}

ConcentrationReport verify_mom_concentration(std::size_t trials, std::size_t K,
                                             const ConcentrationSetup& setup,
                                             Rng& rng) {
  if (trials < 1000) {
    throw std::invalid_argument("verify_mom_concentration: need at least 1000 trials");
  }
  if (K < 2) {
    throw std::invalid_argument("verify_mom_concentration: K must be >= 2");
  }
  if (setup.family_slopes.empty()) {
    throw std::invalid_argument("verify_mom_concentration: empty function family");
  }
  const double max_corrupt = (1.0 - setup.eta) * static_cast<double>(K);
  if (static_cast<double>(setup.corrupt_blocks) > max_corrupt + 1e-12) {
    throw std::invalid_argument(
        "verify_mom_concentration: corrupt blocks exceed (1-eta)K");
  }

  const std::size_t n = K * setup.block_size;
  double max_abs_slope = 0.0;
  for (double a : setup.family_slopes) {
    max_abs_slope = std::max(max_abs_slope, std::abs(a));
  }
  const double sigma = max_abs_slope / std::sqrt(12.0);
  const double sup_bound = max_abs_slope / 2.0;

  // Block-size Rademacher complexity of the family, Monte Carlo over fresh
  // samples and signs. sup_a |(1/bs) sum xi_i a (x_i - 1/2)| factors into
  // max|a| times the |centered signed mean|.
  Rng rad_rng = rng.split(1);
  double rad = 0.0;
  for (std::size_t rep = 0; rep < setup.rad_reps; ++rep) {
    double signed_sum = 0.0;
    for (std::size_t i = 0; i < setup.block_size; ++i) {
      const double sign = (rad_rng.next_u64() & 1) ? 1.0 : -1.0;
      signed_sum += sign * (rad_rng.uniform() - 0.5);
    }
    rad += max_abs_slope *
           std::abs(signed_sum / static_cast<double>(setup.block_size));
  }
  rad /= static_cast<double>(setup.rad_reps);

  ConcentrationReport report;
  report.rad_estimate = rad;
  report.threshold = mom_supremum_bound(rad, sigma, sup_bound, K, n, setup.eta);
  report.bound = concentration_failure_bound(K, setup.eta);
  report.trials = trials;

  Rng trial_rng = rng.split(2);
  std::vector<double> data(n);
  std::vector<double> transformed(n);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (double& v : data) v = trial_rng.uniform();
    const BlockPartition part = partition(n, K, trial_rng);

    if (setup.corrupt_blocks > 0) {
      std::vector<std::size_t> order(K);
      for (std::size_t i = 0; i < K; ++i) order[i] = i;
      trial_rng.shuffle(order);
      for (std::size_t c = 0; c < setup.corrupt_blocks; ++c) {
        for (std::size_t idx : part.blocks[order[c]]) {
          data[idx] = setup.outlier_value;
        }
      }
    }

    double sup_dev = 0.0;
    for (double slope : setup.family_slopes) {
      for (std::size_t i = 0; i < n; ++i) {
        transformed[i] = slope * (data[i] - 0.5);
      }
      sup_dev = std::max(sup_dev, std::abs(mom(transformed, part).value));
    }
    if (sup_dev > report.threshold) ++report.failures;
  }

  report.rate = static_cast<double>(report.failures) / static_cast<double>(trials);
  report.mc_stderr =
      std::sqrt(report.rate * (1.0 - report.rate) / static_cast<double>(trials));
  return report;
}

}  // namespace momgan
