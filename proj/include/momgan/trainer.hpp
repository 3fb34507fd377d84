#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "momgan/contamination.hpp"
#include "momgan/mlp.hpp"
#include "momgan/mom.hpp"
#include "momgan/rng.hpp"

namespace momgan {

// Hyperparameters of the alternating training loop: learning rate alpha,
// block count K, clip bound c, discriminator steps per epoch h_d, batch
// size w, epochs T, latent dimension k, and the two network shapes.
struct TrainConfig {
  double learning_rate = 3e-3;
  std::size_t blocks = 4;      // K
  double clip = 0.1;           // c
  std::size_t disc_steps = 5;  // h_d
  std::size_t batch_size = 64; // w
  std::size_t epochs = 60;     // T
  std::size_t latent_dim = 1;
  MlpSpec generator;
  MlpSpec discriminator;
  double init_std = 0.02;
  std::uint64_t seed = 0;

  void validate() const;
};

// Running second moments, one accumulator per weight entry. Entries stay
// nonnegative by construction.
struct RmspropState {
  std::vector<Matrix> second_moment;
  double decay = 0.9;
  double epsilon = 1e-8;

  static RmspropState zeros_like(const MlpParams& params);
};

// v <- decay*v + (1-decay)*g^2; theta <- theta - alpha * g / (sqrt(v) + eps).
void rmsprop_update(MlpParams& theta, const Gradients& grad, RmspropState& state,
                    double alpha);

// Clamp every entry of theta to [-c, c].
void clip_params(MlpParams& theta, double c);

struct DiscStepDiagnostics {
  double mom_value = 0.0;       // median-of-means of the real scores
  double fake_mean = 0.0;       // batch mean of the fake scores
  std::size_t median_block = 0;
};

// One discriminator ascent step: partition the real batch, locate the
// median block of the discriminator scores, form the gradient as the
// median-block mean gradient minus the fake batch mean gradient, take an
// RMSProp ascent step, then clip. The median block is frozen within the
// step: the gradient treats block membership as fixed. Pass a partition
// to reuse one sampled elsewhere (per-block pollution); otherwise a fresh
// uniformly random partition is drawn from partition_rng.
DiscStepDiagnostics discriminator_step(
    const MlpSpec& d_spec, MlpParams& d_params, RmspropState& d_state,
    const MlpSpec& g_spec, const MlpParams& g_params,
    const std::vector<Vector>& batch, const std::vector<Vector>& noise,
    std::size_t k, double alpha, double clip_c, Rng& partition_rng,
    const BlockPartition* frozen_partition = nullptr);

// One generator descent step on -(1/w) sum d(g(z)); no clipping.
// Returns the pre-update mean discriminator score of the fakes.
double generator_step(const MlpSpec& g_spec, MlpParams& g_params,
                      RmspropState& g_state, const MlpSpec& d_spec,
                      const MlpParams& d_params,
                      const std::vector<Vector>& noise, double alpha);

struct EpochRecord {
  std::size_t epoch = 0;
  double mom_value = 0.0;  // from the last discriminator step of the epoch
  double gen_loss = 0.0;   // -(mean fake score) before the generator update
  std::vector<double> eval_scores;
  double seconds = 0.0;
  std::size_t outliers_injected = 0;
  std::size_t samples_seen = 0;
};

struct TrainMetrics {
  std::vector<EpochRecord> epochs;
  std::size_t total_outliers = 0;
  std::size_t total_samples = 0;
};

struct TrainResult {
  MlpParams generator;
  MlpParams discriminator;
  TrainMetrics metrics;
};

// Optional per-epoch scoring callback; its values land in the epoch record.
using EvalHook =
    std::function<std::vector<double>(const MlpSpec&, const MlpParams&, std::size_t)>;

// The full loop: T epochs of h_d discriminator steps (fresh polluted batch
// and fresh noise each) followed by one generator step. Latents are
// standard normal. Derived rng streams: 0 discriminator init, 1 generator
// init, 2 data, 3 pollution, 4 latent noise, 5 partitions; a mean-based
// baseline sharing the root consumes streams 0-4 identically and never
// touches 5. Aborts with a diagnostic if a loss turns non-finite.
TrainResult train(const TrainConfig& cfg, const DatasetSpec& data,
                  const ContaminationSpec& pollution, const Rng& root,
                  const EvalHook& eval_hook = {});

}  // namespace momgan
