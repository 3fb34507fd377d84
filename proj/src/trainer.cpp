#include "momgan/trainer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace momgan {

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning rate must be positive");
  if (clip <= 0.0) throw std::invalid_argument("TrainConfig: clip bound must be positive");
  if (blocks < 1 || blocks > batch_size) {
    throw std::invalid_argument("TrainConfig: need 1 <= K <= batch size");
  }
  if (disc_steps < 1) throw std::invalid_argument("TrainConfig: disc_steps must be >= 1");
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (latent_dim < 1) throw std::invalid_argument("TrainConfig: latent_dim must be >= 1");
  generator.validate();
  discriminator.validate();
  if (generator.input_dim() != latent_dim) {
    throw std::invalid_argument("TrainConfig: generator input must match latent_dim");
  }
  if (generator.output_dim() != discriminator.input_dim()) {
    throw std::invalid_argument("TrainConfig: generator output must match discriminator input");
  }
  if (discriminator.output_dim() != 1) {
    throw std::invalid_argument("TrainConfig: discriminator must be scalar-valued");
  }
  if (init_std <= 0.0) throw std::invalid_argument("TrainConfig: init_std must be positive");
}

RmspropState RmspropState::zeros_like(const MlpParams& params) {
  RmspropState state;
  state.second_moment.reserve(params.weights.size());
  for (const Matrix& w : params.weights) {
    state.second_moment.emplace_back(w.rows(), w.cols());
  }
  return state;
}

void rmsprop_update(MlpParams& theta, const Gradients& grad, RmspropState& state,
                    double alpha) {
  if (grad.size() != theta.weights.size() ||
      state.second_moment.size() != theta.weights.size()) {
    throw std::invalid_argument("rmsprop_update: layer count mismatch");
  }
  for (std::size_t l = 0; l < theta.weights.size(); ++l) {
    Matrix& w = theta.weights[l];
    const Matrix& g = grad[l];
    Matrix& v = state.second_moment[l];
    if (!w.same_shape(g) || !w.same_shape(v)) {
      throw std::invalid_argument("rmsprop_update: shape mismatch");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.data()[i];
      double& vi = v.data()[i];
      vi = state.decay * vi + (1.0 - state.decay) * gi * gi;
      w.data()[i] -= alpha * gi / (std::sqrt(vi) + state.epsilon);
    }
  }
}

void clip_params(MlpParams& theta, double c) {
  if (c <= 0.0) throw std::invalid_argument("clip_params: bound must be positive");
  for (Matrix& w : theta.weights) {
    for (double& v : w.data()) {
      if (v > c) v = c;
      else if (v < -c) v = -c;
    }
  }
}

namespace {

Gradients negate(Gradients grads) {
  for (Matrix& g : grads) {
    for (double& v : g.data()) v = -v;
  }
  return grads;
}

void add_scaled(Gradients& into, const Gradients& from, double scale) {
  for (std::size_t l = 0; l < into.size(); ++l) {
    for (std::size_t i = 0; i < into[l].size(); ++i) {
      into[l].data()[i] += scale * from[l].data()[i];
    }
  }
}

}  // namespace

DiscStepDiagnostics discriminator_step(
    const MlpSpec& d_spec, MlpParams& d_params, RmspropState& d_state,
    const MlpSpec& g_spec, const MlpParams& g_params,
    const std::vector<Vector>& batch, const std::vector<Vector>& noise,
    std::size_t k, double alpha, double clip_c, Rng& partition_rng,
    const BlockPartition* frozen_partition) {
  const std::size_t w = batch.size();
  if (noise.size() != w) {
    throw std::invalid_argument("discriminator_step: noise and batch sizes differ");
  }
  if (k < 1 || k > w) {
    throw std::invalid_argument("discriminator_step: need 1 <= K <= batch size");
  }

  // Scores of the real points pick the median block.
  std::vector<double> scores(w);
  for (std::size_t i = 0; i < w; ++i) {
    scores[i] = forward_scalar(d_spec, d_params, batch[i]);
  }
  BlockPartition local;
  const BlockPartition* part = frozen_partition;
  if (part == nullptr) {
    local = partition(w, k, partition_rng);
    part = &local;
  }
  const MomResult med = mom(scores, *part);

  // Median-block mean gradient of the scores.
  const std::vector<std::size_t>& block = part->blocks[med.median_block];
  std::vector<Vector> block_points;
  block_points.reserve(block.size());
  for (std::size_t idx : block) block_points.push_back(batch[idx]);
  const double block_weight = 1.0 / static_cast<double>(block.size());
  Gradients objective = backward(d_spec, d_params, block_points,
                                 Vector(block.size(), block_weight));

  // Minus the fake batch mean gradient.
  std::vector<Vector> fakes;
  fakes.reserve(w);
  double fake_sum = 0.0;
  for (const Vector& z : noise) {
    fakes.push_back(forward(g_spec, g_params, z));
    fake_sum += forward_scalar(d_spec, d_params, fakes.back());
  }
  const double fake_weight = -1.0 / static_cast<double>(w);
  const Gradients fake_grad =
      backward(d_spec, d_params, fakes, Vector(w, fake_weight));
  add_scaled(objective, fake_grad, 1.0);

  // The inner problem is a max: descend the negated objective, then clip.
  rmsprop_update(d_params, negate(std::move(objective)), d_state, alpha);
  clip_params(d_params, clip_c);

  DiscStepDiagnostics diag;
  diag.mom_value = med.value;
  diag.fake_mean = fake_sum / static_cast<double>(w);
  diag.median_block = med.median_block;
  return diag;
}

double generator_step(const MlpSpec& g_spec, MlpParams& g_params,
                      RmspropState& g_state, const MlpSpec& d_spec,
                      const MlpParams& d_params,
                      const std::vector<Vector>& noise, double alpha) {
  const std::size_t w = noise.size();
  if (w == 0) throw std::invalid_argument("generator_step: empty noise batch");

  // Chain the discriminator's input cotangent back through the generator.
  Gradients fake_path = zero_gradients(g_params);
  Gradients d_scratch = zero_gradients(d_params);
  const double weight = 1.0 / static_cast<double>(w);
  double fake_sum = 0.0;
  const Vector unit{1.0};
  for (const Vector& z : noise) {
    const ForwardCache g_cache = forward_cached(g_spec, g_params, z);
    const ForwardCache d_cache = forward_cached(d_spec, d_params, g_cache.output);
    fake_sum += d_cache.output[0];
    Vector input_cot =
        backward_cached(d_spec, d_params, d_cache, unit, d_scratch);
    for (double& v : input_cot) v *= weight;
    backward_cached(g_spec, g_params, g_cache, input_cot, fake_path);
  }

  // Objective gradient is the negated mean fake score path; descend it.
  rmsprop_update(g_params, negate(std::move(fake_path)), g_state, alpha);
  return fake_sum / static_cast<double>(w);
}

namespace {

std::vector<Vector> draw_latents(std::size_t w, std::size_t dim, Rng& rng) {
  std::vector<Vector> zs(w, Vector(dim));
  for (Vector& z : zs) {
    for (double& v : z) v = rng.normal();
  }
  return zs;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const DatasetSpec& data,
                  const ContaminationSpec& pollution, const Rng& root,
                  const EvalHook& eval_hook) {
  if (cfg.learning_rate <= 0.0 || cfg.clip <= 0.0) {
    throw std::invalid_argument("train: learning rate and clip must be positive");
  }
  if (cfg.blocks < 1 || cfg.blocks > cfg.batch_size) {
    throw std::invalid_argument("train: need 1 <= K <= batch size");
  }
  if (cfg.disc_steps < 1) throw std::invalid_argument("train: disc_steps must be >= 1");
  cfg.generator.validate();
  cfg.discriminator.validate();
  pollution.validate();

  Rng init_d = root.split(0);
  Rng init_g = root.split(1);
  Rng data_rng = root.split(2);
  Rng pollution_rng = root.split(3);
  Rng noise_rng = root.split(4);
  Rng partition_rng = root.split(5);

  TrainResult result;
  result.discriminator = init_gaussian(cfg.discriminator, cfg.init_std, init_d);
  result.generator = init_gaussian(cfg.generator, cfg.init_std, init_g);
  RmspropState d_state = RmspropState::zeros_like(result.discriminator);
  RmspropState g_state = RmspropState::zeros_like(result.generator);

  const bool per_block = pollution.mode == ContaminationMode::per_block;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochRecord record;
    record.epoch = epoch;

    DiscStepDiagnostics diag;
    for (std::size_t td = 0; td < cfg.disc_steps; ++td) {
      std::vector<Vector> batch = sample_inliers(data, cfg.batch_size, data_rng);
      BlockPartition part;
      if (per_block) {
        part = partition(cfg.batch_size, cfg.blocks, partition_rng);
        batch = pollute_blocks(batch, part, pollution.block_fraction,
                               pollution.noise, pollution_rng);
        const std::size_t polluted =
            static_cast<std::size_t>(pollution.block_fraction *
                                     static_cast<double>(cfg.blocks)) *
            part.block_size();
        record.outliers_injected += polluted;
      } else {
        InjectionResult injected = inject_batch(batch, pollution, pollution_rng);
        record.outliers_injected += injected.outliers.size();
        batch = std::move(injected.batch);
      }
      record.samples_seen += cfg.batch_size;

      const std::vector<Vector> noise =
          draw_latents(cfg.batch_size, cfg.latent_dim, noise_rng);
      diag = discriminator_step(cfg.discriminator, result.discriminator, d_state,
                                cfg.generator, result.generator, batch, noise,
                                cfg.blocks, cfg.learning_rate, cfg.clip,
                                partition_rng, per_block ? &part : nullptr);
      if (!std::isfinite(diag.mom_value) || !std::isfinite(diag.fake_mean)) {
        throw std::runtime_error("train: non-finite discriminator loss at epoch " +
                                 std::to_string(epoch));
      }
    }

    const std::vector<Vector> gen_noise =
        draw_latents(cfg.batch_size, cfg.latent_dim, noise_rng);
    const double fake_mean =
        generator_step(cfg.generator, result.generator, g_state,
                       cfg.discriminator, result.discriminator, gen_noise,
                       cfg.learning_rate);
    if (!std::isfinite(fake_mean)) {
      throw std::runtime_error("train: non-finite generator loss at epoch " +
                               std::to_string(epoch));
    }

    record.mom_value = diag.mom_value;
    record.gen_loss = -fake_mean;
    if (eval_hook) {
      record.eval_scores = eval_hook(cfg.generator, result.generator, epoch);
    }
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.metrics.total_outliers += record.outliers_injected;
    result.metrics.total_samples += record.samples_seen;
    result.metrics.epochs.push_back(std::move(record));
  }
  return result;
}

}  // namespace momgan
