#pragma once

#include <cstddef>
#include <vector>

#include "momgan/matrix.hpp"
#include "momgan/rng.hpp"

namespace momgan {

enum class Squash { none, sigmoid };

// Shape of a bias-free feed-forward ReLU network: widths hold
// D0..D_{L+1}, so a spec with W widths has L = W - 2 hidden layers and
// L + 1 weight matrices. Discriminators use output width 1 and no squash;
// generators targeting [0,1]^p squash with an elementwise sigmoid.
struct MlpSpec {
  std::vector<std::size_t> widths;
  double activation_lipschitz = 1.0;  // 1 for ReLU
  Squash squash = Squash::none;

  std::size_t input_dim() const { return widths.front(); }
  std::size_t output_dim() const { return widths.back(); }
  std::size_t hidden_layers() const { return widths.size() - 2; }  // L
  std::size_t layer_count() const { return widths.size() - 1; }    // L + 1 matrices
  std::size_t max_hidden_width() const;                            // N

  void validate() const;  // throws std::invalid_argument
};

// Weight matrices only; the network class carries no bias vectors, which
// makes bias-free positive homogeneity and the layer norm functionals exact.
struct MlpParams {
  std::vector<Matrix> weights;  // weights[l] has shape D_{l+1} x D_l
};

using Gradients = std::vector<Matrix>;

MlpParams init_gaussian(const MlpSpec& spec, double stddev, Rng& rng);
Gradients zero_gradients(const MlpParams& params);

Vector forward(const MlpSpec& spec, const MlpParams& params, const Vector& x);
double forward_scalar(const MlpSpec& spec, const MlpParams& params, const Vector& x);

// Activations recorded during a forward pass, enough to replay the
// reverse sweep: layer_inputs[l] is the input of weight l, output is
// post-squash.
struct ForwardCache {
  std::vector<Vector> layer_inputs;
  Vector output;
};

ForwardCache forward_cached(const MlpSpec& spec, const MlpParams& params,
                            const Vector& x);

// Reverse sweep from a cotangent on the (post-squash) output. Accumulates
// parameter gradients into grads and returns the cotangent on the input,
// so generator/discriminator compositions chain through it. The ReLU
// subgradient at 0 is taken as 0.
Vector backward_cached(const MlpSpec& spec, const MlpParams& params,
                       const ForwardCache& cache, const Vector& cotangent,
                       Gradients& grads);

// Gradient of sum_i signs[i] * forward_scalar(xs[i]) for scalar-output nets.
Gradients backward(const MlpSpec& spec, const MlpParams& params,
                   const std::vector<Vector>& xs, const Vector& signs);

// Square root of the sum of squared entries across every layer.
double f_norm(const MlpParams& params);

// Largest spectral norm over the layers (power iteration, 200 steps).
double max_spectral_norm(const MlpParams& params, Rng& rng);

}  // namespace momgan
