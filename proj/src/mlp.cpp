#include "momgan/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momgan {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_shapes(const MlpSpec& spec, const MlpParams& params) {
  if (params.weights.size() != spec.layer_count()) {
    throw std::invalid_argument("mlp: layer count does not match spec");
  }
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (params.weights[l].rows() != spec.widths[l + 1] ||
        params.weights[l].cols() != spec.widths[l]) {
      throw std::invalid_argument("mlp: weight shape does not match spec");
    }
  }
}

}  // namespace

std::size_t MlpSpec::max_hidden_width() const {
  std::size_t n = 0;
  for (std::size_t l = 1; l + 1 < widths.size(); ++l) n = std::max(n, widths[l]);
  return n;
}

void MlpSpec::validate() const {
  if (widths.size() < 3) {
    throw std::invalid_argument("MlpSpec: need at least one hidden layer");
  }
  for (std::size_t w : widths) {
    if (w < 1) throw std::invalid_argument("MlpSpec: widths must be >= 1");
  }
  if (activation_lipschitz <= 0.0) {
    throw std::invalid_argument("MlpSpec: activation Lipschitz constant must be positive");
  }
}

MlpParams init_gaussian(const MlpSpec& spec, double stddev, Rng& rng) {
  spec.validate();
  if (stddev <= 0.0) {
    throw std::invalid_argument("init_gaussian: stddev must be positive");
  }
  MlpParams params;
  params.weights.reserve(spec.layer_count());
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    Matrix w(spec.widths[l + 1], spec.widths[l]);
    for (double& v : w.data()) v = rng.normal(0.0, stddev);
    params.weights.push_back(std::move(w));
  }
  return params;
}

Gradients zero_gradients(const MlpParams& params) {
  Gradients grads;
  grads.reserve(params.weights.size());
  for (const Matrix& w : params.weights) grads.emplace_back(w.rows(), w.cols());
  return grads;
}

Vector forward(const MlpSpec& spec, const MlpParams& params, const Vector& x) {
  check_shapes(spec, params);
  if (x.size() != spec.input_dim()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  Vector h = x;
  const std::size_t last = params.weights.size() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    h = matvec(params.weights[l], h);
    for (double& v : h) v = std::max(v, 0.0);
  }
  h = matvec(params.weights[last], h);
  if (spec.squash == Squash::sigmoid) {
    for (double& v : h) v = sigmoid(v);
  }
  return h;
}

double forward_scalar(const MlpSpec& spec, const MlpParams& params, const Vector& x) {
  return forward(spec, params, x)[0];
}

ForwardCache forward_cached(const MlpSpec& spec, const MlpParams& params,
                            const Vector& x) {
  check_shapes(spec, params);
  if (x.size() != spec.input_dim()) {
    throw std::invalid_argument("forward_cached: input dimension mismatch");
  }
  ForwardCache cache;
  cache.layer_inputs.reserve(params.weights.size());
  Vector h = x;
  const std::size_t last = params.weights.size() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    cache.layer_inputs.push_back(h);
    h = matvec(params.weights[l], h);
    for (double& v : h) v = std::max(v, 0.0);
  }
  cache.layer_inputs.push_back(h);
  h = matvec(params.weights[last], h);
  if (spec.squash == Squash::sigmoid) {
    for (double& v : h) v = sigmoid(v);
  }
  cache.output = std::move(h);
  return cache;
}

Vector backward_cached(const MlpSpec& spec, const MlpParams& params,
                       const ForwardCache& cache, const Vector& cotangent,
                       Gradients& grads) {
  if (cotangent.size() != spec.output_dim()) {
    throw std::invalid_argument("backward_cached: cotangent dimension mismatch");
  }
  Vector c = cotangent;
  if (spec.squash == Squash::sigmoid) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double s = cache.output[i];
      c[i] *= s * (1.0 - s);
    }
  }
  for (std::size_t li = params.weights.size(); li-- > 0;) {
    const Matrix& w = params.weights[li];
    const Vector& in = cache.layer_inputs[li];
    Matrix& g = grads[li];
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double ci = c[i];
      if (ci == 0.0) continue;
      for (std::size_t j = 0; j < w.cols(); ++j) g(i, j) += ci * in[j];
    }
    Vector next(w.cols(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double ci = c[i];
      if (ci == 0.0) continue;
      for (std::size_t j = 0; j < w.cols(); ++j) next[j] += w(i, j) * ci;
    }
    if (li > 0) {
      // ReLU mask: the recorded layer input of weight li is the activation,
      // which is positive exactly where the preactivation was.
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (in[j] <= 0.0) next[j] = 0.0;
      }
    }
    c = std::move(next);
  }
  return c;
}

Gradients backward(const MlpSpec& spec, const MlpParams& params,
                   const std::vector<Vector>& xs, const Vector& signs) {
  if (spec.output_dim() != 1) {
    throw std::invalid_argument("backward: scalar-output network required");
  }
  if (xs.size() != signs.size()) {
    throw std::invalid_argument("backward: batch and sign sizes differ");
  }
  Gradients grads = zero_gradients(params);
  Vector cot(1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ForwardCache cache = forward_cached(spec, params, xs[i]);
    cot[0] = signs[i];
    backward_cached(spec, params, cache, cot, grads);
  }
  return grads;
}

double f_norm(const MlpParams& params) {
  double sum = 0.0;
  for (const Matrix& w : params.weights) {
    for (double v : w.data()) sum += v * v;
  }
  return std::sqrt(sum);
}

double max_spectral_norm(const MlpParams& params, Rng& rng) {
  double m = 0.0;
  for (const Matrix& w : params.weights) {
    m = std::max(m, spectral_norm(w, 200, rng));
  }
  return m;
}

}  // namespace momgan
