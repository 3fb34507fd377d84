#include "momgan/contamination.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace momgan {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t at) {
  if (at + 4 > bytes.size()) {
    throw std::runtime_error("idx: truncated header");
  }
  return (static_cast<std::uint32_t>(bytes[at]) << 24) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[at + 3]);
}

void append_be32(std::vector<std::uint8_t>& bytes, std::uint32_t v) {
  bytes.push_back(static_cast<std::uint8_t>(v >> 24));
  bytes.push_back(static_cast<std::uint8_t>(v >> 16));
  bytes.push_back(static_cast<std::uint8_t>(v >> 8));
  bytes.push_back(static_cast<std::uint8_t>(v));
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace

Vector IdxImages::image(std::size_t i) const {
  if (i >= count) throw std::out_of_range("IdxImages::image: index out of range");
  const std::size_t sz = image_size();
  return Vector(pixels.begin() + static_cast<std::ptrdiff_t>(i * sz),
                pixels.begin() + static_cast<std::ptrdiff_t>((i + 1) * sz));
}

IdxImages load_idx_images(const std::string& path) {
  const auto bytes = read_file(path);
  if (read_be32(bytes, 0) != kImageMagic) {
    throw std::runtime_error("idx: wrong image magic in " + path);
  }
  IdxImages out;
  out.count = read_be32(bytes, 4);
  out.rows = read_be32(bytes, 8);
  out.cols = read_be32(bytes, 12);
  const std::size_t expected = 16 + out.count * out.rows * out.cols;
  if (bytes.size() != expected) {
    throw std::runtime_error("idx: payload size mismatch in " + path);
  }
  out.pixels.resize(out.count * out.rows * out.cols);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = static_cast<double>(bytes[16 + i]) / 255.0;
  }
  return out;
}

void write_idx_images(const std::string& path, const IdxImages& images) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 + images.pixels.size());
  append_be32(bytes, kImageMagic);
  append_be32(bytes, static_cast<std::uint32_t>(images.count));
  append_be32(bytes, static_cast<std::uint32_t>(images.rows));
  append_be32(bytes, static_cast<std::uint32_t>(images.cols));
  for (double v : images.pixels) {
    const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
    bytes.push_back(static_cast<std::uint8_t>(std::lround(scaled)));
  }
  write_file(path, bytes);
}

std::vector<std::uint8_t> load_idx_labels(const std::string& path) {
  const auto bytes = read_file(path);
  if (read_be32(bytes, 0) != kLabelMagic) {
    throw std::runtime_error("idx: wrong label magic in " + path);
  }
  const std::size_t count = read_be32(bytes, 4);
  if (bytes.size() != 8 + count) {
    throw std::runtime_error("idx: payload size mismatch in " + path);
  }
  return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.end());
}

void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + labels.size());
  append_be32(bytes, kLabelMagic);
  append_be32(bytes, static_cast<std::uint32_t>(labels.size()));
  bytes.insert(bytes.end(), labels.begin(), labels.end());
  write_file(path, bytes);
}

void DatasetSpec::validate() const {
  if (dimension < 1) {
    throw std::invalid_argument("DatasetSpec: dimension must be >= 1");
  }
  if (source != DataSource::idx && dimension != 2) {
    throw std::invalid_argument("DatasetSpec: synthetic sources are 2-D");
  }
  if (source == DataSource::idx && idx_images.empty()) {
    throw std::invalid_argument("DatasetSpec: idx source needs an image path");
  }
}

namespace {

Vector sample_mixture8(bool clamp, Rng& rng) {
  // Centers on a circle of radius 0.35 around (0.5, 0.5), bump std 0.02.
  const std::size_t comp = static_cast<std::size_t>(rng.below(8));
  const double angle = kTwoPi * static_cast<double>(comp) / 8.0;
  Vector x{0.5 + 0.35 * std::cos(angle) + 0.02 * rng.normal(),
           0.5 + 0.35 * std::sin(angle) + 0.02 * rng.normal()};
  if (clamp) {
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  }
  return x;
}

Vector sample_ring(Rng& rng) {
  // Uniform over the annulus 0.25 <= r <= 0.45; stays inside the unit square.
  const double r2 = 0.25 * 0.25 + rng.uniform() * (0.45 * 0.45 - 0.25 * 0.25);
  const double r = std::sqrt(r2);
  const double angle = kTwoPi * rng.uniform();
  return Vector{0.5 + r * std::cos(angle), 0.5 + r * std::sin(angle)};
}

}  // namespace

std::vector<Vector> sample_inliers(const DatasetSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_inliers: n must be >= 1");
  std::vector<Vector> out;
  out.reserve(n);
  switch (spec.source) {
    case DataSource::mixture8:
      for (std::size_t i = 0; i < n; ++i) out.push_back(sample_mixture8(spec.unit_support, rng));
      break;
    case DataSource::ring:
      for (std::size_t i = 0; i < n; ++i) out.push_back(sample_ring(rng));
      break;
    case DataSource::idx: {
      const IdxImages images = load_idx_images(spec.idx_images);
      if (images.count == 0) {
        throw std::runtime_error("sample_inliers: idx file holds no images");
      }
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back(images.image(static_cast<std::size_t>(rng.below(images.count))));
      }
      break;
    }
  }
  return out;
}

double pareto_icdf(double u, double scale, double shape) {
  if (scale <= 0.0 || shape <= 0.0) {
    throw std::invalid_argument("pareto: scale and shape must be positive");
  }
  return scale * std::pow(u, -1.0 / shape);
}

double sample_pareto(double scale, double shape, Rng& rng) {
  return pareto_icdf(rng.uniform(), scale, shape);
}

RealClassNoise load_real_class_noise(const std::string& images_path,
                                     const std::string& labels_path, int label) {
  const IdxImages images = load_idx_images(images_path);
  const auto labels = load_idx_labels(labels_path);
  if (labels.size() != images.count) {
    throw std::runtime_error("real-class noise: image/label count mismatch");
  }
  auto selected = std::make_shared<std::vector<Vector>>();
  for (std::size_t i = 0; i < images.count; ++i) {
    if (static_cast<int>(labels[i]) == label) selected->push_back(images.image(i));
  }
  if (selected->empty()) {
    throw std::runtime_error("real-class noise: no image carries the requested label");
  }
  return RealClassNoise{label, std::move(selected)};
}

Vector draw_noise(const NoiseModel& noise, std::size_t dimension, Rng& rng) {
  Vector x(dimension);
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    for (double& v : x) v = rng.normal(g->mean, g->stddev);
  } else if (const auto* p = std::get_if<ParetoNoise>(&noise)) {
    for (double& v : x) v = sample_pareto(p->scale, p->shape, rng);
  } else {
    const auto& rc = std::get<RealClassNoise>(noise);
    const Vector& img = (*rc.images)[static_cast<std::size_t>(rng.below(rc.images->size()))];
    if (img.size() != dimension) {
      throw std::runtime_error("real-class noise: image dimension mismatch");
    }
    x = img;
  }
  return x;
}

void ContaminationSpec::validate() const {
  if (outlier_fraction < 0.0 || outlier_fraction >= 0.5) {
    throw std::invalid_argument("ContaminationSpec: outlier fraction must be in [0, 0.5)");
  }
  if (batch_probability < 0.0 || batch_probability > 1.0) {
    throw std::invalid_argument("ContaminationSpec: batch probability must be in [0, 1]");
  }
  if (block_fraction < 0.0 || block_fraction > 1.0) {
    throw std::invalid_argument("ContaminationSpec: block fraction must be in [0, 1]");
  }
}

std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

InjectionResult inject_batch(const std::vector<Vector>& batch,
                             const ContaminationSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.mode != ContaminationMode::per_batch) {
    throw std::invalid_argument("inject_batch: spec is not in per-batch mode");
  }
  InjectionResult result;
  result.batch = batch;
  const std::size_t w = batch.size();
  const std::size_t n_out = round_half_up(spec.outlier_fraction * static_cast<double>(w));
  if (n_out > w) {
    throw std::invalid_argument("inject_batch: rounded outlier count exceeds the batch");
  }

  const bool polluted = rng.uniform() < spec.batch_probability;
  if (!polluted || n_out == 0) return result;

  std::vector<std::size_t> positions(w);
  std::iota(positions.begin(), positions.end(), 0);
  rng.shuffle(positions);
  positions.resize(n_out);
  std::sort(positions.begin(), positions.end());

  const std::size_t dim = w > 0 ? batch.front().size() : 0;
  for (std::size_t pos : positions) {
    result.batch[pos] = draw_noise(spec.noise, dim, rng);
  }
  result.outliers = std::move(positions);
  return result;
}

std::vector<Vector> pollute_blocks(const std::vector<Vector>& data,
                                   const BlockPartition& part, double fraction,
                                   const NoiseModel& noise, Rng& rng) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("pollute_blocks: fraction must be in [0, 1]");
  }
  std::vector<Vector> out = data;
  const std::size_t k = part.block_count();
  const std::size_t n_blocks = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(k)));
  if (n_blocks == 0) return out;

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  const std::size_t dim = data.empty() ? 0 : data.front().size();
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t idx : part.blocks[order[b]]) {
      if (idx >= out.size()) {
        throw std::out_of_range("pollute_blocks: partition index outside data");
      }
      out[idx] = draw_noise(noise, dim, rng);
    }
  }
  return out;
}

}  // namespace momgan
