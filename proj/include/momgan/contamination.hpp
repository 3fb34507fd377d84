#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "momgan/matrix.hpp"
#include "momgan/mom.hpp"
#include "momgan/rng.hpp"

namespace momgan {

// ---------------------------------------------------------------------------
// IDX ubyte files (the MNIST container format)
// ---------------------------------------------------------------------------

struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;  // count*rows*cols values in [0, 1]

  std::size_t image_size() const { return rows * cols; }
  Vector image(std::size_t i) const;
};

// Parses the ubyte image format: big-endian magic 0x00000803, three
// big-endian dimension words, then raw bytes rescaled to [0,1].
// Throws std::runtime_error on a wrong magic or a short payload.
IdxImages load_idx_images(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);

// Label files use magic 0x00000801 and one byte per label.
std::vector<std::uint8_t> load_idx_labels(const std::string& path);
void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels);

// ---------------------------------------------------------------------------
// Inlier sources
// ---------------------------------------------------------------------------

enum class DataSource { mixture8, ring, idx };

struct DatasetSpec {
  DataSource source = DataSource::mixture8;
  std::size_t dimension = 2;  // p
  bool unit_support = true;   // samples confined to [0,1]^p
  std::string idx_images;     // for DataSource::idx

  void validate() const;
};

// mixture8: 8 Gaussian bumps on a circle, rescaled into [0,1]^2.
// ring: uniform annulus inside [0,1]^2. idx: images scaled to [0,1].
std::vector<Vector> sample_inliers(const DatasetSpec& spec, std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Outlier injection
// ---------------------------------------------------------------------------

// Inverse-CDF Pareto draw: scale * U^{-1/shape}, always >= scale.
double pareto_icdf(double u, double scale, double shape);
double sample_pareto(double scale, double shape, Rng& rng);

struct GaussianNoise {
  double mean = 0.5;
  double stddev = 1.0;
};

struct ParetoNoise {
  double scale = 1.0;
  double shape = 2.0;
};

// Replacement samples drawn from a designated class of a secondary
// image set (load with load_real_class_noise).
struct RealClassNoise {
  int label = 0;
  std::shared_ptr<const std::vector<Vector>> images;
};

using NoiseModel = std::variant<GaussianNoise, ParetoNoise, RealClassNoise>;

RealClassNoise load_real_class_noise(const std::string& images_path,
                                     const std::string& labels_path, int label);

// One outlier draw of the given dimension.
Vector draw_noise(const NoiseModel& noise, std::size_t dimension, Rng& rng);

enum class ContaminationMode { per_batch, per_block };

struct ContaminationSpec {
  ContaminationMode mode = ContaminationMode::per_batch;
  double batch_probability = 0.5;  // chance a batch is polluted at all
  double outlier_fraction = 0.0;   // pi: share replaced inside a polluted batch
  NoiseModel noise = GaussianNoise{};
  double block_fraction = 0.0;     // per-block mode: share of blocks replaced

  void validate() const;
};

struct InjectionResult {
  std::vector<Vector> batch;
  std::vector<std::size_t> outliers;  // replaced positions, sorted
};

// Per-batch protocol: with probability batch_probability, replace
// round(pi*w) uniformly chosen entries with noise draws (round half up);
// otherwise the batch passes through untouched. Entries that are not
// replaced are preserved bit for bit.
InjectionResult inject_batch(const std::vector<Vector>& batch,
                             const ContaminationSpec& spec, Rng& rng);

// Per-block protocol: floor(fraction*K) blocks chosen uniformly, every
// sample inside them replaced by noise.
std::vector<Vector> pollute_blocks(const std::vector<Vector>& data,
                                   const BlockPartition& part, double fraction,
                                   const NoiseModel& noise, Rng& rng);

// round-half-up, the convention used for pi*w.
std::size_t round_half_up(double x);

}  // namespace momgan
