#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "momgan/bounds.hpp"
#include "momgan/checkpoint.hpp"
#include "momgan/contamination.hpp"
#include "momgan/trainer.hpp"

namespace momgan {

struct EvalSettings {
  std::size_t holdout = 2000;     // clean holdout size; fakes match it
  std::size_t projections = 100;  // sliced-W1 directions
  std::size_t eval_every = 0;     // 0 = final epoch only
};

// One JSON document drives every subcommand: training hyperparameters,
// the inlier source, the pollution protocol, evaluation settings, the
// output directory and the seed list.
struct ExperimentConfig {
  TrainConfig train;
  DatasetSpec data;
  ContaminationSpec contamination;
  EvalSettings evaluation;
  std::string output_dir = "out";
  std::vector<std::uint64_t> seeds = {1};

  void validate() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

// Decimal with 17 significant digits; enough to reproduce any double.
std::string format_double(double v);

// Draw `count` generator samples from standard-normal latents.
std::vector<Vector> sample_generator(const MlpSpec& spec, const MlpParams& params,
                                     std::size_t count, Rng& rng);

struct EvalScores {
  double sliced_w1 = 0.0;
  double frechet = 0.0;
};

// Scores a fake sample against a clean holdout of equal size.
EvalScores score_samples(const std::vector<Vector>& holdout,
                         const std::vector<Vector>& fakes,
                         std::size_t projections, Rng& projection_rng);

// Integer ternary search for the minimum of a unimodal score curve;
// probes are memoized and ties resolve to the smaller K. The two probes
// of a shrink step run concurrently, so score must be thread-safe.
std::size_t ksearch_minimize(std::size_t k_min, std::size_t k_max,
                             const std::function<double(std::size_t)>& score);

// Subcommand drivers; each returns a process exit status (0 success,
// 2 configuration/input problems, 1 runtime failure). The MOMGAN_OUT
// environment variable overrides the configured output directory.
int cmd_train(const std::string& config_path,
              const std::optional<std::string>& out_override,
              const std::optional<std::uint64_t>& seed_override);
int cmd_eval(const std::string& checkpoint_path, const std::string& config_path,
             std::uint64_t seed, const std::optional<std::string>& out_override);
int cmd_bounds(const std::string& inputs_path,
               const std::vector<std::size_t>& sweep_n);
int cmd_ksearch(const std::string& config_path, std::size_t k_min,
                std::size_t k_max, const std::optional<std::string>& out_override);
int cmd_generate(const std::string& checkpoint_path, std::size_t count,
                 std::uint64_t seed, const std::string& out_path);

// Shared by cmd_bounds and tests: BoundInputs from a JSON document.
BoundInputs bound_inputs_from_json(const std::string& text);

}  // namespace momgan
