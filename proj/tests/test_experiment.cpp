#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "momgan/experiment.hpp"

using namespace momgan;
namespace fs = std::filesystem;

namespace {

std::string small_config_json(const std::string& out_dir) {
  std::ostringstream json;
  json << R"({
  "train": {
    "learning_rate": 0.005, "blocks": 2, "clip": 0.1, "disc_steps": 1,
    "batch_size": 16, "epochs": 1, "latent_dim": 2, "init_std": 0.02,
    "generator": {"widths": [2, 8, 2], "squash": "sigmoid"},
    "discriminator": {"widths": [2, 8, 1]}
  },
  "data": {"source": "mixture8", "dimension": 2, "unit_support": true},
  "contamination": {"mode": "per_batch", "batch_probability": 0.5,
                    "outlier_fraction": 0.04,
                    "noise": {"kind": "gaussian", "mean": 6.0, "stddev": 0.5}},
  "evaluation": {"holdout": 64, "projections": 16, "eval_every": 0},
  "output_dir": ")" << out_dir << R"(",
  "seeds": [11, 12]
})";
  return json.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>{});
}

// The seconds column is wall time; everything before it must reproduce.
std::string strip_last_column(const std::string& csv) {
  std::ostringstream out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    out << (cut == std::string::npos ? line : line.substr(0, cut)) << '\n';
  }
  return out.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parses, validates, and rejects nonsense") {
  const ExperimentConfig cfg = ExperimentConfig::from_json(small_config_json("x"));
  CHECK(cfg.train.blocks == 2);
  CHECK(cfg.train.generator.squash == Squash::sigmoid);
  CHECK(cfg.seeds.size() == 2);
  CHECK(cfg.data.source == DataSource::mixture8);

  CHECK_THROWS(ExperimentConfig::from_json("{"));
  CHECK_THROWS(ExperimentConfig::from_json("{}"));

  std::string bad = small_config_json("x");
  const auto at = bad.find("\"blocks\": 2");
  bad.replace(at, 11, "\"blocks\": 99");  // K > batch size
  CHECK_THROWS(ExperimentConfig::from_json(bad));
}

TEST_CASE("format_double round trips through 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, 123456.789}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("ksearch_minimize finds the minimum of unimodal curves") {
  auto quadratic = [](std::size_t k) {
    const double d = static_cast<double>(k) - 4.0;
    return d * d;
  };
  for (std::size_t hi = 5; hi <= 24; ++hi) {
    std::size_t brute = 2;
    double best = quadratic(2);
    for (std::size_t k = 3; k <= hi; ++k) {
      if (quadratic(k) < best) {
        best = quadratic(k);
        brute = k;
      }
    }
    CHECK(ksearch_minimize(2, hi, quadratic) == brute);
  }

  // Adjacent interval evaluates both ends.
  int calls = 0;
  auto counted = [&](std::size_t k) {
    ++calls;
    return k == 3 ? 0.0 : 1.0;
  };
  CHECK(ksearch_minimize(3, 4, counted) == 3);
  CHECK(calls == 2);

  CHECK_THROWS_AS(ksearch_minimize(4, 4, counted), std::invalid_argument);

  // Steep-then-shallow shape typical of the score-vs-K curve.
  auto hinge = [](std::size_t k) {
    const double kd = static_cast<double>(k);
    return k <= 6 ? 10.0 - kd * 1.5 : 1.0 + (kd - 6.0) * 0.05;
  };
  CHECK(ksearch_minimize(2, 20, hinge) == 6);
}

TEST_CASE("cmd_train smoke run: files, rows, reruns byte-identical") {
  TempDir dir("momgan_train_test");
  const std::string config_path = (dir.path / "config.json").string();
  const std::string out_a = (dir.path / "out_a").string();
  const std::string out_b = (dir.path / "out_b").string();
  {
    std::ofstream out(config_path);
    out << small_config_json((dir.path / "unused").string());
  }

  REQUIRE(cmd_train(config_path, out_a, std::nullopt) == 0);
  REQUIRE(cmd_train(config_path, out_b, std::nullopt) == 0);

  for (const char* seed : {"11", "12"}) {
    const std::string csv_a = slurp(out_a + "/metrics_seed" + seed + ".csv");
    // Fixed header plus one row for the single epoch.
    CHECK(csv_a.rfind("epoch,mom_value,gen_loss,sliced_w1,frechet,seconds\n", 0) == 0);
    CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 2);
    const std::string csv_b = slurp(out_b + "/metrics_seed" + seed + ".csv");
    CHECK(strip_last_column(csv_a) == strip_last_column(csv_b));
    CHECK(slurp(out_a + "/generator_seed" + seed + ".json") ==
          slurp(out_b + "/generator_seed" + seed + ".json"));
  }
  CHECK(fs::exists(out_a + "/summary.json"));
  CHECK(slurp(out_a + "/summary.json") == slurp(out_b + "/summary.json"));

  CHECK(cmd_train((dir.path / "missing.json").string(), out_a, std::nullopt) == 2);
}

TEST_CASE("cmd_eval scores a checkpoint deterministically") {
  TempDir dir("momgan_eval_test");
  const std::string config_path = (dir.path / "config.json").string();
  const std::string out_dir = (dir.path / "out").string();
  {
    std::ofstream out(config_path);
    out << small_config_json(out_dir);
  }
  REQUIRE(cmd_train(config_path, out_dir, std::uint64_t{11}) == 0);
  const std::string ck = out_dir + "/generator_seed11.json";

  const std::string scores_a = (dir.path / "scores_a.json").string();
  const std::string scores_b = (dir.path / "scores_b.json").string();
  REQUIRE(cmd_eval(ck, config_path, 5, scores_a) == 0);
  REQUIRE(cmd_eval(ck, config_path, 5, scores_b) == 0);
  CHECK(slurp(scores_a) == slurp(scores_b));
  CHECK(slurp(scores_a).find("sliced_w1") != std::string::npos);

  CHECK(cmd_eval((dir.path / "nope.json").string(), config_path, 5, std::nullopt) == 2);
}

TEST_CASE("identical samples score zero in both metrics") {
  Rng rng(3, 0);
  DatasetSpec data;
  data.source = DataSource::mixture8;
  data.dimension = 2;
  const auto holdout = sample_inliers(data, 256, rng);
  Rng proj(4, 0);
  const EvalScores scores = score_samples(holdout, holdout, 32, proj);
  CHECK(scores.sliced_w1 == doctest::Approx(0.0));
  CHECK(scores.frechet == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("cmd_bounds prints a report and sweeps monotonically") {
  TempDir dir("momgan_bounds_test");
  const std::string inputs_path = (dir.path / "inputs.json").string();
  {
    std::ofstream out(inputs_path);
    out << R"({"n": 1000, "m": 1000, "p": 2, "K": 8, "eps": 0.02, "eta": 0.9,
               "r": 2.0, "M": 1.1, "depth_d": 3, "depth_g": 3, "s": 0, "q": 1.0,
               "t": 2.0, "e_max_norm_x": 1.4, "e_max_norm_z": 2.0})";
  }
  CHECK(cmd_bounds(inputs_path, {}) == 0);
  CHECK(cmd_bounds(inputs_path, {100, 1000, 10000}) == 0);
  CHECK(cmd_bounds((dir.path / "nope.json").string(), {}) == 2);

  const BoundInputs in = bound_inputs_from_json(slurp(inputs_path));
  CHECK(in.K == 8);
  CHECK(in.eta == doctest::Approx(0.9));

  // A sane-fraction at or below one half is reported as vacuous, not an error.
  const std::string vacuous_path = (dir.path / "vacuous.json").string();
  {
    std::ofstream out(vacuous_path);
    out << R"({"n": 1000, "p": 2, "K": 8, "eta": 0.4})";
  }
  CHECK(cmd_bounds(vacuous_path, {}) == 0);
}

TEST_CASE("evaluation scores are stable across evaluation seeds") {
  // Same trained generator, two different evaluation seeds, large n_eval:
  // the Monte Carlo wobble must stay inside 5%.
  Rng data_rng(17, 0);
  DatasetSpec data;
  data.source = DataSource::mixture8;
  data.dimension = 2;

  MlpSpec gen;
  gen.widths = {2, 16, 2};
  gen.squash = Squash::sigmoid;
  Rng init(18, 0);
  const MlpParams params = init_gaussian(gen, 0.5, init);

  auto evaluate = [&](std::uint64_t seed) {
    const Rng root(seed, 0);
    Rng holdout_rng = root.split(6);
    const auto holdout = sample_inliers(data, 10000, holdout_rng);
    Rng fake_rng = root.split(7);
    const auto fakes = sample_generator(gen, params, holdout.size(), fake_rng);
    Rng proj_rng = root.split(8);
    return score_samples(holdout, fakes, 1000, proj_rng);
  };
  const EvalScores a = evaluate(1);
  const EvalScores b = evaluate(2);
  CHECK(std::abs(a.sliced_w1 - b.sliced_w1) / a.sliced_w1 < 0.05);
  CHECK(std::abs(a.frechet - b.frechet) / std::max(a.frechet, 1e-9) < 0.05);
}

TEST_CASE("cmd_ksearch probes an interval and records the choice") {
  TempDir dir("momgan_ksearch_test");
  const std::string config_path = (dir.path / "config.json").string();
  const std::string out_dir = (dir.path / "out").string();
  {
    std::ofstream out(config_path);
    // epochs 10 so each probe trains a single epoch; batch 64 widens the
    // admissible interval to floor(64/6) = 10
    std::string cfg = small_config_json(out_dir);
    auto at = cfg.find("\"epochs\": 1");
    cfg.replace(at, 11, "\"epochs\": 10");
    at = cfg.find("\"batch_size\": 16");
    cfg.replace(at, 16, "\"batch_size\": 64");
    out << cfg;
  }
  REQUIRE(cmd_ksearch(config_path, 2, 8, out_dir) == 0);
  const std::string record = slurp(out_dir + "/ksearch.json");
  CHECK(record.find("chosen_K") != std::string::npos);
  CHECK(record.find("probes") != std::string::npos);

  // Interval outside [2, floor(w/6)] is rejected up front.
  CHECK(cmd_ksearch(config_path, 2, 50, out_dir) == 2);
  CHECK(cmd_ksearch(config_path, 5, 5, out_dir) == 2);
}

TEST_CASE("idx files can back the inlier source") {
  TempDir dir("momgan_idx_source_test");
  const std::string images_path = (dir.path / "digits.ubyte").string();
  IdxImages images;
  images.count = 5;
  images.rows = 3;
  images.cols = 3;
  images.pixels.resize(45);
  for (std::size_t i = 0; i < images.pixels.size(); ++i) {
    images.pixels[i] = static_cast<double>(i % 255) / 255.0;
  }
  write_idx_images(images_path, images);

  DatasetSpec spec;
  spec.source = DataSource::idx;
  spec.dimension = 9;
  spec.idx_images = images_path;
  Rng rng(19, 0);
  const auto sample = sample_inliers(spec, 32, rng);
  CHECK(sample.size() == 32);
  for (const Vector& x : sample) {
    CHECK(x.size() == 9);
    for (double v : x) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  Rng r1(20, 0);
  Rng r2(20, 0);
  const auto a = sample_inliers(spec, 8, r1);
  const auto b = sample_inliers(spec, 8, r2);
  CHECK(a == b);
}

TEST_CASE("cmd_generate writes the requested sample count") {
  TempDir dir("momgan_gen_test");
  const std::string config_path = (dir.path / "config.json").string();
  const std::string out_dir = (dir.path / "out").string();
  {
    std::ofstream out(config_path);
    out << small_config_json(out_dir);
  }
  REQUIRE(cmd_train(config_path, out_dir, std::uint64_t{11}) == 0);

  const std::string samples = (dir.path / "samples.csv").string();
  REQUIRE(cmd_generate(out_dir + "/generator_seed11.json", 25, 7, samples) == 0);
  const std::string text = slurp(samples);
  CHECK(std::count(text.begin(), text.end(), '\n') == 25);
}
