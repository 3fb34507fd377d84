#include "momgan/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "momgan/evaluation.hpp"

namespace momgan {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>{});
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("short write: " + path);
}

MlpSpec mlp_spec_from_json(const json& doc) {
  MlpSpec spec;
  spec.widths = doc.at("widths").get<std::vector<std::size_t>>();
  if (doc.contains("squash")) {
    const std::string squash = doc.at("squash").get<std::string>();
    if (squash == "sigmoid") spec.squash = Squash::sigmoid;
    else if (squash == "none") spec.squash = Squash::none;
    else throw std::runtime_error("config: unknown squash kind: " + squash);
  }
  if (doc.contains("activation_lipschitz")) {
    spec.activation_lipschitz = doc.at("activation_lipschitz").get<double>();
  }
  spec.validate();
  return spec;
}

NoiseModel noise_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "gaussian") {
    GaussianNoise g;
    if (doc.contains("mean")) g.mean = doc.at("mean").get<double>();
    if (doc.contains("stddev")) g.stddev = doc.at("stddev").get<double>();
    return g;
  }
  if (kind == "pareto") {
    ParetoNoise p;
    if (doc.contains("scale")) p.scale = doc.at("scale").get<double>();
    if (doc.contains("shape")) p.shape = doc.at("shape").get<double>();
    return p;
  }
  if (kind == "real_class") {
    return load_real_class_noise(doc.at("images").get<std::string>(),
                                 doc.at("labels").get<std::string>(),
                                 doc.at("label").get<int>());
  }
  throw std::runtime_error("config: unknown noise kind: " + kind);
}

std::string resolve_output_dir(const std::string& configured,
                               const std::optional<std::string>& override_opt) {
  if (override_opt) return *override_opt;
  if (const char* env = std::getenv("MOMGAN_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return configured;
}

}  // namespace

void ExperimentConfig::validate() const {
  train.validate();
  data.validate();
  contamination.validate();
  if (seeds.empty()) {
    throw std::invalid_argument("ExperimentConfig: seed list must be nonempty");
  }
  if (evaluation.holdout < 2) {
    throw std::invalid_argument("ExperimentConfig: holdout must be >= 2");
  }
  if (evaluation.projections < 1) {
    throw std::invalid_argument("ExperimentConfig: projections must be >= 1");
  }
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentConfig cfg;

  const json& tr = doc.at("train");
  cfg.train.learning_rate = tr.at("learning_rate").get<double>();
  cfg.train.blocks = tr.at("blocks").get<std::size_t>();
  cfg.train.clip = tr.at("clip").get<double>();
  cfg.train.disc_steps = tr.at("disc_steps").get<std::size_t>();
  cfg.train.batch_size = tr.at("batch_size").get<std::size_t>();
  cfg.train.epochs = tr.at("epochs").get<std::size_t>();
  cfg.train.latent_dim = tr.at("latent_dim").get<std::size_t>();
  cfg.train.generator = mlp_spec_from_json(tr.at("generator"));
  cfg.train.discriminator = mlp_spec_from_json(tr.at("discriminator"));
  if (tr.contains("init_std")) cfg.train.init_std = tr.at("init_std").get<double>();

  const json& da = doc.at("data");
  const std::string source = da.at("source").get<std::string>();
  if (source == "mixture8") cfg.data.source = DataSource::mixture8;
  else if (source == "ring") cfg.data.source = DataSource::ring;
  else if (source == "idx") cfg.data.source = DataSource::idx;
  else throw std::runtime_error("config: unknown data source: " + source);
  cfg.data.dimension = da.at("dimension").get<std::size_t>();
  if (da.contains("unit_support")) cfg.data.unit_support = da.at("unit_support").get<bool>();
  if (da.contains("idx_images")) cfg.data.idx_images = da.at("idx_images").get<std::string>();

  if (doc.contains("contamination")) {
    const json& co = doc.at("contamination");
    if (co.contains("mode")) {
      const std::string mode = co.at("mode").get<std::string>();
      if (mode == "per_batch") cfg.contamination.mode = ContaminationMode::per_batch;
      else if (mode == "per_block") cfg.contamination.mode = ContaminationMode::per_block;
      else throw std::runtime_error("config: unknown contamination mode: " + mode);
    }
    if (co.contains("batch_probability")) {
      cfg.contamination.batch_probability = co.at("batch_probability").get<double>();
    }
    if (co.contains("outlier_fraction")) {
      cfg.contamination.outlier_fraction = co.at("outlier_fraction").get<double>();
    }
    if (co.contains("block_fraction")) {
      cfg.contamination.block_fraction = co.at("block_fraction").get<double>();
    }
    if (co.contains("noise")) cfg.contamination.noise = noise_from_json(co.at("noise"));
  }

  if (doc.contains("evaluation")) {
    const json& ev = doc.at("evaluation");
    if (ev.contains("holdout")) cfg.evaluation.holdout = ev.at("holdout").get<std::size_t>();
    if (ev.contains("projections")) cfg.evaluation.projections = ev.at("projections").get<std::size_t>();
    if (ev.contains("eval_every")) cfg.evaluation.eval_every = ev.at("eval_every").get<std::size_t>();
  }

  if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
  if (doc.contains("seeds")) cfg.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();

  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_json(read_text(path));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<Vector> sample_generator(const MlpSpec& spec, const MlpParams& params,
                                     std::size_t count, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  Vector z(spec.input_dim());
  for (std::size_t i = 0; i < count; ++i) {
    for (double& v : z) v = rng.normal();
    out.push_back(forward(spec, params, z));
  }
  return out;
}

EvalScores score_samples(const std::vector<Vector>& holdout,
                         const std::vector<Vector>& fakes,
                         std::size_t projections, Rng& projection_rng) {
  EvalScores scores;
  scores.sliced_w1 = sliced_w1(holdout, fakes, projections, projection_rng);
  scores.frechet = frechet_distance(fit_gaussian(holdout), fit_gaussian(fakes));
  return scores;
}

std::size_t ksearch_minimize(std::size_t k_min, std::size_t k_max,
                             const std::function<double(std::size_t)>& score) {
  if (k_min >= k_max) {
    throw std::invalid_argument("ksearch_minimize: need k_min < k_max");
  }
  std::map<std::size_t, double> cache;
  auto cached = [&](std::size_t k) { return cache.find(k) != cache.end(); };
  auto probe = [&](std::size_t k) {
    if (!cached(k)) cache.emplace(k, score(k));
    return cache.at(k);
  };
  // The two probes of one shrink step run concurrently; score must
  // therefore tolerate two simultaneous callers.
  auto probe_pair = [&](std::size_t a, std::size_t b) {
    if (!cached(a) && !cached(b) && a != b) {
      std::future<double> fa = std::async(std::launch::async, score, a);
      const double vb = score(b);
      cache.emplace(a, fa.get());
      cache.emplace(b, vb);
    } else {
      probe(a);
      probe(b);
    }
  };

  std::size_t lo = k_min;
  std::size_t hi = k_max;
  while (hi - lo > 2) {
    const std::size_t m1 = lo + (hi - lo) / 3;
    const std::size_t m2 = hi - (hi - lo) / 3;
    probe_pair(m1, m2);
    if (cache.at(m1) <= cache.at(m2)) hi = m2;
    else lo = m1;
  }
  std::size_t best = lo;
  double best_score = probe(lo);
  for (std::size_t k = lo + 1; k <= hi; ++k) {
    const double value = probe(k);
    if (value < best_score) {
      best = k;
      best_score = value;
    }
  }
  return best;
}

namespace {

struct SeedRunResult {
  std::uint64_t seed = 0;
  TrainResult result;
  EvalScores final_scores;
};

// Clean holdout, per-epoch scoring hook, training, final scoring.
SeedRunResult run_one_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  const Rng root(seed, 0);

  Rng holdout_rng = root.split(6);
  const std::vector<Vector> holdout =
      sample_inliers(cfg.data, cfg.evaluation.holdout, holdout_rng);

  const std::size_t eval_every = cfg.evaluation.eval_every;
  EvalHook hook = [&](const MlpSpec& spec, const MlpParams& params,
                      std::size_t epoch) -> std::vector<double> {
    const bool due = (eval_every > 0 && epoch % eval_every == 0) || epoch == tc.epochs;
    if (!due) return {};
    Rng fake_rng = root.split(7).split(epoch);
    Rng proj_rng = root.split(8).split(epoch);
    const auto fakes = sample_generator(spec, params, holdout.size(), fake_rng);
    const EvalScores scores = score_samples(holdout, fakes, cfg.evaluation.projections, proj_rng);
    return {scores.sliced_w1, scores.frechet};
  };

  SeedRunResult out;
  out.seed = seed;
  out.result = train(tc, cfg.data, cfg.contamination, root, hook);
  const auto& last = out.result.metrics.epochs.back().eval_scores;
  out.final_scores.sliced_w1 = last.at(0);
  out.final_scores.frechet = last.at(1);
  return out;
}

std::string metrics_csv(const TrainMetrics& metrics) {
  std::ostringstream csv;
  csv << "epoch,mom_value,gen_loss,sliced_w1,frechet,seconds\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const EpochRecord& rec : metrics.epochs) {
    const double sw = rec.eval_scores.size() > 0 ? rec.eval_scores[0] : nan;
    const double fd = rec.eval_scores.size() > 1 ? rec.eval_scores[1] : nan;
    csv << rec.epoch << ',' << format_double(rec.mom_value) << ','
        << format_double(rec.gen_loss) << ',' << format_double(sw) << ','
        << format_double(fd) << ',' << format_double(rec.seconds) << '\n';
  }
  return csv.str();
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double sum = 0.0;
  for (double x : v) sum += (x - m) * (x - m);
  return std::sqrt(sum / static_cast<double>(v.size() - 1));
}

}  // namespace

int cmd_train(const std::string& config_path,
              const std::optional<std::string>& out_override,
              const std::optional<std::uint64_t>& seed_override) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 2;
  }
  if (seed_override) cfg.seeds = {*seed_override};
  const std::string out_dir = resolve_output_dir(cfg.output_dir, out_override);

  try {
    fs::create_directories(out_dir);

    // One worker per seed; all file writes happen below on this thread.
    std::vector<std::future<SeedRunResult>> futures;
    futures.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
      futures.push_back(std::async(std::launch::async,
                                   [&cfg, seed] { return run_one_seed(cfg, seed); }));
    }
    std::vector<SeedRunResult> runs;
    runs.reserve(futures.size());
    for (auto& f : futures) runs.push_back(f.get());

    std::vector<double> final_w1;
    std::vector<double> final_frechet;
    ordered_json per_seed = ordered_json::array();
    for (const SeedRunResult& run : runs) {
      const std::string tag = std::to_string(run.seed);
      write_text((fs::path(out_dir) / ("metrics_seed" + tag + ".csv")).string(),
                 metrics_csv(run.result.metrics));
      Checkpoint gen_ck{cfg.train.generator, run.result.generator, run.seed, 1};
      save_checkpoint((fs::path(out_dir) / ("generator_seed" + tag + ".json")).string(),
                      gen_ck);
      Checkpoint disc_ck{cfg.train.discriminator, run.result.discriminator, run.seed, 0};
      save_checkpoint((fs::path(out_dir) / ("discriminator_seed" + tag + ".json")).string(),
                      disc_ck);

      final_w1.push_back(run.final_scores.sliced_w1);
      final_frechet.push_back(run.final_scores.frechet);
      ordered_json entry;
      entry["seed"] = run.seed;
      entry["sliced_w1"] = run.final_scores.sliced_w1;
      entry["frechet"] = run.final_scores.frechet;
      entry["outliers_injected"] = run.result.metrics.total_outliers;
      entry["samples_seen"] = run.result.metrics.total_samples;
      per_seed.push_back(std::move(entry));
    }

    ordered_json summary;
    summary["config"] = config_path;
    summary["seeds"] = cfg.seeds;
    summary["blocks"] = cfg.train.blocks;
    summary["epochs"] = cfg.train.epochs;
    summary["sliced_w1_mean"] = mean_of(final_w1);
    summary["sliced_w1_std"] = stddev_of(final_w1);
    summary["frechet_mean"] = mean_of(final_frechet);
    summary["frechet_std"] = stddev_of(final_frechet);
    summary["per_seed"] = std::move(per_seed);
    write_text((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");

    std::cout << "trained " << cfg.seeds.size() << " seed(s): sliced_w1 "
              << format_double(mean_of(final_w1)) << " +/- "
              << format_double(stddev_of(final_w1)) << ", frechet "
              << format_double(mean_of(final_frechet)) << " +/- "
              << format_double(stddev_of(final_frechet)) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& config_path,
             std::uint64_t seed, const std::optional<std::string>& out_override) {
  Checkpoint ck;
  ExperimentConfig cfg;
  try {
    ck = load_checkpoint(checkpoint_path);
    cfg = ExperimentConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return 2;
  }
  try {
    if (ck.spec.output_dim() != cfg.data.dimension) {
      throw std::runtime_error("eval: checkpoint output dimension does not match data");
    }
    const Rng root(seed, 0);
    Rng holdout_rng = root.split(6);
    const auto holdout = sample_inliers(cfg.data, cfg.evaluation.holdout, holdout_rng);
    Rng fake_rng = root.split(7);
    const auto fakes = sample_generator(ck.spec, ck.params, holdout.size(), fake_rng);
    Rng proj_rng = root.split(8);
    const EvalScores scores =
        score_samples(holdout, fakes, cfg.evaluation.projections, proj_rng);

    ordered_json doc;
    doc["checkpoint"] = checkpoint_path;
    doc["seed"] = seed;
    doc["n_eval"] = holdout.size();
    doc["projections"] = cfg.evaluation.projections;
    doc["sliced_w1"] = scores.sliced_w1;
    doc["frechet"] = scores.frechet;
    const std::string text = doc.dump(2) + "\n";
    if (out_override) {
      fs::create_directories(fs::path(*out_override).parent_path().string().empty()
                                 ? "."
                                 : fs::path(*out_override).parent_path().string());
      write_text(*out_override, text);
    }
    std::cout << text;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

BoundInputs bound_inputs_from_json(const std::string& text) {
  const json doc = json::parse(text);
  BoundInputs in;
  in.n = doc.at("n").get<std::size_t>();
  in.m = doc.value("m", in.n);
  in.p = doc.at("p").get<std::size_t>();
  in.K = doc.at("K").get<std::size_t>();
  in.eps = doc.value("eps", 0.0);
  if (doc.contains("alpha")) in.alpha_val = doc.at("alpha").get<double>();
  if (doc.contains("eta")) {
    in.eta = doc.at("eta").get<double>();
  } else {
    if (in.alpha_val == 0.0) in.alpha_val = default_alpha(in.eps, in.K, in.n);
    in.eta = in.eps == 0.0 ? 1.0 : eta_fraction(in.eps, in.alpha_val);
  }
  in.r = doc.value("r", 1.0);
  in.M = doc.value("M", 1.0);
  in.a = doc.value("a", 1.0);
  in.B = doc.value("B", 1.0);
  in.sigma = doc.value("sigma", 1.0);
  in.width_g = doc.value("width_g", std::size_t{8});
  in.depth_g = doc.value("depth_g", std::size_t{2});
  in.width_d = doc.value("width_d", std::size_t{1});
  in.depth_d = doc.value("depth_d", std::size_t{1});
  in.s = doc.value("s", std::size_t{0});
  in.q = doc.value("q", 1.0);
  in.t = doc.value("t", 1.0);
  in.e_max_norm_x = doc.value("e_max_norm_x", doc.value("e_max_norm", 1.0));
  in.e_max_norm_z = doc.value("e_max_norm_z", in.e_max_norm_x);
  in.c_p = doc.value("c_p", 1.0);
  in.validate();
  return in;
}

int cmd_bounds(const std::string& inputs_path,
               const std::vector<std::size_t>& sweep_n) {
  BoundInputs in;
  try {
    in = bound_inputs_from_json(read_text(inputs_path));
  } catch (const std::exception& e) {
    std::cerr << "bounds: " << e.what() << "\n";
    return 2;
  }
  try {
    if (sweep_n.empty()) {
      const BoundReport rep = theorem_total_bound(in);
      std::cout << rep.to_json() << "\n";
      if (rep.vacuous) std::cout << "note: probability guarantee is vacuous\n";
    } else {
      std::cout << "n,total,probability,vacuous\n";
      for (std::size_t n : sweep_n) {
        BoundInputs probe = in;
        probe.n = n;
        const BoundReport rep = theorem_total_bound(probe);
        std::cout << n << ',' << format_double(rep.total) << ','
                  << format_double(rep.probability.probability) << ','
                  << (rep.vacuous ? 1 : 0) << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "bounds: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_ksearch(const std::string& config_path, std::size_t k_min,
                std::size_t k_max, const std::optional<std::string>& out_override) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "ksearch: " << e.what() << "\n";
    return 2;
  }
  const std::size_t cap = cfg.train.batch_size / 6;
  if (k_min < 2 || k_min >= k_max || k_max > cap) {
    std::cerr << "ksearch: need 2 <= k_min < k_max <= floor(w/6) = " << cap << "\n";
    return 2;
  }

  try {
    const std::string out_dir = resolve_output_dir(cfg.output_dir, out_override);
    fs::create_directories(out_dir);

    // Short probes: a tenth of the configured epochs, scored by sliced-W1
    // against a clean holdout, first seed only. Probes may run two at a
    // time, so the record map is guarded.
    const std::size_t probe_epochs = std::max<std::size_t>(1, cfg.train.epochs / 10);
    const std::uint64_t seed = cfg.seeds.front();

    std::map<std::size_t, double> probes;
    std::mutex probes_mutex;
    auto probe_score = [&](std::size_t k) {
      ExperimentConfig probe_cfg = cfg;
      probe_cfg.train.blocks = k;
      probe_cfg.train.epochs = probe_epochs;
      probe_cfg.evaluation.eval_every = 0;  // final score only
      const SeedRunResult run = run_one_seed(probe_cfg, seed);
      const std::lock_guard<std::mutex> lock(probes_mutex);
      probes[k] = run.final_scores.sliced_w1;
      return run.final_scores.sliced_w1;
    };
    const std::size_t best = ksearch_minimize(k_min, k_max, probe_score);

    ordered_json doc;
    doc["k_min"] = k_min;
    doc["k_max"] = k_max;
    doc["probe_epochs"] = probe_epochs;
    doc["seed"] = seed;
    ordered_json probes_json = ordered_json::array();
    for (const auto& [k, score] : probes) {
      probes_json.push_back(ordered_json{{"K", k}, {"sliced_w1", score}});
    }
    doc["probes"] = std::move(probes_json);
    doc["chosen_K"] = best;
    write_text((fs::path(out_dir) / "ksearch.json").string(), doc.dump(2) + "\n");
    std::cout << "chosen K = " << best << "\n";
  } catch (const std::exception& e) {
    std::cerr << "ksearch: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_generate(const std::string& checkpoint_path, std::size_t count,
                 std::uint64_t seed, const std::string& out_path) {
  Checkpoint ck;
  try {
    ck = load_checkpoint(checkpoint_path);
  } catch (const std::exception& e) {
    std::cerr << "generate: " << e.what() << "\n";
    return 2;
  }
  try {
    Rng rng = Rng(seed, 0).split(7);
    const auto samples = sample_generator(ck.spec, ck.params, count, rng);
    std::ostringstream csv;
    for (const Vector& x : samples) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j > 0) csv << ',';
        csv << format_double(x[j]);
      }
      csv << '\n';
    }
    write_text(out_path, csv.str());
    std::cout << "wrote " << count << " samples to " << out_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "generate: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace momgan
