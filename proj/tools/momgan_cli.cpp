#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momgan/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"median-of-means GAN: training, evaluation, bound calculator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint_path;
  std::string inputs_path;
  std::string out_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed = 0;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t count = 1000;
  std::vector<std::size_t> sweep_n;

  auto* train = app.add_subcommand("train", "run the training loop per seed");
  train->add_option("--config", config_path, "experiment config (JSON)")->required();
  std::string train_out;
  auto* train_out_opt = train->add_option("--out", train_out, "output directory override");
  std::uint64_t train_seed = 0;
  auto* train_seed_opt = train->add_option("--seed", train_seed, "single-seed override");

  auto* eval = app.add_subcommand("eval", "score a generator checkpoint");
  eval->add_option("--checkpoint", checkpoint_path, "generator checkpoint")->required();
  eval->add_option("--config", config_path, "experiment config (JSON)")->required();
  eval->add_option("--seed", seed, "evaluation seed");
  std::string eval_out;
  auto* eval_out_opt = eval->add_option("--out", eval_out, "write scores to this file");

  auto* bounds = app.add_subcommand("bounds", "evaluate the error bound");
  bounds->add_option("--inputs", inputs_path, "bound inputs (JSON)")->required();
  bounds->add_option("--sweep-n", sweep_n, "emit a table over these sample sizes");

  auto* ksearch = app.add_subcommand("ksearch", "search the block count");
  ksearch->add_option("--config", config_path, "experiment config (JSON)")->required();
  ksearch->add_option("--k-min", k_min, "lower end of the search interval");
  ksearch->add_option("--k-max", k_max, "upper end of the search interval");
  std::string ksearch_out;
  auto* ksearch_out_opt = ksearch->add_option("--out", ksearch_out, "output directory override");

  auto* generate = app.add_subcommand("generate", "sample from a checkpoint");
  generate->add_option("--checkpoint", checkpoint_path, "generator checkpoint")->required();
  generate->add_option("--count", count, "number of samples");
  generate->add_option("--seed", seed, "sampling seed");
  generate->add_option("--out", out_path, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    if (*train_out_opt) out_dir = train_out;
    if (*train_seed_opt) seed_override = train_seed;
    return momgan::cmd_train(config_path, out_dir, seed_override);
  }
  if (eval->parsed()) {
    std::optional<std::string> eval_out_path;
    if (*eval_out_opt) eval_out_path = eval_out;
    return momgan::cmd_eval(checkpoint_path, config_path, seed, eval_out_path);
  }
  if (bounds->parsed()) {
    return momgan::cmd_bounds(inputs_path, sweep_n);
  }
  if (ksearch->parsed()) {
    if (*ksearch_out_opt) out_dir = ksearch_out;
    return momgan::cmd_ksearch(config_path, k_min, k_max, out_dir);
  }
  if (generate->parsed()) {
    return momgan::cmd_generate(checkpoint_path, count, seed, out_path);
  }
  return 1;
}
