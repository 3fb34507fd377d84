#include "momgan/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace momgan {

std::string double_to_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double hex_to_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::runtime_error("checkpoint: bad hex-float literal: " + text);
  }
  return v;
}

std::string checkpoint_to_json(const Checkpoint& ck) {
  nlohmann::ordered_json doc;
  doc["format"] = "momgan-checkpoint-v1";
  doc["spec"]["widths"] = ck.spec.widths;
  doc["spec"]["activation_lipschitz"] = double_to_hex(ck.spec.activation_lipschitz);
  doc["spec"]["squash"] = ck.spec.squash == Squash::sigmoid ? "sigmoid" : "none";
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const Matrix& w : ck.params.weights) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (double v : w.data()) entries.push_back(double_to_hex(v));
    layers.push_back(std::move(entries));
  }
  doc["weights"] = std::move(layers);
  doc["seed"]["seed"] = ck.seed;
  doc["seed"]["stream"] = ck.stream;
  return doc.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (doc.at("format").get<std::string>() != "momgan-checkpoint-v1") {
    throw std::runtime_error("checkpoint: unknown format tag");
  }
  Checkpoint ck;
  ck.spec.widths = doc.at("spec").at("widths").get<std::vector<std::size_t>>();
  ck.spec.activation_lipschitz =
      hex_to_double(doc.at("spec").at("activation_lipschitz").get<std::string>());
  const std::string squash = doc.at("spec").at("squash").get<std::string>();
  if (squash == "sigmoid") {
    ck.spec.squash = Squash::sigmoid;
  } else if (squash == "none") {
    ck.spec.squash = Squash::none;
  } else {
    throw std::runtime_error("checkpoint: unknown squash kind: " + squash);
  }
  ck.spec.validate();

  const auto& layers = doc.at("weights");
  if (layers.size() != ck.spec.layer_count()) {
    throw std::runtime_error("checkpoint: layer count does not match spec");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix w(ck.spec.widths[l + 1], ck.spec.widths[l]);
    const auto& entries = layers[l];
    if (entries.size() != w.size()) {
      throw std::runtime_error("checkpoint: weight array size mismatch");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      w.data()[i] = hex_to_double(entries[i].get<std::string>());
    }
    ck.params.weights.push_back(std::move(w));
  }
  ck.seed = doc.at("seed").at("seed").get<std::uint64_t>();
  ck.stream = doc.at("seed").at("stream").get<std::uint64_t>();
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << checkpoint_to_json(ck);
  if (!out) throw std::runtime_error("short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string text(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>{});
  return checkpoint_from_json(text);
}

}  // namespace momgan
