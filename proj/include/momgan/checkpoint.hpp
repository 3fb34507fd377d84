#pragma once

#include <cstdint>
#include <string>

#include "momgan/mlp.hpp"

namespace momgan {

// Exact base-2 text encoding of a double (printf %a); round-trips every
// finite 64-bit value bit for bit.
std::string double_to_hex(double v);
double hex_to_double(const std::string& text);

struct Checkpoint {
  MlpSpec spec;
  MlpParams params;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// JSON document with the network spec, per-layer row-major weight arrays
// as hex-float strings, and seed provenance. Byte-stable across reruns.
std::string checkpoint_to_json(const Checkpoint& ck);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace momgan
