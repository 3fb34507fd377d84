#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "momgan/rng.hpp"

namespace momgan {

// Disjoint equal-cardinality index blocks over a sample of size n.
// Every block holds exactly floor(n/K) indices, sorted ascending; the
// n mod K leftover indices land in `dropped`. Keeping indices sorted makes
// block sums order-canonical, so K = 1 reproduces the plain sample mean
// bit for bit.
struct BlockPartition {
  std::size_t count = 0;  // n
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> dropped;

  std::size_t block_count() const { return blocks.size(); }
  std::size_t block_size() const { return blocks.empty() ? 0 : blocks.front().size(); }
  std::size_t retained() const { return block_count() * block_size(); }

  // Index-order blocks: 0..b-1, b..2b-1, ... Used when block membership
  // must line up with externally arranged data.
  static BlockPartition contiguous(std::size_t n, std::size_t k);
};

// Uniformly random partition: a random permutation cut into K consecutive
// chunks of floor(n/K), remainder dropped. Requires 1 <= k <= n.
BlockPartition partition(std::size_t n, std::size_t k, Rng& rng);

// Per-block arithmetic means; dropped indices are excluded.
std::vector<double> block_means(std::span<const double> values,
                                const BlockPartition& part);

// Lower empirical quantile: the ceil(alpha*K)-th smallest value,
// alpha in (0, 1]. Always an element of the input.
double quantile_lower(std::span<const double> values, double alpha);

struct MomResult {
  double value = 0.0;
  std::size_t median_block = 0;
};

// Median-of-means: the largest block mean not exceeding the lower median
// of the block means, together with the block attaining it (lowest index
// on ties). The value is always one of the block means.
MomResult mom(std::span<const double> values, const BlockPartition& part);

}  // namespace momgan
