#include "momgan/mom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace momgan {

BlockPartition BlockPartition::contiguous(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("BlockPartition: need 1 <= K <= n");
  }
  const std::size_t size = n / k;
  BlockPartition part;
  part.count = n;
  part.blocks.resize(k);
  std::size_t idx = 0;
  for (std::size_t b = 0; b < k; ++b) {
    part.blocks[b].resize(size);
    for (std::size_t i = 0; i < size; ++i) part.blocks[b][i] = idx++;
  }
  while (idx < n) part.dropped.push_back(idx++);
  return part;
}

BlockPartition partition(std::size_t n, std::size_t k, Rng& rng) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("partition: need 1 <= K <= n");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  const std::size_t size = n / k;
  BlockPartition part;
  part.count = n;
  part.blocks.resize(k);
  std::size_t idx = 0;
  for (std::size_t b = 0; b < k; ++b) {
    part.blocks[b].assign(perm.begin() + idx, perm.begin() + idx + size);
    std::sort(part.blocks[b].begin(), part.blocks[b].end());
    idx += size;
  }
  part.dropped.assign(perm.begin() + idx, perm.end());
  std::sort(part.dropped.begin(), part.dropped.end());
  return part;
}

std::vector<double> block_means(std::span<const double> values,
                                const BlockPartition& part) {
  std::vector<double> means;
  means.reserve(part.block_count());
  for (const auto& block : part.blocks) {
    double sum = 0.0;
    for (std::size_t idx : block) {
      if (idx >= values.size()) {
        throw std::out_of_range("block_means: index outside the value array");
      }
      sum += values[idx];
    }
    means.push_back(sum / static_cast<double>(block.size()));
  }
  return means;
}

double quantile_lower(std::span<const double> values, double alpha) {
  if (values.empty()) {
    throw std::invalid_argument("quantile_lower: empty input");
  }
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("quantile_lower: alpha must be in (0, 1]");
  }
  const std::size_t k = values.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(alpha * static_cast<double>(k)));
  rank = std::min(std::max<std::size_t>(rank, 1), k);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

MomResult mom(std::span<const double> values, const BlockPartition& part) {
  const std::vector<double> means = block_means(values, part);
  const double median = quantile_lower(means, 0.5);

  MomResult result;
  bool found = false;
  for (std::size_t k = 0; k < means.size(); ++k) {
    if (means[k] <= median && (!found || means[k] > result.value)) {
      result.value = means[k];
      result.median_block = k;
      found = true;
    }
  }
  // The lower median is itself a block mean, so the max is always attained.
  return result;
}

}  // namespace momgan
