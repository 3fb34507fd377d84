#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "momgan/mom.hpp"

using namespace momgan;

TEST_CASE("partition shapes, remainder, and error cases") {
  Rng rng(1, 0);
  const BlockPartition part = partition(10, 3, rng);
  CHECK(part.block_count() == 3);
  for (const auto& block : part.blocks) CHECK(block.size() == 3);
  CHECK(part.dropped.size() == 1);

  const BlockPartition single = partition(6, 1, rng);
  CHECK(single.block_count() == 1);
  CHECK(single.blocks[0].size() == 6);
  CHECK(single.dropped.empty());

  CHECK_THROWS_AS(partition(5, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(partition(5, 6, rng), std::invalid_argument);
}

TEST_CASE("partition blocks are disjoint and cover with the dropped set") {
  Rng rng(2, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(64);
    const std::size_t k = 1 + rng.below(n);
    const BlockPartition part = partition(n, k, rng);

    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& block : part.blocks) {
      CHECK(block.size() == n / k);
      CHECK(std::is_sorted(block.begin(), block.end()));
      for (std::size_t idx : block) {
        CHECK(idx < n);
        seen.insert(idx);
        ++total;
      }
    }
    for (std::size_t idx : part.dropped) {
      seen.insert(idx);
      ++total;
    }
    CHECK(total == n);        // no duplicates anywhere
    CHECK(seen.size() == n);  // full coverage
  }
}

TEST_CASE("block_means on constants, a hand case, and K=1") {
  const BlockPartition part = BlockPartition::contiguous(6, 3);
  const std::vector<double> constant(6, 2.5);
  for (double m : block_means(constant, part)) CHECK(m == doctest::Approx(2.5));

  const std::vector<double> values = {1, 2, 3, 4, 5, 100};
  const auto means = block_means(values, part);
  CHECK(means[0] == doctest::Approx(1.5));
  CHECK(means[1] == doctest::Approx(3.5));
  CHECK(means[2] == doctest::Approx(52.5));

  const BlockPartition whole = BlockPartition::contiguous(6, 1);
  CHECK(block_means(values, whole)[0] == doctest::Approx(115.0 / 6.0));

  const std::vector<double> short_values = {1, 2};
  CHECK_THROWS_AS(block_means(short_values, part), std::out_of_range);
}

TEST_CASE("quantile_lower order statistics") {
  const std::vector<double> v = {3, 1, 2};
  CHECK(quantile_lower(v, 0.5) == 2.0);
  CHECK(quantile_lower(v, 1.0) == 3.0);
  const std::vector<double> single = {7.25};
  CHECK(quantile_lower(single, 0.1) == 7.25);
  CHECK(quantile_lower(single, 1.0) == 7.25);
  CHECK_THROWS_AS(quantile_lower(std::vector<double>{}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(quantile_lower(v, 0.0), std::invalid_argument);
}

TEST_CASE("mom picks the largest block mean at or below the lower median") {
  const std::vector<double> values = {1, 2, 3, 4, 5, 100};
  const BlockPartition part = BlockPartition::contiguous(6, 3);
  const MomResult res = mom(values, part);
  CHECK(res.value == doctest::Approx(3.5));
  CHECK(res.median_block == 1);

  const BlockPartition whole = BlockPartition::contiguous(6, 1);
  const MomResult flat = mom(values, whole);
  CHECK(flat.value == doctest::Approx(115.0 / 6.0));
  CHECK(flat.median_block == 0);

  // Even K uses the lower median: means 1,2,3,10 -> 2.
  const std::vector<double> four = {1, 2, 3, 10};
  const BlockPartition each = BlockPartition::contiguous(4, 4);
  CHECK(mom(four, each).value == doctest::Approx(2.0));
}

TEST_CASE("mom value is always one of the block means") {
  Rng rng(3, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + rng.below(60);
    const std::size_t k = 1 + rng.below(n);
    std::vector<double> values(n);
    for (double& v : values) v = rng.uniform(-50, 50);
    const BlockPartition part = partition(n, k, rng);
    const auto means = block_means(values, part);
    const MomResult res = mom(values, part);
    CHECK(res.median_block < means.size());
    CHECK(res.value == means[res.median_block]);
    CHECK(std::count(means.begin(), means.end(), res.value) >= 1);
  }
}

TEST_CASE("mom equivariance under translation and positive scaling") {
  Rng rng(4, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 6 + rng.below(40);
    const std::size_t k = 1 + rng.below(n);
    std::vector<double> values(n);
    for (double& v : values) v = rng.uniform(-10, 10);
    const BlockPartition part = partition(n, k, rng);
    const MomResult base = mom(values, part);

    const double shift = rng.uniform(-5, 5);
    std::vector<double> shifted = values;
    for (double& v : shifted) v += shift;
    const MomResult t = mom(shifted, part);
    CHECK(t.value == doctest::Approx(base.value + shift).epsilon(1e-12));
    CHECK(t.median_block == base.median_block);

    const double scale = rng.uniform(0.1, 4.0);
    std::vector<double> scaled = values;
    for (double& v : scaled) v *= scale;
    const MomResult s = mom(scaled, part);
    CHECK(s.value == doctest::Approx(base.value * scale).epsilon(1e-12));
    CHECK(s.median_block == base.median_block);
  }
}

TEST_CASE("mom is invariant to shuffling samples inside a block") {
  Rng rng(5, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 12 + rng.below(36);
    const std::size_t k = 2 + rng.below(4);
    std::vector<double> values(n);
    for (double& v : values) v = rng.uniform(-10, 10);
    const BlockPartition part = partition(n, k, rng);
    const MomResult base = mom(values, part);

    // Permute the values sitting at one block's indices.
    std::vector<double> shuffled = values;
    const auto& block = part.blocks[rng.below(k)];
    std::vector<double> pocket;
    for (std::size_t idx : block) pocket.push_back(shuffled[idx]);
    rng.shuffle(pocket);
    for (std::size_t i = 0; i < block.size(); ++i) shuffled[block[i]] = pocket[i];

    const MomResult after = mom(shuffled, part);
    CHECK(after.value == doctest::Approx(base.value).epsilon(1e-12));
    CHECK(after.median_block == base.median_block);
  }
}

TEST_CASE("mom stays inside the sane range under minority block corruption") {
  Rng rng(6, 0);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 3 + 2 * rng.below(15);  // odd K in [3, 31]
    const std::size_t block_size = 2 + rng.below(6);
    const std::size_t n = k * block_size;
    std::vector<double> values(n);
    for (double& v : values) v = rng.normal();
    const BlockPartition part = partition(n, k, rng);

    const std::size_t corrupt = (k + 1) / 2 - 1;  // ceil(K/2) - 1
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    rng.shuffle(order);

    std::vector<double> corrupted = values;
    for (std::size_t c = 0; c < corrupt; ++c) {
      for (std::size_t idx : part.blocks[order[c]]) {
        corrupted[idx] = rng.uniform(-1e9, 1e9);
      }
    }

    const auto clean_means = block_means(values, part);
    double lo = clean_means[order[corrupt]];
    double hi = lo;
    for (std::size_t c = corrupt; c < k; ++c) {
      lo = std::min(lo, clean_means[order[c]]);
      hi = std::max(hi, clean_means[order[c]]);
    }
    const double value = mom(corrupted, part).value;
    if (value < lo || value > hi) ++violations;
  }
  CHECK(violations == 0);
}
