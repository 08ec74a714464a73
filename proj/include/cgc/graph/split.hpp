#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cgc::graph {

struct SplitSpec {
  std::vector<std::int32_t> train_idx;
  std::vector<std::int32_t> test_idx;
  std::uint64_t seed = 0;
  // Set when some class had fewer than two items and the split fell back to
  // an unstratified shuffle.
  bool unstratified = false;

  // 0/1 membership mask over `n` items.
  std::vector<std::uint8_t> train_mask(std::size_t n) const;
  std::vector<std::uint8_t> test_mask(std::size_t n) const;
};

// Stratified shuffle split of items labelled `labels` (node or graph indices).
// Each class contributes round(train_fraction * count) items to train. Both
// index lists are sorted.
SplitSpec split(std::span<const std::int32_t> labels, double train_fraction, std::uint64_t seed);

}  // namespace cgc::graph
