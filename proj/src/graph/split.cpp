#include "cgc/graph/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "cgc/error.hpp"

namespace cgc::graph {
namespace {

std::vector<std::uint8_t> mask_of(const std::vector<std::int32_t>& idx, std::size_t n) {
  std::vector<std::uint8_t> mask(n, 0);
  for (auto i : idx) mask.at(static_cast<std::size_t>(i)) = 1;
  return mask;
}

std::size_t train_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

std::vector<std::uint8_t> SplitSpec::train_mask(std::size_t n) const { return mask_of(train_idx, n); }

std::vector<std::uint8_t> SplitSpec::test_mask(std::size_t n) const { return mask_of(test_idx, n); }

SplitSpec split(std::span<const std::int32_t> labels, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("split: train_fraction must lie in (0, 1), got " + std::to_string(train_fraction));
  }
  std::mt19937_64 rng(seed);
  SplitSpec out;
  out.seed = seed;

  std::map<std::int32_t, std::vector<std::int32_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(static_cast<std::int32_t>(i));
  out.unstratified = std::any_of(by_class.begin(), by_class.end(), [](const auto& kv) { return kv.second.size() < 2; });

  if (out.unstratified) {
    std::vector<std::int32_t> all(labels.size());
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t k = train_count(all.size(), train_fraction);
    out.train_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    out.test_idx.assign(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  } else {
    for (auto& [label, items] : by_class) {
      std::shuffle(items.begin(), items.end(), rng);
      const std::size_t k = train_count(items.size(), train_fraction);
      out.train_idx.insert(out.train_idx.end(), items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k));
      out.test_idx.insert(out.test_idx.end(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end());
    }
  }
  std::sort(out.train_idx.begin(), out.train_idx.end());
  std::sort(out.test_idx.begin(), out.test_idx.end());
  return out;
}

}  // namespace cgc::graph
