#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cgc/diff/tensor.hpp"

namespace cgc::concepts {

// CART classifier with Gini impurity.
//
// Every distinct midpoint of every feature is a candidate; the split with the
// lowest weighted child impurity wins, ties going to the lowest feature and
// then the lowest threshold. A node stays a leaf only when it is pure, at
// max_depth, or when no feature separates its samples -- a split that leaves
// the impurity unchanged is still taken, so XOR-like data is learnable.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    int left = -1;   // samples with x[feature] <= threshold
    int right = -1;
    std::vector<std::size_t> class_counts;
    std::int32_t prediction = 0;  // majority, ties to the lowest class

    bool is_leaf() const { return feature < 0; }
  };

  // X is [n x F]; y holds class ids >= 0. Throws ValidationError on empty or
  // mismatched input.
  static DecisionTree fit(const diff::Tensor& x, std::span<const std::int32_t> y,
                          std::optional<int> max_depth = std::nullopt);

  std::int32_t predict_one(std::span<const double> row) const;
  std::vector<std::int32_t> predict(const diff::Tensor& x) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return n_classes_; }
  int depth() const;
  std::size_t n_leaves() const;

 private:
  std::vector<Node> nodes_;
  std::size_t n_features_ = 0;
  std::size_t n_classes_ = 0;
};

}  // namespace cgc::concepts
