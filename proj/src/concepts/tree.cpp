#include "cgc/concepts/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cgc/error.hpp"

namespace cgc::concepts {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0;
  double impurity = 0;  // weighted, unnormalised: sum over children of n * gini
};

double weighted_gini(const std::vector<std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double sq = 0;
  for (auto c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
  return static_cast<double>(n) - sq / static_cast<double>(n);
}

std::int32_t majority(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return static_cast<std::int32_t>(best);
}

class Builder {
 public:
  Builder(const diff::Tensor& x, std::span<const std::int32_t> y, std::size_t n_classes,
          std::optional<int> max_depth, std::vector<DecisionTree::Node>& out)
      : x_(x), y_(y), n_classes_(n_classes), max_depth_(max_depth), out_(out) {}

  int build(std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(out_.size());
    out_.emplace_back();
    std::vector<std::size_t> counts(n_classes_, 0);
    for (auto i : idx) ++counts[static_cast<std::size_t>(y_[i])];
    out_[id].class_counts = counts;
    out_[id].prediction = majority(counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || (max_depth_ && depth >= *max_depth_)) return id;

    const Split s = best_split(idx);
    if (s.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (x_(i, static_cast<std::size_t>(s.feature)) <= s.threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    out_[id].feature = s.feature;
    out_[id].threshold = s.threshold;
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    out_[id].left = l;
    out_[id].right = r;
    return id;
  }

 private:
  Split best_split(const std::vector<std::size_t>& idx) const {
    Split best;
    const std::size_t n = idx.size();
    std::vector<std::size_t> order(idx);
    std::vector<std::size_t> left(n_classes_), right(n_classes_);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
      std::fill(left.begin(), left.end(), 0);
      std::fill(right.begin(), right.end(), 0);
      for (auto i : order) ++right[static_cast<std::size_t>(y_[i])];
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto cls = static_cast<std::size_t>(y_[order[k]]);
        ++left[cls];
        --right[cls];
        const double lo = x_(order[k], f), hi = x_(order[k + 1], f);
        if (!(lo < hi)) continue;
        const double imp = weighted_gini(left, k + 1) + weighted_gini(right, n - k - 1);
        // Features and thresholds are visited in increasing order, so a
        // strict comparison keeps the lowest on ties.
        if (best.feature < 0 || imp < best.impurity) {
          best = {static_cast<int>(f), lo + (hi - lo) / 2, imp};
        }
      }
    }
    return best;
  }

  const diff::Tensor& x_;
  std::span<const std::int32_t> y_;
  std::size_t n_classes_;
  std::optional<int> max_depth_;
  std::vector<DecisionTree::Node>& out_;
};

}  // namespace

DecisionTree DecisionTree::fit(const diff::Tensor& x, std::span<const std::int32_t> y, std::optional<int> max_depth) {
  if (y.empty()) throw ValidationError("fit_tree: empty training set");
  if (x.rank() != 2 || x.rows() != y.size()) {
    throw ValidationError("fit_tree: X has shape " + diff::shape_string(x.shape()) + " but there are " +
                          std::to_string(y.size()) + " labels");
  }
  if (max_depth && *max_depth < 0) throw ParameterError("fit_tree: max_depth must be >= 0");
  std::int32_t max_label = 0;
  for (auto v : y) {
    if (v < 0) throw ValidationError("fit_tree: negative class id " + std::to_string(v));
    max_label = std::max(max_label, v);
  }
  DecisionTree tree;
  tree.n_features_ = x.cols();
  tree.n_classes_ = static_cast<std::size_t>(max_label) + 1;
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Builder(x, y, tree.n_classes_, max_depth, tree.nodes_).build(idx, 0);
  return tree;
}

std::int32_t DecisionTree::predict_one(std::span<const double> row) const {
  if (row.size() != n_features_) {
    throw DimensionError("predict_tree: row has " + std::to_string(row.size()) + " features, tree expects " +
                         std::to_string(n_features_));
  }
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const auto& node = nodes_[id];
    id = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[id].prediction;
}

std::vector<std::int32_t> DecisionTree::predict(const diff::Tensor& x) const {
  if (x.rank() != 2) throw DimensionError("predict_tree: expected a matrix, got " + diff::shape_string(x.shape()));
  std::vector<std::int32_t> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_one(x.row(i));
  return out;
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  // Children always follow their parent in the node array.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t DecisionTree::n_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

}  // namespace cgc::concepts
