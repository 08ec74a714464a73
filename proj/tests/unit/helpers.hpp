#pragma once

#include <random>
#include <vector>

#include "cgc/diff/tensor.hpp"
#include "cgc/graph/graph.hpp"

namespace testutil {

// Connected-ish random graph: a random spanning tree plus `extra` random edges.
inline cgc::graph::Graph random_graph(std::size_t n, std::size_t extra, std::mt19937_64& rng,
                                      std::size_t n_features = 3) {
  cgc::graph::Graph g(n);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    g.add_edge(static_cast<int>(pick(rng)), static_cast<int>(v));
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k) g.add_edge(static_cast<int>(any(rng)), static_cast<int>(any(rng)));
  std::normal_distribution<double> normal;
  g.features = cgc::diff::Tensor::matrix(n, n_features);
  for (auto& v : g.features.values()) v = normal(rng);
  return g;
}

inline cgc::diff::Tensor random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  auto t = cgc::diff::Tensor::matrix(r, c);
  for (auto& v : t.values()) v = normal(rng);
  return t;
}

inline double max_abs_diff(const cgc::diff::Tensor& a, const cgc::diff::Tensor& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
