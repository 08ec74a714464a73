#include "cgc/diff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cgc/error.hpp"
#include "cgc/simd/kernels.hpp"

namespace cgc::diff {
namespace {

Tape& tape_of(Var v) {
  if (!v.valid()) throw Error("operation on an unrecorded Var");
  return *v.tape();
}

void same_tape(Var a, Var b) {
  if (a.tape() != b.tape()) throw Error("operands recorded on different tapes");
}

void require_matrix(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got shape " +
                         shape_string(t.shape()));
  }
}

void check_index(Index i, std::size_t bound, const char* op) {
  if (i < 0 || static_cast<std::size_t>(i) >= bound) {
    throw IndexError(std::string(op) + ": index " + std::to_string(i) + " out of range [0, " +
                     std::to_string(bound) + ")");
  }
}

// Largest double below 1; keeps squashed scalars strictly inside (0, 1).
constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;

}  // namespace

double logistic(double x) {
  double s;
  if (x >= 0) {
    s = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    s = e / (1.0 + e);
  }
  return std::min(s, kBelowOne);
}

Var matmul(Var a, Var b) {
  same_tape(a, b);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  require_matrix(A, "matmul");
  require_matrix(B, "matmul");
  if (A.cols() != B.rows()) {
    throw DimensionError("matmul: inner dimensions differ: " + shape_string(A.shape()) + " x " +
                         shape_string(B.shape()));
  }
  const std::size_t n = A.rows(), k = A.cols(), m = B.cols();
  const auto& kern = simd::active();
  Tensor out = Tensor::matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) kern.axpy(m, A(i, p), B.data() + p * m, orow);
  }
  const std::size_t ia = a.id(), ib = b.id();
  const bool rg = a.requires_grad() || b.requires_grad();
  return tape_of(a).record(std::move(out), rg, [ia, ib, n, k, m](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    const Tensor& A = t.value(ia);
    const Tensor& B = t.value(ib);
    if (t.requires_grad(ia)) {
      // dA = G B^T, accumulated row by row through B^T.
      std::vector<double> bt(k * m);
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t j = 0; j < m; ++j) bt[j * k + p] = B(p, j);
      auto& ga = t.grad(ia);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) kern.axpy(k, g[i * m + j], bt.data() + j * k, ga.data() + i * k);
    }
    if (t.requires_grad(ib)) {
      auto& gb = t.grad(ib);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) kern.axpy(m, A(i, p), g.data() + i * m, gb.data() + p * m);
    }
  });
}

Var transpose(Var a) {
  const Tensor& A = a.value();
  require_matrix(A, "transpose");
  const std::size_t n = A.rows(), m = A.cols();
  Tensor out = Tensor::matrix(m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out(j, i) = A(i, j);
  const std::size_t ia = a.id();
  return tape_of(a).record(std::move(out), a.requires_grad(), [ia, n, m](Tape& t, const std::vector<double>& g) {
    auto& ga = t.grad(ia);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) ga[i * m + j] += g[j * n + i];
  });
}

Var reshape(Var a, std::vector<std::size_t> shape) {
  Tensor out(std::move(shape), a.value().values());
  const std::size_t ia = a.id();
  return tape_of(a).record(std::move(out), a.requires_grad(), [ia](Tape& t, const std::vector<double>& g) {
    auto& ga = t.grad(ia);
    simd::active().add(g.size(), g.data(), ga.data());
  });
}

Var add(Var a, Var b) {
  same_tape(a, b);
  if (a.shape() != b.shape()) {
    throw DimensionError("add: shapes differ: " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
  Tensor out = a.value();
  simd::active().add(out.size(), b.value().data(), out.data());
  const std::size_t ia = a.id(), ib = b.id();
  const bool rg = a.requires_grad() || b.requires_grad();
  return tape_of(a).record(std::move(out), rg, [ia, ib](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    if (t.requires_grad(ia)) kern.add(g.size(), g.data(), t.grad(ia).data());
    if (t.requires_grad(ib)) kern.add(g.size(), g.data(), t.grad(ib).data());
  });
}

Var scale(Var a, double factor) {
  Tensor out(a.shape());
  simd::active().scale(out.size(), factor, a.value().data(), out.data());
  const std::size_t ia = a.id();
  return tape_of(a).record(std::move(out), a.requires_grad(), [ia, factor](Tape& t, const std::vector<double>& g) {
    simd::active().axpy(g.size(), factor, g.data(), t.grad(ia).data());
  });
}

Var lerp(Var a, Var b, Var t) {
  same_tape(a, b);
  same_tape(a, t);
  if (a.shape() != b.shape()) {
    throw DimensionError("lerp: shapes differ: " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
  if (t.value().size() != 1) throw DimensionError("lerp: mixing weight must be scalar");
  const double tv = t.item();
  Tensor out(a.shape());
  simd::active().lerp(out.size(), tv, a.value().data(), b.value().data(), out.data());
  const std::size_t ia = a.id(), ib = b.id(), it = t.id();
  const bool rg = a.requires_grad() || b.requires_grad() || t.requires_grad();
  return tape_of(a).record(std::move(out), rg, [ia, ib, it, tv](Tape& tp, const std::vector<double>& g) {
    const auto& kern = simd::active();
    if (tp.requires_grad(ia)) kern.axpy(g.size(), 1.0 - tv, g.data(), tp.grad(ia).data());
    if (tp.requires_grad(ib)) kern.axpy(g.size(), tv, g.data(), tp.grad(ib).data());
    if (tp.requires_grad(it)) {
      const Tensor& A = tp.value(ia);
      const Tensor& B = tp.value(ib);
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * (B[i] - A[i]);
      tp.grad(it)[0] += acc;
    }
  });
}

Var add_row_bias(Var x, Var b) {
  same_tape(x, b);
  const Tensor& X = x.value();
  require_matrix(X, "add_row_bias");
  const std::size_t n = X.rows(), d = X.cols();
  if (b.value().size() != d) {
    throw DimensionError("add_row_bias: bias " + shape_string(b.shape()) + " for rows of " +
                         shape_string(X.shape()));
  }
  const auto& kern = simd::active();
  Tensor out = X;
  for (std::size_t i = 0; i < n; ++i) kern.add(d, b.value().data(), out.data() + i * d);
  const std::size_t ix = x.id(), ibias = b.id();
  const bool rg = x.requires_grad() || b.requires_grad();
  return tape_of(x).record(std::move(out), rg, [ix, ibias, n, d](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    if (t.requires_grad(ix)) kern.add(g.size(), g.data(), t.grad(ix).data());
    if (t.requires_grad(ibias)) {
      auto& gb = t.grad(ibias);
      for (std::size_t i = 0; i < n; ++i) kern.add(d, g.data() + i * d, gb.data());
    }
  });
}

Var sum(Var a) {
  double acc = 0.0;
  for (double v : a.value().values()) acc += v;
  const std::size_t ia = a.id();
  return tape_of(a).record(Tensor::scalar(acc), a.requires_grad(), [ia](Tape& t, const std::vector<double>& g) {
    auto& ga = t.grad(ia);
    for (double& v : ga) v += g[0];
  });
}

Var relu(Var x) {
  Tensor out = x.value();
  for (double& v : out.values()) v = v > 0 ? v : 0.0;
  const std::size_t ix = x.id();
  return tape_of(x).record(std::move(out), x.requires_grad(), [ix](Tape& t, const std::vector<double>& g) {
    const Tensor& X = t.value(ix);
    auto& gx = t.grad(ix);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (X[i] > 0) gx[i] += g[i];
  });
}

Var leaky_relu(Var x, double slope) {
  Tensor out = x.value();
  for (double& v : out.values()) v = v > 0 ? v : slope * v;
  const std::size_t ix = x.id();
  return tape_of(x).record(std::move(out), x.requires_grad(), [ix, slope](Tape& t, const std::vector<double>& g) {
    const Tensor& X = t.value(ix);
    auto& gx = t.grad(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += X[i] > 0 ? g[i] : slope * g[i];
  });
}

Var sigmoid(Var x) {
  Tensor out = x.value();
  for (double& v : out.values()) v = logistic(v);
  const std::size_t ix = x.id();
  const std::size_t self = tape_of(x).size();
  return tape_of(x).record(std::move(out), x.requires_grad(), [ix, self](Tape& t, const std::vector<double>& g) {
    const Tensor& S = t.value(self);
    auto& gx = t.grad(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * S[i] * (1.0 - S[i]);
  });
}

Var row_softmax(Var x) {
  const Tensor& X = x.value();
  require_matrix(X, "row_softmax");
  const std::size_t n = X.rows(), c = X.cols();
  Tensor out = Tensor::matrix(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    auto xr = X.row(i);
    auto yr = out.row(i);
    const double mx = *std::max_element(xr.begin(), xr.end());
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      z += yr[j];
    }
    for (std::size_t j = 0; j < c; ++j) yr[j] /= z;
  }
  const std::size_t ix = x.id();
  const std::size_t self = tape_of(x).size();
  return tape_of(x).record(std::move(out), x.requires_grad(), [ix, self, n, c](Tape& t, const std::vector<double>& g) {
    const Tensor& Y = t.value(self);
    auto& gx = t.grad(ix);
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += g[i * c + j] * Y(i, j);
      for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += Y(i, j) * (g[i * c + j] - dot);
    }
  });
}

Var row_l2_normalize(Var x, double floor) {
  const Tensor& X = x.value();
  require_matrix(X, "row_l2_normalize");
  const std::size_t n = X.rows(), c = X.cols();
  Tensor out = Tensor::matrix(n, c);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (double v : X.row(i)) ss += v * v;
    norms[i] = std::max(std::sqrt(ss), floor);
    for (std::size_t j = 0; j < c; ++j) out(i, j) = X(i, j) / norms[i];
  }
  const std::size_t ix = x.id();
  const std::size_t self = tape_of(x).size();
  return tape_of(x).record(std::move(out), x.requires_grad(),
                           [ix, self, n, c, floor, norms = std::move(norms)](Tape& t, const std::vector<double>& g) {
    const Tensor& Y = t.value(self);
    auto& gx = t.grad(ix);
    for (std::size_t i = 0; i < n; ++i) {
      if (norms[i] <= floor) {
        for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += g[i * c + j] / floor;
        continue;
      }
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += g[i * c + j] * Y(i, j);
      for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += (g[i * c + j] - Y(i, j) * dot) / norms[i];
    }
  });
}

Var gather_rows(Var x, std::span<const Index> index) {
  const Tensor& X = x.value();
  require_matrix(X, "gather_rows");
  const std::size_t n = X.rows(), d = X.cols();
  Tensor out = Tensor::matrix(index.size(), d);
  for (std::size_t e = 0; e < index.size(); ++e) {
    check_index(index[e], n, "gather_rows");
    std::copy_n(X.data() + static_cast<std::size_t>(index[e]) * d, d, out.data() + e * d);
  }
  const std::size_t ix = x.id();
  return tape_of(x).record(std::move(out), x.requires_grad(), [ix, index, d](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    auto& gx = t.grad(ix);
    for (std::size_t e = 0; e < index.size(); ++e)
      kern.add(d, g.data() + e * d, gx.data() + static_cast<std::size_t>(index[e]) * d);
  });
}

Var scale_rows(Var x, Var w) {
  same_tape(x, w);
  const Tensor& X = x.value();
  require_matrix(X, "scale_rows");
  const std::size_t e_count = X.rows(), d = X.cols();
  if (w.value().size() != e_count) {
    throw DimensionError("scale_rows: " + std::to_string(w.value().size()) + " weights for " +
                         std::to_string(e_count) + " rows");
  }
  const auto& kern = simd::active();
  Tensor out = Tensor::matrix(e_count, d);
  for (std::size_t e = 0; e < e_count; ++e) kern.scale(d, w.value()[e], X.data() + e * d, out.data() + e * d);
  const std::size_t ix = x.id(), iw = w.id();
  const bool rg = x.requires_grad() || w.requires_grad();
  return tape_of(x).record(std::move(out), rg, [ix, iw, e_count, d](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    if (t.requires_grad(ix)) {
      const Tensor& W = t.value(iw);
      auto& gx = t.grad(ix);
      for (std::size_t e = 0; e < e_count; ++e) kern.axpy(d, W[e], g.data() + e * d, gx.data() + e * d);
    }
    if (t.requires_grad(iw)) {
      const Tensor& X = t.value(ix);
      auto& gw = t.grad(iw);
      for (std::size_t e = 0; e < e_count; ++e) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += g[e * d + j] * X(e, j);
        gw[e] += acc;
      }
    }
  });
}

Var scatter_sum(Var messages, std::span<const Index> dst, std::size_t n_nodes) {
  const Tensor& M = messages.value();
  require_matrix(M, "scatter_sum");
  const std::size_t e_count = M.rows(), d = M.cols();
  if (dst.size() != e_count) {
    throw DimensionError("scatter_sum: " + std::to_string(dst.size()) + " destinations for " +
                         std::to_string(e_count) + " messages");
  }
  const auto& kern = simd::active();
  Tensor out = Tensor::matrix(n_nodes, d);
  for (std::size_t e = 0; e < e_count; ++e) {
    check_index(dst[e], n_nodes, "scatter_sum");
    kern.add(d, M.data() + e * d, out.data() + static_cast<std::size_t>(dst[e]) * d);
  }
  const std::size_t im = messages.id();
  return tape_of(messages).record(std::move(out), messages.requires_grad(), [im, dst, d](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    auto& gm = t.grad(im);
    for (std::size_t e = 0; e < dst.size(); ++e)
      kern.add(d, g.data() + static_cast<std::size_t>(dst[e]) * d, gm.data() + e * d);
  });
}

Var propagate(Var h, Var w, std::span<const Index> src, std::span<const Index> dst,
              std::size_t n_nodes) {
  same_tape(h, w);
  const Tensor& H = h.value();
  require_matrix(H, "propagate");
  const std::size_t n_src = H.rows(), d = H.cols();
  if (src.size() != dst.size() || w.value().size() != src.size()) {
    throw DimensionError("propagate: " + std::to_string(src.size()) + " sources, " +
                         std::to_string(dst.size()) + " destinations, " +
                         std::to_string(w.value().size()) + " weights");
  }
  const auto& kern = simd::active();
  Tensor out = Tensor::matrix(n_nodes, d);
  const Tensor& W = w.value();
  for (std::size_t e = 0; e < src.size(); ++e) {
    check_index(src[e], n_src, "propagate");
    check_index(dst[e], n_nodes, "propagate");
    kern.axpy(d, W[e], H.data() + static_cast<std::size_t>(src[e]) * d,
              out.data() + static_cast<std::size_t>(dst[e]) * d);
  }
  const std::size_t ih = h.id(), iw = w.id();
  const bool rg = h.requires_grad() || w.requires_grad();
  return tape_of(h).record(std::move(out), rg, [ih, iw, src, dst, d](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    if (t.requires_grad(ih)) {
      const Tensor& W = t.value(iw);
      auto& gh = t.grad(ih);
      for (std::size_t e = 0; e < src.size(); ++e)
        kern.axpy(d, W[e], g.data() + static_cast<std::size_t>(dst[e]) * d,
                  gh.data() + static_cast<std::size_t>(src[e]) * d);
    }
    if (t.requires_grad(iw)) {
      const Tensor& H = t.value(ih);
      auto& gw = t.grad(iw);
      for (std::size_t e = 0; e < src.size(); ++e) {
        const double* gr = g.data() + static_cast<std::size_t>(dst[e]) * d;
        const double* hr = H.data() + static_cast<std::size_t>(src[e]) * d;
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += gr[j] * hr[j];
        gw[e] += acc;
      }
    }
  });
}

Var edge_pair_scores(Var scores, std::span<const Index> src, std::span<const Index> dst) {
  const Tensor& S = scores.value();
  require_matrix(S, "edge_pair_scores");
  if (S.cols() != 2) {
    throw DimensionError("edge_pair_scores: expected [n x 2] scores, got " + shape_string(S.shape()));
  }
  if (src.size() != dst.size()) throw DimensionError("edge_pair_scores: src/dst length mismatch");
  const std::size_t n = S.rows();
  Tensor out({src.size()});
  for (std::size_t e = 0; e < src.size(); ++e) {
    check_index(src[e], n, "edge_pair_scores");
    check_index(dst[e], n, "edge_pair_scores");
    out[e] = S(static_cast<std::size_t>(src[e]), 0) + S(static_cast<std::size_t>(dst[e]), 1);
  }
  const std::size_t is = scores.id();
  return tape_of(scores).record(std::move(out), scores.requires_grad(), [is, src, dst](Tape& t, const std::vector<double>& g) {
    auto& gs = t.grad(is);
    for (std::size_t e = 0; e < src.size(); ++e) {
      gs[static_cast<std::size_t>(src[e]) * 2] += g[e];
      gs[static_cast<std::size_t>(dst[e]) * 2 + 1] += g[e];
    }
  });
}

Var segment_softmax(Var scores, std::span<const Index> dst, std::size_t n_nodes) {
  const Tensor& S = scores.value();
  if (S.size() != dst.size()) {
    throw DimensionError("segment_softmax: " + std::to_string(S.size()) + " scores for " +
                         std::to_string(dst.size()) + " edges");
  }
  std::vector<double> mx(n_nodes, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < dst.size(); ++e) {
    check_index(dst[e], n_nodes, "segment_softmax");
    auto& m = mx[static_cast<std::size_t>(dst[e])];
    m = std::max(m, S[e]);
  }
  std::vector<double> z(n_nodes, 0.0);
  Tensor out({dst.size()});
  for (std::size_t e = 0; e < dst.size(); ++e) {
    const auto j = static_cast<std::size_t>(dst[e]);
    out[e] = std::exp(S[e] - mx[j]);
    z[j] += out[e];
  }
  for (std::size_t e = 0; e < dst.size(); ++e) out[e] /= z[static_cast<std::size_t>(dst[e])];
  const std::size_t is = scores.id();
  const std::size_t self = tape_of(scores).size();
  return tape_of(scores).record(std::move(out), scores.requires_grad(), [is, self, dst, n_nodes](Tape& t, const std::vector<double>& g) {
    const Tensor& Y = t.value(self);
    std::vector<double> dot(n_nodes, 0.0);
    for (std::size_t e = 0; e < dst.size(); ++e) dot[static_cast<std::size_t>(dst[e])] += g[e] * Y[e];
    auto& gs = t.grad(is);
    for (std::size_t e = 0; e < dst.size(); ++e) gs[e] += Y[e] * (g[e] - dot[static_cast<std::size_t>(dst[e])]);
  });
}

Var segment_mean(Var x, std::span<const Index> membership, std::size_t n_segments) {
  const Tensor& X = x.value();
  require_matrix(X, "segment_mean");
  const std::size_t n = X.rows(), d = X.cols();
  if (membership.size() != n) {
    throw DimensionError("segment_mean: membership of length " + std::to_string(membership.size()) +
                         " for " + std::to_string(n) + " rows");
  }
  std::vector<double> counts(n_segments, 0.0);
  for (Index m : membership) {
    check_index(m, n_segments, "segment_mean");
    counts[static_cast<std::size_t>(m)] += 1.0;
  }
  for (std::size_t s = 0; s < n_segments; ++s) {
    if (counts[s] == 0.0) throw ValidationError("segment_mean: segment " + std::to_string(s) + " is empty");
  }
  const auto& kern = simd::active();
  Tensor out = Tensor::matrix(n_segments, d);
  for (std::size_t i = 0; i < n; ++i) kern.add(d, X.data() + i * d, out.data() + static_cast<std::size_t>(membership[i]) * d);
  for (std::size_t s = 0; s < n_segments; ++s) kern.scale(d, 1.0 / counts[s], out.data() + s * d, out.data() + s * d);
  const std::size_t ix = x.id();
  return tape_of(x).record(std::move(out), x.requires_grad(),
                           [ix, membership, d, counts = std::move(counts)](Tape& t, const std::vector<double>& g) {
    const auto& kern = simd::active();
    auto& gx = t.grad(ix);
    for (std::size_t i = 0; i < membership.size(); ++i) {
      const auto s = static_cast<std::size_t>(membership[i]);
      kern.axpy(d, 1.0 / counts[s], g.data() + s * d, gx.data() + i * d);
    }
  });
}

Var cross_entropy(Var logits, std::span<const Index> labels, std::span<const std::uint8_t> mask) {
  const Tensor& L = logits.value();
  require_matrix(L, "cross_entropy");
  const std::size_t n = L.rows(), c = L.cols();
  if (labels.size() != n) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(n) + " rows");
  }
  if (!mask.empty() && mask.size() != n) {
    throw DimensionError("cross_entropy: mask of length " + std::to_string(mask.size()) + " for " +
                         std::to_string(n) + " rows");
  }
  std::size_t selected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && mask[i] == 0) continue;
    check_index(labels[i], c, "cross_entropy");
    ++selected;
  }
  if (selected == 0) throw ValidationError("cross_entropy: mask selects no rows");

  Tensor probs = Tensor::matrix(n, c);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && mask[i] == 0) continue;
    auto lr = L.row(i);
    const double mx = *std::max_element(lr.begin(), lr.end());
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += std::exp(lr[j] - mx);
    const double log_z = mx + std::log(z);
    for (std::size_t j = 0; j < c; ++j) probs(i, j) = std::exp(lr[j] - log_z);
    total += log_z - lr[static_cast<std::size_t>(labels[i])];
  }
  const double inv = 1.0 / static_cast<double>(selected);
  const std::size_t il = logits.id();
  return tape_of(logits).record(
      Tensor::scalar(total * inv), logits.requires_grad(),
      [il, labels, mask, n, c, inv, probs = std::move(probs)](Tape& t, const std::vector<double>& g) {
        auto& gl = t.grad(il);
        const double s = g[0] * inv;
        for (std::size_t i = 0; i < n; ++i) {
          if (!mask.empty() && mask[i] == 0) continue;
          for (std::size_t j = 0; j < c; ++j) gl[i * c + j] += s * probs(i, j);
          gl[i * c + static_cast<std::size_t>(labels[i])] -= s;
        }
      });
}

Var constrained_scalar(Var raw) {
  if (raw.value().size() != 1) throw DimensionError("constrained_scalar: raw parameter must be scalar");
  return sigmoid(raw);
}

Var l2_target_penalty(Var v, double target, double weight) {
  if (weight < 0) throw ParameterError("l2_target_penalty: negative weight");
  if (v.value().size() != 1) throw DimensionError("l2_target_penalty: value must be scalar");
  const double diff = v.item() - target;
  const std::size_t iv = v.id();
  return tape_of(v).record(Tensor::scalar(weight * diff * diff), v.requires_grad(),
                           [iv, diff, weight](Tape& t, const std::vector<double>& g) {
                             t.grad(iv)[0] += g[0] * 2.0 * weight * diff;
                           });
}

}  // namespace cgc::diff
