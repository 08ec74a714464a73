#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "cgc/harness/datasets.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/model/model.hpp"
#include "cgc/simd/kernels.hpp"

using namespace cgc;

namespace {

std::vector<const simd::KernelTable*> vector_tables() {
  std::vector<const simd::KernelTable*> out;
  if (auto* t = simd::avx2_kernels()) out.push_back(t);
  if (auto* t = simd::neon_kernels()) out.push_back(t);
  return out;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Mostly normal draws with a sprinkling of values that stress rounding and
// special-value propagation.
std::vector<double> awkward(std::size_t n, std::mt19937_64& rng) {
  static const double specials[] = {0.0,
                                    -0.0,
                                    std::numeric_limits<double>::denorm_min(),
                                    -std::numeric_limits<double>::min(),
                                    std::numeric_limits<double>::max(),
                                    std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::quiet_NaN(),
                                    1e-300,
                                    1.0 + std::numeric_limits<double>::epsilon()};
  std::normal_distribution<double> normal(0, 10);
  std::uniform_int_distribution<int> pick(0, 15);
  std::vector<double> v(n);
  for (auto& x : v) {
    const int k = pick(rng);
    x = k < 9 ? specials[k] : normal(rng);
  }
  return v;
}

struct ScopedTable {
  const simd::KernelTable& previous;
  explicit ScopedTable(const simd::KernelTable& t) : previous(simd::set_active(t)) {}
  ~ScopedTable() { simd::set_active(previous); }
};

}  // namespace

TEST_CASE("the dispatched table is a known ISA") {
  const auto& a = simd::active();
  CHECK((a.isa == simd::Isa::kScalar || &a == simd::avx2_kernels() || &a == simd::neon_kernels()));
  CHECK(simd::isa_name(simd::Isa::kScalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::kAvx2) == "avx2");
  CHECK(simd::scalar_kernels().isa == simd::Isa::kScalar);
}

TEST_CASE("scalar kernels match their definitions") {
  const auto& k = simd::scalar_kernels();
  std::vector<double> x{1, 2, 3}, z{4, 5, 6}, y{10, 20, 30}, out(3);
  k.axpy(3, 2.0, x.data(), y.data());
  CHECK(y == std::vector<double>{12, 24, 36});
  k.scale(3, 0.5, z.data(), out.data());
  CHECK(out == std::vector<double>{2, 2.5, 3});
  k.add(3, x.data(), y.data());
  CHECK(y == std::vector<double>{13, 26, 39});
  k.lerp(3, 0.25, x.data(), z.data(), out.data());
  CHECK(out == std::vector<double>{0.75 * 1 + 0.25 * 4, 0.75 * 2 + 0.25 * 5, 0.75 * 3 + 0.25 * 6});
  k.mul_add(3, x.data(), z.data(), y.data());
  CHECK(y == std::vector<double>{17, 36, 57});
}

TEST_CASE("vector kernels are bit-identical to the scalar ones") {
  const auto tables = vector_tables();
  if (tables.empty()) {
    MESSAGE("no vector ISA available on this machine; equivalence not exercised");
    return;
  }
  const auto& s = simd::scalar_kernels();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> coef(0, 3);
  for (const auto* v : tables) {
    CAPTURE(simd::isa_name(v->isa));
    bool all_equal = true;
    // Lengths cover empty, sub-vector, exact multiples and every tail size;
    // offsets make the pointers unaligned.
    for (std::size_t n = 0; n <= 70; ++n) {
      for (std::size_t off = 0; off < 3; ++off) {
        const double alpha = coef(rng);
        const double t = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto x = awkward(n + off, rng), z = awkward(n + off, rng), y0 = awkward(n + off, rng);

        auto ys = y0, yv = y0;
        s.axpy(n, alpha, x.data() + off, ys.data() + off);
        v->axpy(n, alpha, x.data() + off, yv.data() + off);
        all_equal &= bitwise_equal(ys, yv);

        ys = y0, yv = y0;
        s.scale(n, alpha, x.data() + off, ys.data() + off);
        v->scale(n, alpha, x.data() + off, yv.data() + off);
        all_equal &= bitwise_equal(ys, yv);

        ys = y0, yv = y0;
        s.add(n, x.data() + off, ys.data() + off);
        v->add(n, x.data() + off, yv.data() + off);
        all_equal &= bitwise_equal(ys, yv);

        ys = y0, yv = y0;
        s.lerp(n, t, x.data() + off, z.data() + off, ys.data() + off);
        v->lerp(n, t, x.data() + off, z.data() + off, yv.data() + off);
        all_equal &= bitwise_equal(ys, yv);

        ys = y0, yv = y0;
        s.mul_add(n, x.data() + off, z.data() + off, ys.data() + off);
        v->mul_add(n, x.data() + off, z.data() + off, yv.data() + off);
        all_equal &= bitwise_equal(ys, yv);
      }
    }
    CHECK(all_equal);
  }
}

TEST_CASE("training is bit-identical under every kernel table") {
  const auto tables = vector_tables();
  if (tables.empty()) return;

  const auto data = harness::load_dataset("ba_shapes");
  const auto split = graph::split(data.labels(), 0.8, 0);
  auto run = [&](const simd::KernelTable& table, model::LayerKind kind) {
    ScopedTable scope(table);
    model::ModelConfig cfg;
    cfg.layer_kind = kind;
    cfg.n_layers = 2;
    cfg.hidden = 6;
    cfg.concept_width = 6;
    cfg.epochs = 15;
    cfg.lr = 0.01;
    auto m = model::build_model(cfg, data.task(), data.n_features(), data.n_classes());
    const auto h = model::train(m, data, split);
    return std::pair{h.final_loss, model::checkpoint_json(m).dump()};
  };
  for (auto kind : {model::LayerKind::kCgc, model::LayerKind::kGat}) {
    CAPTURE(model::to_string(kind));
    const auto ref = run(simd::scalar_kernels(), kind);
    for (const auto* v : tables) {
      const auto got = run(*v, kind);
      CHECK(std::memcmp(&got.first, &ref.first, sizeof(double)) == 0);
      CHECK(got.second == ref.second);
    }
  }
}
