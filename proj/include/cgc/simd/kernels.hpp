#pragma once

#include <cstddef>
#include <string_view>

// Dense vector kernels behind every tensor op.
//
// Each kernel has a scalar reference body and vector bodies (AVX2 on x86-64,
// NEON on AArch64). Vector bodies only parallelise across independent output
// lanes and never fuse multiply-add, so every variant is bit-identical to the
// scalar one. The active table is chosen once at startup from the CPU
// features; setting CGC_SIMD=scalar in the environment forces the reference
// path.

namespace cgc::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  // y[i] += alpha * x[i]
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  // y[i] = alpha * x[i]
  void (*scale)(std::size_t n, double alpha, const double* x, double* y);
  // y[i] += x[i]
  void (*add)(std::size_t n, const double* x, double* y);
  // out[i] = (1 - t) * a[i] + t * b[i]
  void (*lerp)(std::size_t n, double t, const double* a, const double* b, double* out);
  // y[i] += x[i] * z[i]
  void (*mul_add)(std::size_t n, const double* x, const double* z, double* y);
};

const KernelTable& scalar_kernels();
// Returns nullptr when the ISA was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// The dispatched table used by the library.
const KernelTable& active();
// Override the dispatched table (tests and benchmarks). Returns the previous one.
const KernelTable& set_active(const KernelTable& table);

std::string_view isa_name(Isa isa);

}  // namespace cgc::simd
