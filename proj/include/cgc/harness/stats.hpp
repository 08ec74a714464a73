#pragma once

#include <span>

namespace cgc::harness {

// Mean with a 95% normal-approximation interval:
//   mean +- 1.96 * s / sqrt(n), s the sample standard deviation,
// clamped to [lower, upper]. A single value gives a zero-width interval.
struct Summary {
  double mean = 0;
  double lo = 0;
  double hi = 0;
  std::size_t n = 0;

  bool operator==(const Summary&) const = default;
};

inline constexpr double kZ95 = 1.96;

double mean(std::span<const double> xs);
// Sample (n - 1) standard deviation; 0 for fewer than two values.
double sample_std(std::span<const double> xs);
// Throws ValidationError on an empty sample.
Summary summarize(std::span<const double> xs, double lower = 0.0, double upper = 100.0);

}  // namespace cgc::harness
