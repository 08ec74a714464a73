#include "cgc/harness/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cgc/error.hpp"

namespace cgc::harness {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

Summary summarize(std::span<const double> xs, double lower, double upper) {
  if (xs.empty()) throw ValidationError("summarize: empty sample");
  Summary s;
  s.n = xs.size();
  s.mean = mean(xs);
  const double half = kZ95 * sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
  s.lo = std::clamp(s.mean - half, lower, upper);
  s.hi = std::clamp(s.mean + half, lower, upper);
  return s;
}

}  // namespace cgc::harness
