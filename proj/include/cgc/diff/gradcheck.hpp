#pragma once

#include <functional>
#include <span>

#include "cgc/diff/tape.hpp"

namespace cgc::diff {

// Builds a scalar loss from the current parameter values on the given tape.
using LossFn = std::function<Var(Tape&)>;

// Compares backward() gradients against central differences
// (f(p + eps) - f(p - eps)) / 2eps for every entry of every parameter.
// Returns max |analytic - numeric| / max(1, |numeric|). Parameter values are
// restored and gradients zeroed on return.
double grad_check(const LossFn& fn, std::span<Parameter* const> params, double eps = 1e-5);

}  // namespace cgc::diff
