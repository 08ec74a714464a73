#include "cgc/diff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cgc::diff {

double grad_check(const LossFn& fn, std::span<Parameter* const> params, double eps) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    tape.backward(fn(tape));
  }
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  auto eval = [&fn] {
    Tape tape;
    return fn(tape).item();
  };

  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double saved = p.value[j];
      p.value[j] = saved + eps;
      const double up = eval();
      p.value[j] = saved - eps;
      const double down = eval();
      p.value[j] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double err = std::abs(analytic[pi][j] - numeric) / std::max(1.0, std::abs(numeric));
      worst = std::max(worst, err);
    }
    p.zero_grad();
  }
  return worst;
}

}  // namespace cgc::diff
