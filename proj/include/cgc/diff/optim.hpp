#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cgc/diff/tape.hpp"

namespace cgc::diff {

// p <- p - lr * grad, then zero the gradient. Throws if a parameter has no
// gradient yet.
void sgd_step(std::span<Parameter* const> params, double lr);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // Applies one update and zeroes the gradients.
  virtual void step(std::span<Parameter* const> params) = 0;
};

class Sgd final : public Optimizer {
 public:
  explicit Sgd(double lr, double momentum = 0.0) : lr_(lr), momentum_(momentum) {}
  void step(std::span<Parameter* const> params) override;

 private:
  double lr_;
  double momentum_;
  std::vector<std::vector<double>> velocity_;
};

class Adam final : public Optimizer {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
  void step(std::span<Parameter* const> params) override;

 private:
  double lr_, beta1_, beta2_, eps_;
  long step_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// "sgd" or "adam".
std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, double lr, double momentum = 0.0);

}  // namespace cgc::diff
