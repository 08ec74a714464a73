#include "cgc/diff/optim.hpp"

#include <cmath>

#include "cgc/error.hpp"
#include "cgc/simd/kernels.hpp"

namespace cgc::diff {
namespace {

void require_grad(const Parameter& p) {
  if (!p.has_grad()) {
    throw Error("optimizer step: parameter '" + p.name + "' has no gradient");
  }
}

}  // namespace

void sgd_step(std::span<Parameter* const> params, double lr) {
  for (const Parameter* p : params) require_grad(*p);
  const auto& k = simd::active();
  for (Parameter* p : params) {
    k.axpy(p->value.size(), -lr, p->grad.data(), p->value.data());
    p->zero_grad();
  }
}

void Sgd::step(std::span<Parameter* const> params) {
  if (momentum_ == 0.0) {
    sgd_step(params, lr_);
    return;
  }
  for (const Parameter* p : params) require_grad(*p);
  if (velocity_.size() != params.size()) velocity_.assign(params.size(), {});
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    auto& vel = velocity_[i];
    if (vel.size() != p.value.size()) vel.assign(p.value.size(), 0.0);
    for (std::size_t j = 0; j < vel.size(); ++j) {
      vel[j] = momentum_ * vel[j] + p.grad[j];
      p.value[j] -= lr_ * vel[j];
    }
    p.zero_grad();
  }
}

void Adam::step(std::span<Parameter* const> params) {
  for (const Parameter* p : params) require_grad(*p);
  if (m_.size() != params.size()) {
    m_.assign(params.size(), {});
    v_.assign(params.size(), {});
  }
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    auto& m = m_[i];
    auto& v = v_[i];
    if (m.size() != p.value.size()) {
      m.assign(p.value.size(), 0.0);
      v.assign(p.value.size(), 0.0);
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double g = p.grad[j];
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
      p.value[j] -= lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
    }
    p.zero_grad();
  }
}

std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, double lr, double momentum) {
  if (kind == "sgd") return std::make_unique<Sgd>(lr, momentum);
  if (kind == "adam") return std::make_unique<Adam>(lr);
  throw ParameterError("unknown optimizer '" + kind + "' (expected sgd or adam)");
}

}  // namespace cgc::diff
