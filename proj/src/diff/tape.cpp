#include "cgc/diff/tape.hpp"

#include "cgc/error.hpp"
#include "cgc/simd/kernels.hpp"

namespace cgc::diff {

Tensor& Parameter::ensure_grad() {
  if (!has_grad()) grad = Tensor(value.shape(), 0.0);
  return grad;
}

void Parameter::zero_grad() { ensure_grad().fill(0.0); }

const Tensor& Var::value() const { return tape_->value(id_); }

bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& p) {
  nodes_.push_back(Node{p.value, {}, true, {}, &p});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, bool requires_grad, BackwardFn backward) {
  nodes_.push_back(Node{std::move(value), {}, requires_grad,
                        requires_grad ? std::move(backward) : BackwardFn{}, nullptr});
  return Var(this, nodes_.size() - 1);
}

std::vector<double>& Tape::grad(std::size_t id) {
  Node& node = nodes_[id];
  if (node.grad.size() != node.value.size()) node.grad.assign(node.value.size(), 0.0);
  return node.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape() != this) throw Error("backward: loss recorded on a different tape");
  if (loss.value().size() != 1) {
    throw DimensionError("backward: loss must be scalar, got shape " +
                         shape_string(loss.value().shape()));
  }
  for (Node& n : nodes_) n.grad.clear();
  grad(loss.id())[0] = 1.0;

  const auto& k = simd::active();
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.empty()) continue;
    if (node.param != nullptr) {
      Parameter& p = *node.param;
      k.add(node.grad.size(), node.grad.data(), p.ensure_grad().data());
    } else if (node.backward) {
      node.backward(*this, node.grad);
    }
  }
}

}  // namespace cgc::diff
