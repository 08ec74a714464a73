#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "cgc/diff/tensor.hpp"

namespace cgc::diff {

// A learnable tensor. `grad` is empty until a backward pass reaches it.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {}

  bool has_grad() const { return grad.shape() == value.shape() && grad.size() == value.size(); }
  // Allocates a zero gradient when none is present.
  Tensor& ensure_grad();
  void zero_grad();
};

class Tape;

// Handle to a value recorded on a tape.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Tensor& value() const;
  const std::vector<std::size_t>& shape() const { return value().shape(); }
  bool requires_grad() const;
  double item() const { return value().item(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records operations in execution order and replays their backward rules in
// reverse. One tape per model instance; not thread-safe.
class Tape {
 public:
  // Receives the gradient of the node's output. The rule accumulates into its
  // inputs through Tape::grad().
  using BackwardFn = std::function<void(Tape&, const std::vector<double>& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  Var constant(Tensor value);
  Var parameter(Parameter& p);
  Var record(Tensor value, bool requires_grad, BackwardFn backward);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Gradient slot of a node, zero-allocated on first access.
  std::vector<double>& grad(std::size_t id);

  // Reverse sweep from a scalar loss. Parameter gradients accumulate across
  // calls until zeroed.
  void backward(Var loss);

  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;
    bool requires_grad = false;
    BackwardFn backward;
    Parameter* param = nullptr;
  };
  std::deque<Node> nodes_;  // stable references across appends
};

}  // namespace cgc::diff
