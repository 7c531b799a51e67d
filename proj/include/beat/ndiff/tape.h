#pragma once

#include "beat/ndiff/tensor.h"

#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace beat::ndiff {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Owns parameters with stable addresses, in registration order.
class ParameterSet {
 public:
  Parameter& add(std::string name, Tensor value);
  // Uniform in +-sqrt(1/fan_in).
  Parameter& add_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng);

  std::size_t count() const { return params_.size(); }
  std::size_t scalar_count() const;
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;
  void zero_grad();

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

class Tape;

// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// What a backward closure sees. in_grad[i] is null when input i needs no
// gradient; otherwise it is a zero-initialised accumulator to add into.
struct Backward {
  const Tensor& out;
  const Tensor& out_grad;
  std::vector<const Tensor*> in;
  std::vector<Tensor*> in_grad;
};

using BackwardFn = std::function<void(Backward&)>;

// Reverse-mode tape. Nodes are appended in evaluation order, so reverse id
// order is a valid topological order for the backward sweep.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  Var variable(Tensor value);
  // Leaf bound to a parameter; repeated calls return the same node and the
  // accumulated gradient is added to p.grad by backward().
  Var param(Parameter& p);
  Var record(Tensor value, const std::vector<Var>& inputs, BackwardFn backward);

  void backward(Var loss);

  const Tensor& value(Var v) const { return nodes_.at(v.id()).value; }
  // Zeros when no gradient reached v.
  Tensor grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id()).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
  };

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

}  // namespace beat::ndiff
