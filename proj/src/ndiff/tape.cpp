#include "beat/ndiff/tape.h"

#include "beat/errors.h"

#include <cmath>
#include <stdexcept>

namespace beat::ndiff {

Parameter& ParameterSet::add(std::string name, Tensor value) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter name " + name);
  auto p = std::make_unique<Parameter>();
  p->name = std::move(name);
  p->grad = Tensor(value.shape());
  p->value = std::move(value);
  index_[p->name] = params_.size();
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter& ParameterSet::add_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  Tensor value(std::move(shape));
  for (double& v : value.data()) v = rng.uniform(-bound, bound);
  return add(std::move(name), std::move(value));
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

Parameter* ParameterSet::find(const std::string& name) {
  const auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParameterSet::find(const std::string& name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p->grad.fill(0.0);
}

const Tensor& Var::value() const { return tape_->value(*this); }

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}, {}, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::variable(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, true, {}, {}, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(Parameter& p) {
  const auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var(this, it->second);
  nodes_.push_back(Node{p.value, {}, true, {}, {}, &p});
  param_nodes_[&p] = nodes_.size() - 1;
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, const std::vector<Var>& inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (const Var& v : inputs) {
    if (v.tape() != this) throw std::logic_error("operand belongs to a different tape");
    node.inputs.push_back(v.id());
    node.requires_grad = node.requires_grad || nodes_[v.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Tensor Tape::grad(Var v) const {
  const Node& n = nodes_.at(v.id());
  return n.grad.empty() ? Tensor(n.value.shape()) : n.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape() != this) throw std::logic_error("loss belongs to a different tape");
  Node& root = nodes_.at(loss.id());
  if (root.value.size() != 1) {
    throw std::invalid_argument("backward() needs a scalar loss, got shape " + shape_string(root.value.shape()));
  }
  if (!std::isfinite(root.value.item())) throw NumericError("loss is not finite");
  for (auto& n : nodes_) n.grad = Tensor();
  root.grad = Tensor(root.value.shape(), 1.0);

  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.empty() || !node.backward) continue;
    Backward ctx{node.value, node.grad, {}, {}};
    for (std::size_t in : node.inputs) {
      Node& src = nodes_[in];
      ctx.in.push_back(&src.value);
      if (src.requires_grad) {
        if (src.grad.empty()) src.grad = Tensor(src.value.shape());
        ctx.in_grad.push_back(&src.grad);
      } else {
        ctx.in_grad.push_back(nullptr);
      }
    }
    node.backward(ctx);
  }

  for (auto& n : nodes_) {
    if (n.param != nullptr && !n.grad.empty()) n.param->grad += n.grad;
  }
}

}  // namespace beat::ndiff
