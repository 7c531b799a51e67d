#include "beat/ndiff/adam.h"

#include <cmath>
#include <stdexcept>

namespace beat::ndiff {

void adam_step(ParameterSet& params, OptimizerState& state) {
  if (state.m.empty()) {
    for (std::size_t k = 0; k < params.count(); ++k) {
      state.m.emplace_back(params[k].value.shape());
      state.v.emplace_back(params[k].value.shape());
    }
  }
  if (state.m.size() != params.count()) throw std::invalid_argument("optimizer state does not match parameters");

  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.count(); ++k) {
    Parameter& p = params[k];
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    if (m.shape() != p.value.shape() || p.grad.shape() != p.value.shape()) {
      throw std::invalid_argument("optimizer shape mismatch for " + p.name);
    }
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      p.value[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  }
}

}  // namespace beat::ndiff
