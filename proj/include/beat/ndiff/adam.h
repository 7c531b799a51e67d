#pragma once

#include "beat/ndiff/tape.h"

#include <cstddef>
#include <vector>

namespace beat::ndiff {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  AdamConfig config;
  std::size_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

// Bias-corrected Adam update of every parameter from its .grad. Moment
// buffers are allocated on the first call.
void adam_step(ParameterSet& params, OptimizerState& state);

}  // namespace beat::ndiff
