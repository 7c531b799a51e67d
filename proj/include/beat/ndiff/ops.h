#pragma once

#include "beat/ndiff/tape.h"

#include <cstddef>
#include <vector>

namespace beat::ndiff {

// Elementwise; shapes must match exactly (no broadcasting).
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);

Var leaky_relu(Var x, double slope = 0.2);
Var sigmoid(Var x);
Var tanh(Var x);
// Throws NumericError on any value <= 0.
Var log(Var x);

// Reductions to a scalar.
Var sum(Var x);
Var mean(Var x);
// mean |a - b|; the subgradient at a == b is 0.
Var l1_loss(Var a, Var b);

// x: N x Cin, W: Cin x Cout, b: Cout. Returns N x Cout.
Var dense(Var x, Var W, Var b);
Var matmul(Var a, Var b);

// Same-padded dilated temporal convolution.
// x: T x Cin, kernels: Cout x Cin x k (k odd), bias: Cout. Returns T x Cout.
Var conv1d(Var x, Var kernels, Var bias, std::size_t dilation);

// Single-layer LSTM over the rows of x, zero initial state, gate order
// (input, forget, cell, output). Wx: Cin x 4H, Wh: H x 4H, b: 4H.
Var lstm_seq(Var x, Var Wx, Var Wh, Var b);

// Rows of table selected by ids. Returns ids.size() x D.
Var embedding(const std::vector<std::size_t>& ids, Var table);

// Rank-2 concatenation along axis 0 (rows) or 1 (columns).
Var concat(const std::vector<Var>& parts, std::size_t axis);
Var slice_rows(Var x, std::size_t begin, std::size_t end);
Var repeat_rows(Var row, std::size_t times);
Var mean_rows(Var x);

// Value-only LSTM step shared by the sequence op and autoregressive
// synthesis, which advances one frame at a time without a tape.
struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
};
void lstm_step(const double* x, const Tensor& Wx, const Tensor& Wh, const Tensor& b, LstmState& state);

}  // namespace beat::ndiff
