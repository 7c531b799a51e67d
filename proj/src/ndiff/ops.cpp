#include "beat/ndiff/ops.h"

#include "beat/errors.h"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace beat::ndiff {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::Index;

Tape& tape_of(Var a) {
  if (!a.valid()) throw std::invalid_argument("operation on an unbound variable");
  return *a.tape();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                                shape_string(b.shape()));
  }
}

void require_rank2(const Tensor& t, const char* op, const char* what) {
  if (t.rank() != 2) {
    throw std::invalid_argument(std::string(op) + ": " + what + " must be rank 2, got " + shape_string(t.shape()));
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Elementwise map where the local derivative depends on input and output.
template <class Fwd, class Deriv>
Var unary(Var x, Fwd fwd, Deriv deriv) {
  const Tensor& xv = x.value();
  Tensor y(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) y[i] = fwd(xv[i]);
  return tape_of(x).record(std::move(y), {x}, [deriv](Backward& b) {
    const Tensor& xv = *b.in[0];
    Tensor& gx = *b.in_grad[0];
    for (std::size_t i = 0; i < xv.size(); ++i) gx[i] += b.out_grad[i] * deriv(xv[i], b.out[i]);
  });
}

}  // namespace

Var add(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "add");
  Tensor y = a.value();
  y += b.value();
  return tape_of(a).record(std::move(y), {a, b}, [](Backward& ctx) {
    for (int k = 0; k < 2; ++k) {
      if (ctx.in_grad[k]) *ctx.in_grad[k] += ctx.out_grad;
    }
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "sub");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor y(av.shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] - bv[i];
  return tape_of(a).record(std::move(y), {a, b}, [](Backward& ctx) {
    if (ctx.in_grad[0]) *ctx.in_grad[0] += ctx.out_grad;
    if (ctx.in_grad[1]) {
      Tensor& g = *ctx.in_grad[1];
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= ctx.out_grad[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "mul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor y(av.shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
  return tape_of(a).record(std::move(y), {a, b}, [](Backward& ctx) {
    const Tensor& av = *ctx.in[0];
    const Tensor& bv = *ctx.in[1];
    if (ctx.in_grad[0]) {
      Tensor& g = *ctx.in_grad[0];
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += ctx.out_grad[i] * bv[i];
    }
    if (ctx.in_grad[1]) {
      Tensor& g = *ctx.in_grad[1];
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += ctx.out_grad[i] * av[i];
    }
  });
}

Var scale(Var a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Var leaky_relu(Var x, double slope) {
  return unary(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double v, double) { return v > 0.0 ? 1.0 : slope; });
}

Var sigmoid(Var x) {
  return unary(x, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var x) {
  return unary(x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var log(Var x) {
  for (double v : x.value().data()) {
    if (!(v > 0.0)) throw NumericError("log of non-positive value " + std::to_string(v));
  }
  return unary(x, [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

Var sum(Var x) {
  double total = 0.0;
  for (double v : x.value().data()) total += v;
  return tape_of(x).record(Tensor::scalar(total), {x}, [](Backward& ctx) {
    const double g = ctx.out_grad.item();
    for (double& v : ctx.in_grad[0]->data()) v += g;
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw std::invalid_argument("mean of an empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var l1_loss(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "l1_loss");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const std::size_t n = av.size();
  if (n == 0) throw std::invalid_argument("l1_loss of empty tensors");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::abs(av[i] - bv[i]);
  return tape_of(a).record(Tensor::scalar(total / static_cast<double>(n)), {a, b}, [n](Backward& ctx) {
    const Tensor& av = *ctx.in[0];
    const Tensor& bv = *ctx.in[1];
    const double g = ctx.out_grad.item() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = av[i] - bv[i];
      const double s = d > 0.0 ? g : (d < 0.0 ? -g : 0.0);
      if (ctx.in_grad[0]) (*ctx.in_grad[0])[i] += s;
      if (ctx.in_grad[1]) (*ctx.in_grad[1])[i] -= s;
    }
  });
}

Var matmul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_rank2(av, "matmul", "lhs");
  require_rank2(bv, "matmul", "rhs");
  if (av.cols() != bv.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ " + shape_string(av.shape()) + " x " +
                                shape_string(bv.shape()));
  }
  Tensor y({av.rows(), bv.cols()});
  y.matrix().noalias() = av.matrix() * bv.matrix();
  return tape_of(a).record(std::move(y), {a, b}, [](Backward& ctx) {
    if (ctx.in_grad[0]) ctx.in_grad[0]->matrix().noalias() += ctx.out_grad.matrix() * ctx.in[1]->matrix().transpose();
    if (ctx.in_grad[1]) ctx.in_grad[1]->matrix().noalias() += ctx.in[0]->matrix().transpose() * ctx.out_grad.matrix();
  });
}

Var dense(Var x, Var W, Var b) {
  const Tensor& xv = x.value();
  const Tensor& wv = W.value();
  const Tensor& bv = b.value();
  require_rank2(wv, "dense", "weight");
  if (xv.rank() > 2 || xv.cols() != wv.rows()) {
    throw std::invalid_argument("dense: input " + shape_string(xv.shape()) + " does not fit weight " +
                                shape_string(wv.shape()));
  }
  if (bv.size() != wv.cols()) throw std::invalid_argument("dense: bias length does not match weight columns");
  Tensor y({xv.rows(), wv.cols()});
  auto ym = y.matrix();
  ym.noalias() = xv.matrix() * wv.matrix();
  ym.rowwise() += bv.matrix().row(0);
  return tape_of(x).record(std::move(y), {x, W, b}, [](Backward& ctx) {
    const auto gy = ctx.out_grad.matrix();
    if (ctx.in_grad[0]) ctx.in_grad[0]->matrix().noalias() += gy * ctx.in[1]->matrix().transpose();
    if (ctx.in_grad[1]) ctx.in_grad[1]->matrix().noalias() += ctx.in[0]->matrix().transpose() * gy;
    if (ctx.in_grad[2]) ctx.in_grad[2]->matrix().row(0) += gy.colwise().sum();
  });
}

namespace {

// Tap m of a (Cout x Cin x k) kernel as a Cin x Cout matrix.
RowMat kernel_tap(const Tensor& kernels, std::size_t m) {
  const std::size_t cout = kernels.dim(0);
  const std::size_t cin = kernels.dim(1);
  const std::size_t k = kernels.dim(2);
  RowMat tap(static_cast<Index>(cin), static_cast<Index>(cout));
  for (std::size_t o = 0; o < cout; ++o) {
    for (std::size_t i = 0; i < cin; ++i) tap(static_cast<Index>(i), static_cast<Index>(o)) = kernels[(o * cin + i) * k + m];
  }
  return tap;
}

struct TapRange {
  Index out_begin = 0;
  Index in_begin = 0;
  Index length = 0;
};

TapRange tap_range(Index frames, Index offset) {
  TapRange r;
  r.out_begin = std::max<Index>(0, -offset);
  const Index out_end = std::min<Index>(frames, frames - offset);
  r.length = std::max<Index>(0, out_end - r.out_begin);
  r.in_begin = r.out_begin + offset;
  return r;
}

}  // namespace

Var conv1d(Var x, Var kernels, Var bias, std::size_t dilation) {
  const Tensor& xv = x.value();
  const Tensor& kv = kernels.value();
  const Tensor& bv = bias.value();
  require_rank2(xv, "conv1d", "input");
  if (kv.rank() != 3) throw std::invalid_argument("conv1d: kernels must be Cout x Cin x k");
  if (kv.dim(2) % 2 == 0) throw std::invalid_argument("conv1d: kernel width must be odd");
  if (dilation == 0) throw std::invalid_argument("conv1d: dilation must be >= 1");
  if (kv.dim(1) != xv.cols()) {
    throw std::invalid_argument("conv1d: input has " + std::to_string(xv.cols()) + " channels, kernels expect " +
                                std::to_string(kv.dim(1)));
  }
  if (bv.size() != kv.dim(0)) throw std::invalid_argument("conv1d: bias length does not match output channels");

  const Index T = static_cast<Index>(xv.rows());
  const std::size_t k = kv.dim(2);
  const Index half = static_cast<Index>(k / 2);
  Tensor y({xv.rows(), kv.dim(0)});
  auto ym = y.matrix();
  const auto xm = xv.matrix();
  for (std::size_t m = 0; m < k; ++m) {
    const Index offset = (static_cast<Index>(m) - half) * static_cast<Index>(dilation);
    const TapRange r = tap_range(T, offset);
    if (r.length == 0) continue;
    ym.middleRows(r.out_begin, r.length).noalias() += xm.middleRows(r.in_begin, r.length) * kernel_tap(kv, m);
  }
  ym.rowwise() += bv.matrix().row(0);

  return tape_of(x).record(std::move(y), {x, kernels, bias}, [dilation](Backward& ctx) {
    const Tensor& xv = *ctx.in[0];
    const Tensor& kv = *ctx.in[1];
    const auto gy = ctx.out_grad.matrix();
    const auto xm = xv.matrix();
    const Index T = static_cast<Index>(xv.rows());
    const std::size_t cout = kv.dim(0);
    const std::size_t cin = kv.dim(1);
    const std::size_t k = kv.dim(2);
    const Index half = static_cast<Index>(k / 2);
    for (std::size_t m = 0; m < k; ++m) {
      const Index offset = (static_cast<Index>(m) - half) * static_cast<Index>(dilation);
      const TapRange r = tap_range(T, offset);
      if (r.length == 0) continue;
      if (ctx.in_grad[0]) {
        ctx.in_grad[0]->matrix().middleRows(r.in_begin, r.length).noalias() +=
            gy.middleRows(r.out_begin, r.length) * kernel_tap(kv, m).transpose();
      }
      if (ctx.in_grad[1]) {
        const RowMat gtap = xm.middleRows(r.in_begin, r.length).transpose() * gy.middleRows(r.out_begin, r.length);
        Tensor& gk = *ctx.in_grad[1];
        for (std::size_t o = 0; o < cout; ++o) {
          for (std::size_t i = 0; i < cin; ++i) gk[(o * cin + i) * k + m] += gtap(static_cast<Index>(i), static_cast<Index>(o));
        }
      }
    }
    if (ctx.in_grad[2]) ctx.in_grad[2]->matrix().row(0) += gy.colwise().sum();
  });
}

namespace {

void check_lstm_shapes(std::size_t cin, const Tensor& Wx, const Tensor& Wh, const Tensor& b) {
  if (Wx.rank() != 2 || Wh.rank() != 2) throw std::invalid_argument("lstm: weights must be rank 2");
  const std::size_t H = Wh.dim(0);
  if (Wh.dim(1) != 4 * H || Wx.dim(1) != 4 * H || b.size() != 4 * H) {
    throw std::invalid_argument("lstm: gate dimensions must be 4 x hidden size");
  }
  if (Wx.dim(0) != cin) {
    throw std::invalid_argument("lstm: input has " + std::to_string(cin) + " channels, weights expect " +
                                std::to_string(Wx.dim(0)));
  }
  if (!Wx.all_finite() || !Wh.all_finite() || !b.all_finite()) throw NumericError("lstm: non-finite parameters");
}

// Applies gate nonlinearities in place: [i f g o] pre-activations become
// activations, then advances (h, c).
void lstm_gates(double* gates, std::size_t H, double* h, double* c, double* tanh_c) {
  for (std::size_t j = 0; j < H; ++j) {
    const double i = stable_sigmoid(gates[j]);
    const double f = stable_sigmoid(gates[H + j]);
    const double g = std::tanh(gates[2 * H + j]);
    const double o = stable_sigmoid(gates[3 * H + j]);
    gates[j] = i;
    gates[H + j] = f;
    gates[2 * H + j] = g;
    gates[3 * H + j] = o;
    c[j] = f * c[j] + i * g;
    tanh_c[j] = std::tanh(c[j]);
    h[j] = o * tanh_c[j];
  }
}

}  // namespace

void lstm_step(const double* x, const Tensor& Wx, const Tensor& Wh, const Tensor& b, LstmState& state) {
  const std::size_t H = Wh.dim(0);
  const std::size_t cin = Wx.dim(0);
  if (state.h.size() != H) state.h.assign(H, 0.0);
  if (state.c.size() != H) state.c.assign(H, 0.0);
  Eigen::Map<const Eigen::RowVectorXd> xr(x, static_cast<Index>(cin));
  Eigen::Map<const Eigen::RowVectorXd> hr(state.h.data(), static_cast<Index>(H));
  Eigen::RowVectorXd gates = xr * Wx.matrix() + hr * Wh.matrix() + b.matrix().row(0);
  std::vector<double> tanh_c(H);
  lstm_gates(gates.data(), H, state.h.data(), state.c.data(), tanh_c.data());
}

Var lstm_seq(Var x, Var Wx, Var Wh, Var b) {
  const Tensor& xv = x.value();
  require_rank2(xv, "lstm_seq", "input");
  check_lstm_shapes(xv.cols(), Wx.value(), Wh.value(), b.value());
  const std::size_t T = xv.rows();
  const std::size_t H = Wh.value().dim(0);

  struct Cache {
    RowMat gates;   // T x 4H activations
    RowMat cells;   // T x H
    RowMat tanh_c;  // T x H
  };
  auto cache = std::make_shared<Cache>();
  cache->gates = xv.matrix() * Wx.value().matrix();
  cache->gates.rowwise() += b.value().matrix().row(0);
  cache->cells = RowMat::Zero(static_cast<Index>(T), static_cast<Index>(H));
  cache->tanh_c = RowMat::Zero(static_cast<Index>(T), static_cast<Index>(H));

  Tensor y({T, H});
  const auto whm = Wh.value().matrix();
  std::vector<double> h(H, 0.0), c(H, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const Index ti = static_cast<Index>(t);
    if (t > 0) {
      cache->gates.row(ti).noalias() += Eigen::Map<const Eigen::RowVectorXd>(h.data(), static_cast<Index>(H)) * whm;
    }
    lstm_gates(cache->gates.row(ti).data(), H, h.data(), c.data(), cache->tanh_c.row(ti).data());
    for (std::size_t j = 0; j < H; ++j) {
      cache->cells(ti, static_cast<Index>(j)) = c[j];
      y.at(t, j) = h[j];
    }
  }

  return tape_of(x).record(std::move(y), {x, Wx, Wh, b}, [cache, T, H](Backward& ctx) {
    const Tensor& hs = ctx.out;
    const auto gy = ctx.out_grad.matrix();
    const auto whm = ctx.in[2]->matrix();
    const Index Hi = static_cast<Index>(H);
    RowMat dgates(static_cast<Index>(T), 4 * Hi);
    Eigen::RowVectorXd dh_next = Eigen::RowVectorXd::Zero(Hi);
    Eigen::RowVectorXd dc_next = Eigen::RowVectorXd::Zero(Hi);
    for (std::size_t step = T; step-- > 0;) {
      const Index t = static_cast<Index>(step);
      const Eigen::RowVectorXd dh = gy.row(t) + dh_next;
      for (Index j = 0; j < Hi; ++j) {
        const double i = cache->gates(t, j);
        const double f = cache->gates(t, Hi + j);
        const double g = cache->gates(t, 2 * Hi + j);
        const double o = cache->gates(t, 3 * Hi + j);
        const double tc = cache->tanh_c(t, j);
        const double c_prev = t > 0 ? cache->cells(t - 1, j) : 0.0;
        const double dc = dh(j) * o * (1.0 - tc * tc) + dc_next(j);
        dgates(t, j) = dc * g * i * (1.0 - i);
        dgates(t, Hi + j) = dc * c_prev * f * (1.0 - f);
        dgates(t, 2 * Hi + j) = dc * i * (1.0 - g * g);
        dgates(t, 3 * Hi + j) = dh(j) * tc * o * (1.0 - o);
        dc_next(j) = dc * f;
      }
      dh_next.noalias() = dgates.row(t) * whm.transpose();
    }
    if (ctx.in_grad[0]) ctx.in_grad[0]->matrix().noalias() += dgates * ctx.in[1]->matrix().transpose();
    if (ctx.in_grad[1]) ctx.in_grad[1]->matrix().noalias() += ctx.in[0]->matrix().transpose() * dgates;
    if (ctx.in_grad[2] && T > 1) {
      ctx.in_grad[2]->matrix().noalias() +=
          hs.matrix().topRows(static_cast<Index>(T - 1)).transpose() * dgates.bottomRows(static_cast<Index>(T - 1));
    }
    if (ctx.in_grad[3]) ctx.in_grad[3]->matrix().row(0) += dgates.colwise().sum();
  });
}

Var embedding(const std::vector<std::size_t>& ids, Var table) {
  const Tensor& tv = table.value();
  require_rank2(tv, "embedding", "table");
  const std::size_t D = tv.cols();
  Tensor y({ids.size(), D});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= tv.rows()) {
      throw std::out_of_range("embedding id " + std::to_string(ids[r]) + " outside table of " +
                              std::to_string(tv.rows()) + " rows");
    }
    for (std::size_t j = 0; j < D; ++j) y.at(r, j) = tv.at(ids[r], j);
  }
  return tape_of(table).record(std::move(y), {table}, [ids, D](Backward& ctx) {
    Tensor& g = *ctx.in_grad[0];
    for (std::size_t r = 0; r < ids.size(); ++r) {
      for (std::size_t j = 0; j < D; ++j) g.at(ids[r], j) += ctx.out_grad.at(r, j);
    }
  });
}

Var concat(const std::vector<Var>& parts, std::size_t axis) {
  if (parts.empty()) throw std::invalid_argument("concat of nothing");
  if (axis > 1) throw std::invalid_argument("concat axis must be 0 or 1");
  const Tensor& first = parts.front().value();
  require_rank2(first, "concat", "part");
  std::size_t rows = 0, cols = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    require_rank2(v, "concat", "part");
    if (axis == 1) {
      if (v.rows() != first.rows()) throw std::invalid_argument("concat: row counts differ");
      cols += v.cols();
    } else {
      if (v.cols() != first.cols()) throw std::invalid_argument("concat: column counts differ");
      rows += v.rows();
    }
  }
  if (axis == 1) rows = first.rows(); else cols = first.cols();

  Tensor y({rows, cols});
  auto ym = y.matrix();
  Index at = 0;
  for (const Var& p : parts) {
    const auto pm = p.value().matrix();
    if (axis == 1) {
      ym.middleCols(at, pm.cols()) = pm;
      at += pm.cols();
    } else {
      ym.middleRows(at, pm.rows()) = pm;
      at += pm.rows();
    }
  }
  return tape_of(parts.front()).record(std::move(y), parts, [axis](Backward& ctx) {
    const auto gy = ctx.out_grad.matrix();
    Index at = 0;
    for (std::size_t k = 0; k < ctx.in.size(); ++k) {
      const Index extent = static_cast<Index>(axis == 1 ? ctx.in[k]->cols() : ctx.in[k]->rows());
      if (ctx.in_grad[k]) {
        if (axis == 1) ctx.in_grad[k]->matrix() += gy.middleCols(at, extent);
        else ctx.in_grad[k]->matrix() += gy.middleRows(at, extent);
      }
      at += extent;
    }
  });
}

Var slice_rows(Var x, std::size_t begin, std::size_t end) {
  const Tensor& xv = x.value();
  require_rank2(xv, "slice_rows", "input");
  if (begin > end || end > xv.rows()) throw std::out_of_range("slice_rows: bad range");
  Tensor y({end - begin, xv.cols()});
  y.matrix() = xv.matrix().middleRows(static_cast<Index>(begin), static_cast<Index>(end - begin));
  return tape_of(x).record(std::move(y), {x}, [begin, end](Backward& ctx) {
    ctx.in_grad[0]->matrix().middleRows(static_cast<Index>(begin), static_cast<Index>(end - begin)) +=
        ctx.out_grad.matrix();
  });
}

Var repeat_rows(Var row, std::size_t times) {
  const Tensor& rv = row.value();
  if (rv.rows() != 1) throw std::invalid_argument("repeat_rows: input must be a single row");
  Tensor y({times, rv.cols()});
  y.matrix().rowwise() = rv.matrix().row(0);
  return tape_of(row).record(std::move(y), {row}, [](Backward& ctx) {
    ctx.in_grad[0]->matrix().row(0) += ctx.out_grad.matrix().colwise().sum();
  });
}

Var mean_rows(Var x) {
  const Tensor& xv = x.value();
  require_rank2(xv, "mean_rows", "input");
  if (xv.rows() == 0) throw std::invalid_argument("mean_rows of zero rows");
  Tensor y({1, xv.cols()});
  y.matrix() = xv.matrix().colwise().mean();
  return tape_of(x).record(std::move(y), {x}, [](Backward& ctx) {
    auto gx = ctx.in_grad[0]->matrix();
    const double inv = 1.0 / static_cast<double>(gx.rows());
    gx.rowwise() += ctx.out_grad.matrix().row(0) * inv;
  });
}

}  // namespace beat::ndiff
