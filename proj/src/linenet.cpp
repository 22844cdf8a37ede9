///////////////////////////////////////////////////////////////////////
// File:        linenet.cpp
// Description: Bidirectional LSTM line recognizer with softmax output layer.
//
// (C) Copyright 2026, The ocrtl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
///////////////////////////////////////////////////////////////////////

#include "linenet.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "error.hpp"

namespace ocrtl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

LineImage normalize_line(const MatrixXd& raw, int target_height,
                         Polarity polarity) {
  if (raw.size() == 0) throw invalid_argument("line image has zero area");
  if (target_height < 1) {
    throw invalid_argument("target height must be positive");
  }
  if (!raw.allFinite()) throw invalid_argument("line image has non-finite pixels");

  MatrixXd unit;
  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  if (lo >= 0.0 && hi <= 1.0) {
    unit = raw;
  } else if (hi > lo) {
    unit = (raw.array() - lo) / (hi - lo);
  } else {
    // Constant image outside [0,1]: nothing but background.
    unit = MatrixXd::Constant(raw.rows(), raw.cols(),
                              polarity == Polarity::kInkDark ? 1.0 : 0.0);
  }
  if (polarity == Polarity::kInkDark) unit = (1.0 - unit.array()).matrix();

  const auto h = static_cast<int>(unit.rows());
  const auto w = static_cast<int>(unit.cols());
  if (h == target_height) return {std::move(unit)};

  const double scale = static_cast<double>(target_height) / h;
  const int out_w = std::max(1, static_cast<int>(std::lround(w * scale)));
  const double sy = static_cast<double>(h) / target_height;
  const double sx = static_cast<double>(w) / out_w;

  // Bilinear resampling with pixel centres aligned.
  auto coord = [](double pos, int n, int& i0, int& i1, double& frac) {
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    i0 = static_cast<int>(std::floor(pos));
    i1 = std::min(i0 + 1, n - 1);
    frac = pos - i0;
  };
  MatrixXd out(target_height, out_w);
  for (int x = 0; x < out_w; ++x) {
    int x0, x1;
    double fx;
    coord((x + 0.5) * sx - 0.5, w, x0, x1, fx);
    for (int y = 0; y < target_height; ++y) {
      int y0, y1;
      double fy;
      coord((y + 0.5) * sy - 0.5, h, y0, y1, fy);
      const double top = unit(y0, x0) * (1 - fx) + unit(y0, x1) * fx;
      const double bottom = unit(y1, x0) * (1 - fx) + unit(y1, x1) * fx;
      out(y, x) = std::clamp(top * (1 - fy) + bottom * fy, 0.0, 1.0);
    }
  }
  return {std::move(out)};
}

std::size_t Parameters::count() const {
  std::size_t n = 0;
  for_each([&](std::string_view, const auto& m) { n += m.size(); });
  return n;
}

Parameters Parameters::zeros_like() const {
  Parameters z = *this;
  z.for_each([](std::string_view, auto& m) { m.setZero(); });
  return z;
}

bool Parameters::all_finite() const {
  bool ok = true;
  for_each([&](std::string_view, const auto& m) { ok = ok && m.allFinite(); });
  return ok;
}

bool Parameters::operator==(const Parameters& other) const {
  auto same = [](const auto& a, const auto& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return same(forward.w_input, other.forward.w_input) &&
         same(forward.w_recurrent, other.forward.w_recurrent) &&
         same(forward.bias, other.forward.bias) &&
         same(backward.w_input, other.backward.w_input) &&
         same(backward.w_recurrent, other.backward.w_recurrent) &&
         same(backward.bias, other.backward.bias) &&
         same(output, other.output) && same(output_bias, other.output_bias);
}

std::size_t parameter_count(int input_height, int hidden_size,
                            int codec_size) {
  const std::size_t units = static_cast<std::size_t>(hidden_size) / 2;
  const std::size_t per_direction =
      4 * units * static_cast<std::size_t>(input_height) + 4 * units * units +
      4 * units;
  return 2 * per_direction +
         static_cast<std::size_t>(codec_size) * hidden_size + codec_size;
}

namespace {

void fill_uniform(std::mt19937_64& rng, double range, MatrixXd& m) {
  std::uniform_real_distribution<double> dist(-range, range);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
}

void fill_uniform(std::mt19937_64& rng, double range, VectorXd& v) {
  std::uniform_real_distribution<double> dist(-range, range);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
}

LstmBlock make_block(int input_height, int units) {
  return {MatrixXd::Zero(4 * units, input_height),
          MatrixXd::Zero(4 * units, units), VectorXd::Zero(4 * units)};
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Runs one direction over the columns of `x`. `reverse` consumes columns
// right to left; outputs stay indexed by column.
ForwardTape::Direction run_direction(const LstmBlock& block,
                                     const MatrixXd& x, bool reverse) {
  const int units = block.units();
  const auto steps = x.cols();
  ForwardTape::Direction dir;
  dir.gates.resize(4 * units, steps);
  dir.cells.resize(units, steps);
  dir.hidden.resize(units, steps);

  MatrixXd pre = block.w_input * x;
  pre.colwise() += block.bias;

  VectorXd h = VectorXd::Zero(units);
  VectorXd c = VectorXd::Zero(units);
  VectorXd a(4 * units);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const Eigen::Index t = reverse ? steps - 1 - k : k;
    a.noalias() = pre.col(t);
    a.noalias() += block.w_recurrent * h;
    for (int j = 0; j < 3 * units; ++j) a[j] = logistic(a[j]);
    for (int j = 3 * units; j < 4 * units; ++j) a[j] = std::tanh(a[j]);
    const auto in = a.segment(0, units).array();
    const auto forget = a.segment(units, units).array();
    const auto out = a.segment(2 * units, units).array();
    const auto cand = a.segment(3 * units, units).array();
    c = (forget * c.array() + in * cand).matrix();
    h = (out * c.array().tanh()).matrix();
    dir.gates.col(t) = a;
    dir.cells.col(t) = c;
    dir.hidden.col(t) = h;
  }
  return dir;
}

// Accumulates the gradient of one direction into `grad` and returns nothing;
// `dh` is the loss gradient w.r.t. this direction's hidden states.
void backprop_direction(const LstmBlock& block, const MatrixXd& x,
                        const ForwardTape::Direction& dir, const MatrixXd& dh,
                        bool reverse, LstmBlock& grad) {
  const int units = block.units();
  const auto steps = x.cols();
  MatrixXd d_pre(4 * units, steps);
  MatrixXd h_prev = MatrixXd::Zero(units, steps);

  VectorXd dh_next = VectorXd::Zero(units);
  VectorXd dc_next = VectorXd::Zero(units);
  VectorXd c_prev(units);
  VectorXd da(4 * units);
  // Walk time in the opposite order of the forward pass.
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const Eigen::Index t = reverse ? steps - 1 - k : k;
    const bool first = (k == 0);
    const Eigen::Index prev_t = reverse ? t + 1 : t - 1;
    if (first) {
      c_prev.setZero();
    } else {
      c_prev = dir.cells.col(prev_t);
      h_prev.col(t) = dir.hidden.col(prev_t);
    }
    const auto g = dir.gates.col(t);
    const auto in = g.segment(0, units).array();
    const auto forget = g.segment(units, units).array();
    const auto out = g.segment(2 * units, units).array();
    const auto cand = g.segment(3 * units, units).array();
    const Eigen::ArrayXd tc = dir.cells.col(t).array().tanh();

    const Eigen::ArrayXd dh_t = dh.col(t).array() + dh_next.array();
    const Eigen::ArrayXd dc = dc_next.array() + dh_t * out * (1.0 - tc * tc);
    da.segment(0, units) = (dc * cand * in * (1.0 - in)).matrix();
    da.segment(units, units) =
        (dc * c_prev.array() * forget * (1.0 - forget)).matrix();
    da.segment(2 * units, units) = (dh_t * tc * out * (1.0 - out)).matrix();
    da.segment(3 * units, units) = (dc * in * (1.0 - cand * cand)).matrix();
    d_pre.col(t) = da;
    dc_next = (dc * forget).matrix();
    dh_next.noalias() = block.w_recurrent.transpose() * da;
  }
  grad.w_input.noalias() += d_pre * x.transpose();
  grad.w_recurrent.noalias() += d_pre * h_prev.transpose();
  grad.bias += d_pre.rowwise().sum();
}

}  // namespace

Network init_network(int input_height, int hidden_size, Codec codec,
                     std::uint64_t seed) {
  if (input_height < 1) throw invalid_argument("input height must be positive");
  if (hidden_size < 2 || hidden_size % 2 != 0) {
    throw invalid_argument("hidden size must be even and at least 2, got " +
                           std::to_string(hidden_size));
  }
  const int units = hidden_size / 2;
  const auto c = static_cast<Eigen::Index>(codec.size());
  Network net;
  net.input_height = input_height;
  net.hidden_size = hidden_size;
  net.params.forward = make_block(input_height, units);
  net.params.backward = make_block(input_height, units);
  net.params.output = MatrixXd::Zero(c, hidden_size);
  net.params.output_bias = VectorXd::Zero(c);
  net.codec = std::move(codec);
  net.seed_lineage.push_back(seed);

  std::mt19937_64 rng(seed);
  net.params.for_each(
      [&](std::string_view, auto& m) { fill_uniform(rng, kInitRange, m); });
  return net;
}

Eigen::VectorXd softmax(const Eigen::Ref<const VectorXd>& logits) {
  if (logits.size() == 0) return {};
  const double m = logits.maxCoeff();
  VectorXd e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

ForwardTape forward_with_tape(const Network& net, const LineImage& line) {
  if (line.height() != net.input_height) {
    throw invalid_argument("line height " + std::to_string(line.height()) +
                           " does not match network input height " +
                           std::to_string(net.input_height));
  }
  if (line.width() < 1) throw invalid_argument("line image has zero width");
  const int units = net.hidden_size / 2;
  ForwardTape tape;
  tape.forward = run_direction(net.params.forward, line.pixels, false);
  tape.backward = run_direction(net.params.backward, line.pixels, true);
  tape.hidden.resize(net.hidden_size, line.width());
  tape.hidden.topRows(units) = tape.forward.hidden;
  tape.hidden.bottomRows(units) = tape.backward.hidden;

  MatrixXd logits = net.params.output * tape.hidden;  // C x T
  logits.colwise() += net.params.output_bias;

  auto& trace = tape.trace;
  trace.hidden = tape.hidden.transpose();
  trace.logits = logits.transpose();
  trace.posteriors.resize(trace.logits.rows(), trace.logits.cols());
  for (Eigen::Index t = 0; t < logits.cols(); ++t) {
    trace.posteriors.row(t) = softmax(logits.col(t)).transpose();
  }
  return tape;
}

ForwardTrace forward(const Network& net, const LineImage& line) {
  return forward_with_tape(net, line).trace;
}

Parameters backward(const Network& net, const LineImage& line,
                    const ForwardTape& tape, const MatrixXd& logit_grad) {
  const int units = net.hidden_size / 2;
  if (logit_grad.rows() != line.width() ||
      logit_grad.cols() != net.output_size()) {
    throw invalid_argument("logit gradient has the wrong shape");
  }
  Parameters grad = net.params.zeros_like();
  const MatrixXd d_logits = logit_grad.transpose();  // C x T
  grad.output.noalias() = d_logits * tape.hidden.transpose();
  grad.output_bias = d_logits.rowwise().sum();
  const MatrixXd dh = net.params.output.transpose() * d_logits;  // H x T
  backprop_direction(net.params.forward, line.pixels, tape.forward,
                     dh.topRows(units), false, grad.forward);
  backprop_direction(net.params.backward, line.pixels, tape.backward,
                     dh.bottomRows(units), true, grad.backward);
  return grad;
}

Network resize_output(const Network& net, const CodecDelta& delta,
                      std::uint64_t seed) {
  if (delta.is_identity() && delta.retained.size() == net.codec.size()) {
    return net;
  }
  Codec target = apply_delta(net.codec, delta);
  const auto& old_m = net.params.output;
  const auto& old_b = net.params.output_bias;
  if (old_m.rows() != static_cast<Eigen::Index>(net.codec.size())) {
    throw invalid_argument("output matrix rows do not match the codec size");
  }
  const auto c = static_cast<Eigen::Index>(target.size());
  MatrixXd m(c, net.hidden_size);
  VectorXd b(c);
  for (const auto& [old_i, new_i] : delta.retained) {
    m.row(new_i) = old_m.row(old_i);
    b[new_i] = old_b[old_i];
  }

  double range = kInitRange;
  if (old_m.size() > 1) {
    const double mean = old_m.mean();
    const double var = (old_m.array() - mean).square().mean();
    // Uniform(-a, a) has standard deviation a / sqrt(3).
    if (var > 0) range = std::sqrt(3.0 * var);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  for (const auto& [ch, new_i] : delta.added) {
    for (int j = 0; j < net.hidden_size; ++j) m(new_i, j) = dist(rng);
    b[new_i] = dist(rng);
  }

  Network out = net;
  out.params.output = std::move(m);
  out.params.output_bias = std::move(b);
  out.codec = std::move(target);
  out.seed_lineage.push_back(seed);
  return out;
}

Network round_to_float(const Network& net) {
  Network out = net;
  out.params.for_each([](std::string_view, auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
    }
  });
  return out;
}

std::vector<Label> argmax_path(const MatrixXd& posteriors) {
  std::vector<Label> path(static_cast<std::size_t>(posteriors.rows()));
  for (Eigen::Index t = 0; t < posteriors.rows(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < posteriors.cols(); ++k) {
      if (posteriors(t, k) > posteriors(t, best)) best = k;
    }
    path[static_cast<std::size_t>(t)] = static_cast<Label>(best);
  }
  return path;
}

}  // namespace ocrtl
