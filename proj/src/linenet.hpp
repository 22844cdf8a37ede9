///////////////////////////////////////////////////////////////////////
// File:        linenet.hpp
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

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codec.hpp"

namespace ocrtl {

// Height-normalized text line. Rows are pixel rows, columns are time steps;
// ink is high intensity, every value lies in [0,1].
struct LineImage {
  Eigen::MatrixXd pixels;

  int height() const { return static_cast<int>(pixels.rows()); }
  int width() const { return static_cast<int>(pixels.cols()); }
};

// How ink appears in a raw image: dark on light paper (scans, PNG files) or
// already bright on dark.
enum class Polarity { kInkDark, kInkBright };

// Maps a raw grayscale image onto the LineImage convention and rescales it to
// `target_height`, keeping the aspect ratio. Values already inside [0,1] are
// only flipped for kInkDark; anything else is min-max stretched first, and a
// constant image becomes all zeros. Throws on zero-area input.
LineImage normalize_line(const Eigen::MatrixXd& raw, int target_height,
                         Polarity polarity = Polarity::kInkDark);

// One LSTM direction. Gate rows are stacked as [input, forget, output,
// candidate], each hidden/2 rows tall.
struct LstmBlock {
  Eigen::MatrixXd w_input;      // 4*units x input_height
  Eigen::MatrixXd w_recurrent;  // 4*units x units
  Eigen::VectorXd bias;         // 4*units

  int units() const { return static_cast<int>(w_recurrent.cols()); }
};

struct Parameters {
  LstmBlock forward;
  LstmBlock backward;
  Eigen::MatrixXd output;       // M: one row of length H per codec symbol
  Eigen::VectorXd output_bias;  // one entry per codec symbol

  // Visits every parameter block in serialization order with its name.
  template <class Self, class F>
  static void visit(Self& self, F&& f) {
    f(std::string_view("forward.w_input"), self.forward.w_input);
    f(std::string_view("forward.w_recurrent"), self.forward.w_recurrent);
    f(std::string_view("forward.bias"), self.forward.bias);
    f(std::string_view("backward.w_input"), self.backward.w_input);
    f(std::string_view("backward.w_recurrent"), self.backward.w_recurrent);
    f(std::string_view("backward.bias"), self.backward.bias);
    f(std::string_view("output.weights"), self.output);
    f(std::string_view("output.bias"), self.output_bias);
  }
  template <class F>
  void for_each(F&& f) {
    visit(*this, std::forward<F>(f));
  }
  template <class F>
  void for_each(F&& f) const {
    visit(*this, std::forward<F>(f));
  }

  // Calls f(a_block, b_block) for each pair of matching blocks.
  template <class F>
  static void zip(Parameters& a, const Parameters& b, F&& f) {
    f(a.forward.w_input, b.forward.w_input);
    f(a.forward.w_recurrent, b.forward.w_recurrent);
    f(a.forward.bias, b.forward.bias);
    f(a.backward.w_input, b.backward.w_input);
    f(a.backward.w_recurrent, b.backward.w_recurrent);
    f(a.backward.bias, b.backward.bias);
    f(a.output, b.output);
    f(a.output_bias, b.output_bias);
  }

  std::size_t count() const;
  Parameters zeros_like() const;
  bool all_finite() const;
  bool operator==(const Parameters& other) const;
};

struct Network {
  int input_height = 0;
  int hidden_size = 0;  // H, split evenly between the two directions
  Parameters params;
  Codec codec;
  std::vector<std::uint64_t> seed_lineage;
  // Free-form training history written into the model file header.
  std::map<std::string, std::string> provenance;

  int output_size() const { return static_cast<int>(codec.size()); }
};

// Per-time-step activations, one row per column of the line.
struct ForwardTrace {
  Eigen::MatrixXd hidden;      // T x H, forward states then backward states
  Eigen::MatrixXd logits;      // T x C
  Eigen::MatrixXd posteriors;  // T x C, rows sum to one
};

inline constexpr int kDefaultInputHeight = 48;
inline constexpr int kDefaultHiddenSize = 100;
inline constexpr double kInitRange = 0.08;

std::size_t parameter_count(int input_height, int hidden_size, int codec_size);

// Uniform(-kInitRange, kInitRange) for every parameter, drawn from `seed`.
Network init_network(int input_height, int hidden_size, Codec codec,
                     std::uint64_t seed);

ForwardTrace forward(const Network& net, const LineImage& line);

// Numerically stable (max-subtracted) softmax.
Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);

// Applies a codec delta to the output layer: removed rows are deleted,
// retained rows move unchanged, and each added symbol gets a fresh random row
// and bias drawn from `seed`. The LSTM blocks are not touched.
Network resize_output(const Network& net, const CodecDelta& delta,
                      std::uint64_t seed);

// Copy of `net` with every parameter rounded to the nearest float.
Network round_to_float(const Network& net);

// Activations kept for backpropagation.
struct ForwardTape {
  struct Direction {
    Eigen::MatrixXd gates;   // 4*units x T, post-activation
    Eigen::MatrixXd cells;   // units x T
    Eigen::MatrixXd hidden;  // units x T
  };
  Direction forward;
  Direction backward;
  Eigen::MatrixXd hidden;  // H x T
  ForwardTrace trace;
};

ForwardTape forward_with_tape(const Network& net, const LineImage& line);

// Gradient of a loss with respect to every parameter, given the loss
// gradient with respect to the logits (T x C).
Parameters backward(const Network& net, const LineImage& line,
                    const ForwardTape& tape,
                    const Eigen::MatrixXd& logit_grad);

// Per-step argmax with ties going to the lowest index.
std::vector<Label> argmax_path(const Eigen::MatrixXd& posteriors);

}  // namespace ocrtl
