///////////////////////////////////////////////////////////////////////
// File:        trainer.hpp
// Description: Training loop, checkpoints and output-layer reconciliation.
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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evalkit.hpp"
#include "linenet.hpp"

namespace ocrtl {

struct TrainingConfig {
  std::size_t iterations = 10000;
  double learning_rate = 1e-4;
  double momentum = 0.9;
  std::size_t checkpoint_every = 1000;
  std::uint64_t seed = 0;
  CharSet whitelist;
  // Adds the whitelist to the codec when fine-tuning, not just shields it.
  bool force_whitelist = false;
  // Fresh initialization when empty, otherwise fine-tune from this model.
  std::optional<std::filesystem::path> pretrained;
  int input_height = kDefaultInputHeight;
  int hidden_size = kDefaultHiddenSize;
  double grad_clip = 10.0;  // elementwise gradient magnitude limit
  std::filesystem::path output_dir;

  void validate() const;
};

struct Checkpoint {
  std::size_t iteration = 0;
  std::filesystem::path path;
  double test_cer = 0.0;  // fraction
};

using CheckpointSeries = std::vector<Checkpoint>;

// Makes a pretrained network fit new ground truth: every GT character the
// codec lacks is added with a fresh output row, then every symbol that is
// neither in the GT nor immune (blank, space, whitelist) is removed. The
// codec's immune set becomes {blank, space} + whitelist.
Network reconcile_codec(const Network& pretrained,
                        std::span<const std::u32string> gt_texts,
                        const CharSet& whitelist, std::uint64_t seed,
                        bool force_whitelist = false);

// Throws Error(kBlindSpot / kInfeasibleTarget) naming the first sample the
// network cannot be trained on.
void validate_samples(const Network& net, std::span<const Sample> samples);

// Network plus momentum buffer.
class SgdState {
 public:
  explicit SgdState(Network net);

  // One momentum SGD step on the CTC loss of `sample`; returns the loss
  // before the update. Gradients are clipped elementwise to +-grad_clip.
  double step(const Sample& sample, double learning_rate, double momentum,
              double grad_clip = 10.0);

  const Network& network() const { return net_; }
  Network& network() { return net_; }

 private:
  Network net_;
  Parameters velocity_;
};

// Loss and parameter gradient for one sample.
struct LossGrad {
  double loss = 0.0;
  Parameters grad;
};
LossGrad loss_and_gradient(const Network& net, const Sample& sample);

// Fresh init or load + reconcile, then `iterations` uniformly drawn samples.
// Every `checkpoint_every` iterations a model-<iteration>.ocrm is written to
// output_dir and scored on `test_set`; checkpoints.csv lists the series.
CheckpointSeries train(std::span<const Sample> train_set,
                       std::span<const Sample> test_set,
                       const TrainingConfig& config);

// Lowest test CER; ties go to the earliest iteration.
const Checkpoint& select_best_checkpoint(const CheckpointSeries& series);

std::string checkpoints_csv(const CheckpointSeries& series);

// Initial network for `config` and the given training texts.
Network initial_network(std::span<const Sample> train_set,
                        const TrainingConfig& config);

}  // namespace ocrtl
