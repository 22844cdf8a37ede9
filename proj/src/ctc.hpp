///////////////////////////////////////////////////////////////////////
// File:        ctc.hpp
// Description: Connectionist temporal classification loss and best-path decoding.
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

#include <span>
#include <string>
#include <vector>

#include "codec.hpp"

namespace ocrtl {

struct CtcResult {
  double loss = 0.0;           // -ln P(target | posteriors)
  Eigen::MatrixXd logit_grad;  // T x C, d loss / d pre-softmax logits
};

// Minimum number of time steps that can emit `target`: one per label plus a
// separating blank between equal neighbours.
std::size_t ctc_min_steps(std::span<const Label> target);

// Forward-backward in log space over the blank-augmented target. Throws
// Error(kInfeasibleTarget) if the line is too short and
// Error(kInvalidArgument) if a label is the blank or out of range.
CtcResult ctc_loss_grad(const Eigen::MatrixXd& posteriors,
                        std::span<const Label> target);

// Exact total probability of `target` by enumerating all C^T paths. Only for
// small instances (C^T <= 1e7); larger ones throw.
double path_prob_oracle(const Eigen::MatrixXd& posteriors,
                        std::span<const Label> target);

// Collapses repeats and drops blanks.
std::vector<Label> collapse_path(std::span<const Label> path);

// Argmax per step (ties to the lowest index), collapse, decode.
std::u32string best_path_decode(const Eigen::MatrixXd& posteriors,
                                const Codec& codec);

}  // namespace ocrtl
