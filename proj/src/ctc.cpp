///////////////////////////////////////////////////////////////////////
// File:        ctc.cpp
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

#include "ctc.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "linenet.hpp"

namespace ocrtl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

std::size_t ctc_min_steps(std::span<const Label> target) {
  std::size_t n = target.size();
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++n;
  }
  return n;
}

CtcResult ctc_loss_grad(const Eigen::MatrixXd& posteriors,
                        std::span<const Label> target) {
  const auto steps = posteriors.rows();
  const auto classes = posteriors.cols();
  for (Label l : target) {
    if (l < 1 || l >= classes) {
      throw invalid_argument("CTC target label " + std::to_string(l) +
                             " outside [1, " + std::to_string(classes - 1) +
                             "]");
    }
  }
  const std::size_t needed = ctc_min_steps(target);
  if (static_cast<std::size_t>(steps) < needed || steps == 0) {
    throw Error(ErrorKind::kInfeasibleTarget,
                "CTC target of length " + std::to_string(target.size()) +
                    " needs at least " + std::to_string(needed) +
                    " time steps, line has " + std::to_string(steps));
  }

  // Extended sequence: blank, l1, blank, l2, ..., blank.
  const auto ext = static_cast<Eigen::Index>(2 * target.size() + 1);
  std::vector<Label> seq(static_cast<std::size_t>(ext), kBlankLabel);
  for (std::size_t i = 0; i < target.size(); ++i) seq[2 * i + 1] = target[i];
  auto can_skip = [&](Eigen::Index s) {
    return s >= 2 && seq[s] != kBlankLabel && seq[s] != seq[s - 2];
  };

  const Eigen::MatrixXd log_y = posteriors.array().log().matrix();
  // alpha includes the emission at t; beta covers only steps after t.
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(steps, ext, kNegInf);
  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(steps, ext, kNegInf);

  alpha(0, 0) = log_y(0, seq[0]);
  if (ext > 1) alpha(0, 1) = log_y(0, seq[1]);
  for (Eigen::Index t = 1; t < steps; ++t) {
    for (Eigen::Index s = 0; s < ext; ++s) {
      double acc = alpha(t - 1, s);
      if (s >= 1) acc = log_add(acc, alpha(t - 1, s - 1));
      if (can_skip(s)) acc = log_add(acc, alpha(t - 1, s - 2));
      if (acc != kNegInf) alpha(t, s) = acc + log_y(t, seq[s]);
    }
  }

  beta(steps - 1, ext - 1) = 0.0;
  if (ext > 1) beta(steps - 1, ext - 2) = 0.0;
  for (Eigen::Index t = steps - 2; t >= 0; --t) {
    for (Eigen::Index s = 0; s < ext; ++s) {
      double acc = beta(t + 1, s) + log_y(t + 1, seq[s]);
      if (s + 1 < ext) {
        acc = log_add(acc, beta(t + 1, s + 1) + log_y(t + 1, seq[s + 1]));
      }
      if (s + 2 < ext && can_skip(s + 2)) {
        acc = log_add(acc, beta(t + 1, s + 2) + log_y(t + 1, seq[s + 2]));
      }
      beta(t, s) = acc;
    }
  }

  double log_p = alpha(steps - 1, ext - 1);
  if (ext > 1) log_p = log_add(log_p, alpha(steps - 1, ext - 2));
  if (!std::isfinite(log_p)) {
    throw Error(ErrorKind::kInfeasibleTarget,
                "CTC target has zero probability under the posteriors");
  }

  CtcResult result;
  result.loss = std::max(0.0, -log_p);
  result.logit_grad = posteriors;
  std::vector<double> occupancy(static_cast<std::size_t>(classes));
  for (Eigen::Index t = 0; t < steps; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kNegInf);
    for (Eigen::Index s = 0; s < ext; ++s) {
      auto& o = occupancy[static_cast<std::size_t>(seq[s])];
      o = log_add(o, alpha(t, s) + beta(t, s));
    }
    for (Eigen::Index k = 0; k < classes; ++k) {
      const double o = occupancy[static_cast<std::size_t>(k)];
      if (o != kNegInf) result.logit_grad(t, k) -= std::exp(o - log_p);
    }
  }
  return result;
}

std::vector<Label> collapse_path(std::span<const Label> path) {
  std::vector<Label> out;
  Label prev = -1;
  for (Label l : path) {
    if (l != prev && l != kBlankLabel) out.push_back(l);
    prev = l;
  }
  return out;
}

double path_prob_oracle(const Eigen::MatrixXd& posteriors,
                        std::span<const Label> target) {
  const auto steps = posteriors.rows();
  const auto classes = posteriors.cols();
  double n_paths = std::pow(static_cast<double>(classes),
                            static_cast<double>(steps));
  if (n_paths > 1e7) {
    throw invalid_argument("path enumeration of " + std::to_string(classes) +
                           "^" + std::to_string(steps) + " paths is too large");
  }
  const std::vector<Label> want(target.begin(), target.end());
  std::vector<Label> path(static_cast<std::size_t>(steps), 0);
  double total = 0.0;
  while (true) {
    if (collapse_path(path) == want) {
      double p = 1.0;
      for (Eigen::Index t = 0; t < steps; ++t) p *= posteriors(t, path[t]);
      total += p;
    }
    // Odometer increment.
    Eigen::Index t = steps - 1;
    while (t >= 0 && ++path[t] == classes) path[t--] = 0;
    if (t < 0) break;
  }
  return total;
}

std::u32string best_path_decode(const Eigen::MatrixXd& posteriors,
                                const Codec& codec) {
  const auto labels = collapse_path(argmax_path(posteriors));
  return codec.decode(labels);
}

}  // namespace ocrtl
