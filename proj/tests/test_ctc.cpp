///////////////////////////////////////////////////////////////////////
// File:        test_ctc.cpp
// Description: Tests for the ctc module.
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctc.hpp"
#include "error.hpp"
#include "linenet.hpp"
#include "test_support.hpp"

namespace ocrtl {
namespace {

using Eigen::MatrixXd;

MatrixXd row_softmax(const MatrixXd& logits) {
  MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    p.row(t) = softmax(logits.row(t).transpose()).transpose();
  }
  return p;
}

MatrixXd random_logits(std::mt19937_64& rng, int T, int C) {
  std::normal_distribution<double> n(0.0, 1.5);
  MatrixXd z(T, C);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < C; ++c) z(t, c) = n(rng);
  }
  return z;
}

std::vector<Label> random_target(std::mt19937_64& rng, int C, int max_len) {
  std::vector<Label> target(rng() % (max_len + 1));
  for (auto& l : target) l = static_cast<Label>(1 + rng() % (C - 1));
  return target;
}

// Sums path probabilities by walking every path recursively; independent of
// the library's own enumerator.
long double enumerate(const MatrixXd& p, const std::vector<Label>& target, int t,
                      std::vector<Label>& path) {
  if (t == p.rows()) {
    std::vector<Label> collapsed;
    Label prev = -1;
    for (Label l : path) {
      if (l != prev && l != kBlankLabel) collapsed.push_back(l);
      prev = l;
    }
    if (collapsed != target) return 0.0L;
    long double prob = 1.0L;
    for (std::size_t s = 0; s < path.size(); ++s) prob *= p(static_cast<Eigen::Index>(s), path[s]);
    return prob;
  }
  long double total = 0.0L;
  for (Label c = 0; c < p.cols(); ++c) {
    path.push_back(c);
    total += enumerate(p, target, t + 1, path);
    path.pop_back();
  }
  return total;
}

TEST(Ctc, UniformTwoStepsSingleLabel) {
  const MatrixXd p = MatrixXd::Constant(2, 2, 0.5);
  const std::vector<Label> target = {1};
  EXPECT_NEAR(path_prob_oracle(p, target), 0.75, 1e-15);
  EXPECT_NEAR(ctc_loss_grad(p, target).loss, -std::log(0.75), 1e-12);
}

TEST(Ctc, AdjacentDuplicatesNeedBlank) {
  const MatrixXd p = MatrixXd::Constant(3, 2, 0.5);
  const std::vector<Label> target = {1, 1};
  EXPECT_NEAR(path_prob_oracle(p, target), 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(ctc_loss_grad(p, target).loss, std::log(8.0), 1e-12);
  EXPECT_EQ(ctc_min_steps(target), 3u);
}

TEST(Ctc, EmptyTargetIsAllBlanks) {
  MatrixXd p(3, 2);
  p << 0.9, 0.1, 0.6, 0.4, 0.5, 0.5;
  EXPECT_NEAR(ctc_loss_grad(p, {}).loss, -std::log(0.9 * 0.6 * 0.5), 1e-12);
}

TEST(Ctc, InfeasibleTargetRaises) {
  const MatrixXd p = MatrixXd::Constant(2, 3, 1.0 / 3.0);
  const std::vector<Label> target = {1, 1};
  try {
    ctc_loss_grad(p, target);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasibleTarget);
  }
  const std::vector<Label> blank = {0};
  EXPECT_THROW(ctc_loss_grad(p, blank), Error);
  const std::vector<Label> out_of_range = {3};
  EXPECT_THROW(ctc_loss_grad(p, out_of_range), Error);
}

TEST(Ctc, OracleMatchesRecursiveEnumeration) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 1 + static_cast<int>(rng() % 5);
    const int C = 2 + static_cast<int>(rng() % 3);
    const MatrixXd p = row_softmax(random_logits(rng, T, C));
    const auto target = random_target(rng, C, 3);
    std::vector<Label> path;
    const double expected = static_cast<double>(enumerate(p, target, 0, path));
    EXPECT_NEAR(path_prob_oracle(p, target), expected, 1e-14);
  }
}

TEST(Ctc, LossMatchesEnumeration) {
  std::mt19937_64 rng(22);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int T = 1 + static_cast<int>(rng() % 6);
    const int C = 2 + static_cast<int>(rng() % 3);
    const MatrixXd p = row_softmax(random_logits(rng, T, C));
    const auto target = random_target(rng, C, 3);
    if (ctc_min_steps(target) > static_cast<std::size_t>(T)) continue;
    std::vector<Label> path;
    const double prob = static_cast<double>(enumerate(p, target, 0, path));
    const CtcResult r = ctc_loss_grad(p, target);
    EXPECT_NEAR(std::exp(-r.loss), prob, 1e-10 * std::max(1.0, prob));
    EXPECT_GE(r.loss, 0.0);
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(Ctc, GradientRowsSumToZero) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int T = 3 + static_cast<int>(rng() % 10);
    const int C = 3 + static_cast<int>(rng() % 5);
    const MatrixXd p = row_softmax(random_logits(rng, T, C));
    const auto target = random_target(rng, C, 2);
    const CtcResult r = ctc_loss_grad(p, target);
    EXPECT_LT(r.logit_grad.rowwise().sum().cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Ctc, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(24);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const int T = 2 + static_cast<int>(rng() % 5);
    const int C = 2 + static_cast<int>(rng() % 3);
    const MatrixXd z = random_logits(rng, T, C);
    auto target = random_target(rng, C, 3);
    while (ctc_min_steps(target) > static_cast<std::size_t>(T)) target.pop_back();
    const MatrixXd g = ctc_loss_grad(row_softmax(z), target).logit_grad;
    for (int t = 0; t < T; ++t) {
      for (int c = 0; c < C; ++c) {
        MatrixXd zp = z, zm = z;
        zp(t, c) += h;
        zm(t, c) -= h;
        const double fd = (ctc_loss_grad(row_softmax(zp), target).loss -
                           ctc_loss_grad(row_softmax(zm), target).loss) /
                          (2 * h);
        EXPECT_NEAR(g(t, c), fd, 1e-4 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(BestPath, CollapseRules) {
  const Codec codec = testing::letters_codec(2);  // blank, ' ', a=2, b=3
  auto decode_path = [&](std::vector<Label> path) {
    MatrixXd p = MatrixXd::Zero(static_cast<Eigen::Index>(path.size()), 4);
    for (std::size_t t = 0; t < path.size(); ++t) p(static_cast<Eigen::Index>(t), path[t]) = 1.0;
    return best_path_decode(p, codec);
  };
  EXPECT_EQ(decode_path({2, 2, 0, 3, 3}), U"ab");
  EXPECT_EQ(decode_path({0, 0, 0}), U"");
  EXPECT_EQ(decode_path({2, 0, 2}), U"aa");
  const std::vector<Label> path = {1, 1, 2, 0, 0, 2};
  EXPECT_EQ(collapse_path(path), (std::vector<Label>{1, 2, 2}));
}

}  // namespace
}  // namespace ocrtl
