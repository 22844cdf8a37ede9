///////////////////////////////////////////////////////////////////////
// File:        test_experiment.cpp
// Description: Tests for the experiment module.
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

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "error.hpp"
#include "experiment.hpp"

namespace ocrtl {
namespace {

Corpus fake_corpus(const std::string& id, std::size_t n) {
  Corpus c{id, {}};
  for (std::size_t i = 0; i < n; ++i) {
    c.lines.push_back({id + std::to_string(i), LineImage{Eigen::MatrixXd::Zero(1, 1)}, U"x"});
  }
  return c;
}

std::vector<InitMode> two_modes() {
  return {{"default", {}, {}, false}, {"LH", std::filesystem::path("lh.ocrm"), {}, false}};
}

CellRunner fixed_runner(std::map<std::string, double> cer) {
  return [cer](const CellSpec& cell, const InitMode&, std::span<const Sample>,
               std::span<const Sample>, std::span<const Sample>, std::uint64_t,
               const std::filesystem::path&) { return cer.at(cell.mode); };
}

TEST(Budget, TestLineCounts) {
  EXPECT_EQ(test_lines_for_budget(60), 8u);
  EXPECT_EQ(test_lines_for_budget(150), 20u);
  EXPECT_EQ(test_lines_for_budget(30), 4u);
}

TEST(Budget, SplitHalvesCorpus) {
  const CorpusSplit s = split_corpus(21, 3);
  EXPECT_EQ(s.eval.size(), 10u);
  EXPECT_EQ(s.pool.size(), 11u);
  std::set<std::size_t> all(s.eval.begin(), s.eval.end());
  all.insert(s.pool.begin(), s.pool.end());
  EXPECT_EQ(all.size(), 21u);
  EXPECT_EQ(split_corpus(21, 3).eval, s.eval);
}

TEST(Budget, DrawsAreNestedAcrossBudgets) {
  std::vector<std::size_t> pool(200);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = 1000 + i;
  const BudgetDraw small = draw_budget(pool, 60, 5);
  const BudgetDraw large = draw_budget(pool, 150, 5);
  EXPECT_EQ(small.train.size(), 52u);
  EXPECT_EQ(small.test.size(), 8u);
  EXPECT_EQ(large.train.size(), 130u);
  EXPECT_EQ(large.test.size(), 20u);
  std::set<std::size_t> large_all(large.train.begin(), large.train.end());
  large_all.insert(large.test.begin(), large.test.end());
  for (std::size_t i : small.train) EXPECT_TRUE(large_all.count(i));
  for (std::size_t i : small.test) EXPECT_TRUE(large_all.count(i));
  std::set<std::size_t> small_train(small.train.begin(), small.train.end());
  for (std::size_t i : small.test) EXPECT_FALSE(small_train.count(i));
  EXPECT_THROW(draw_budget(pool, 201, 5), Error);
}

TEST(Experiment, StubbedNumbersAndGainReproduced) {
  const std::vector<Corpus> corpora = {fake_corpus("1476", 130)};
  const auto modes = two_modes();
  ExperimentConfig cfg;
  cfg.budgets = {60};
  cfg.folds = 1;
  cfg.master_seed = 1;
  const ExperimentReport r =
      run_experiment(corpora, modes, cfg, fixed_runner({{"default", 0.0821}, {"LH", 0.0535}}));
  ASSERT_EQ(r.cells.size(), 2u);
  const SummaryRow* def = r.find("1476", 60, "default");
  const SummaryRow* lh = r.find("1476", 60, "LH");
  ASSERT_TRUE(def && lh);
  EXPECT_DOUBLE_EQ(def->mean_cer, 0.0821);
  EXPECT_FALSE(def->gain.has_value());
  ASSERT_TRUE(lh->gain.has_value());
  EXPECT_EQ(gain_display(*lh->gain), 35);
  EXPECT_NE(r.summary_csv().find("1476,60,LH,5.3500,"), std::string::npos) << r.summary_csv();
}

TEST(Experiment, AverageRowsMeanPerCorpusGains) {
  const std::vector<Corpus> corpora = {fake_corpus("a", 40), fake_corpus("b", 40)};
  const auto modes = two_modes();
  ExperimentConfig cfg;
  cfg.budgets = {15};
  cfg.folds = 2;
  const CellRunner runner = [](const CellSpec& cell, const InitMode&, std::span<const Sample>,
                               std::span<const Sample>, std::span<const Sample>, std::uint64_t,
                               const std::filesystem::path&) {
    if (cell.mode == "default") return cell.corpus == "a" ? 0.10 : 0.04;
    return cell.corpus == "a" ? 0.05 : 0.03;
  };
  const ExperimentReport r = run_experiment(corpora, modes, cfg, runner);
  const SummaryRow* avg = r.find("AVG", 15, "LH");
  ASSERT_TRUE(avg && avg->gain);
  EXPECT_NEAR(*avg->gain, (50.0 + 25.0) / 2.0, 1e-9);
  EXPECT_NEAR(avg->mean_cer, 0.04, 1e-12);
}

TEST(Experiment, ModesShareDrawAndSeed) {
  const std::vector<Corpus> corpora = {fake_corpus("c", 100)};
  const auto modes = two_modes();
  ExperimentConfig cfg;
  cfg.budgets = {20, 40};
  cfg.folds = 3;
  std::mutex m;
  std::map<std::tuple<std::size_t, std::size_t, std::string>,
           std::pair<std::uint64_t, std::vector<std::string>>>
      seen;
  const CellRunner runner = [&](const CellSpec& cell, const InitMode&,
                                std::span<const Sample> train, std::span<const Sample> test,
                                std::span<const Sample> eval, std::uint64_t seed,
                                const std::filesystem::path&) {
    EXPECT_EQ(train.size() + test.size(), cell.budget);
    EXPECT_EQ(eval.size(), 50u);
    std::vector<std::string> ids;
    for (const auto& s : train) ids.push_back(s.id);
    std::lock_guard lock(m);
    seen[{cell.budget, cell.fold, cell.mode}] = {seed, ids};
    return 0.1;
  };
  run_experiment(corpora, modes, cfg, runner);
  for (std::size_t b : {20u, 40u}) {
    for (std::size_t f = 1; f <= 3; ++f) {
      EXPECT_EQ(seen.at({b, f, "default"}), seen.at({b, f, "LH"}));
    }
  }
  EXPECT_NE(seen.at({20, 1, "default"}).second, seen.at({20, 2, "default"}).second);
}

TEST(Experiment, ParallelMatchesSerial) {
  const std::vector<Corpus> corpora = {fake_corpus("p", 120), fake_corpus("q", 120)};
  const auto modes = two_modes();
  ExperimentConfig cfg;
  cfg.budgets = {30, 60};
  cfg.folds = 3;
  cfg.master_seed = 9;
  const CellRunner runner = stub_cell_runner({{"default", 8.0}, {"LH", 5.0}});
  const auto serial = run_experiment(corpora, modes, cfg, runner);
  cfg.jobs = 3;
  const auto parallel = run_experiment(corpora, modes, cfg, runner);
  EXPECT_EQ(serial.experiment_csv(), parallel.experiment_csv());
  EXPECT_EQ(serial.summary_csv(), parallel.summary_csv());
}

TEST(Experiment, InsufficientGtRejected) {
  const std::vector<Corpus> corpora = {fake_corpus("tiny", 50)};
  const auto modes = two_modes();
  ExperimentConfig cfg;
  cfg.budgets = {60};
  EXPECT_THROW(run_experiment(corpora, modes, cfg, fixed_runner({{"default", 0.1}, {"LH", 0.1}})),
               Error);
}

TEST(Experiment, CsvHeaders) {
  const std::vector<Corpus> corpora = {fake_corpus("h", 40)};
  const auto modes = two_modes();
  ExperimentConfig cfg;
  cfg.budgets = {10};
  cfg.folds = 1;
  const auto r =
      run_experiment(corpora, modes, cfg, fixed_runner({{"default", 0.5}, {"LH", 0.25}}));
  EXPECT_EQ(r.experiment_csv().substr(0, 32), "corpus,budget,mode,fold,eval_cer");
  EXPECT_EQ(r.summary_csv().substr(0, 44), "corpus,budget,mode,mean_cer,gain_vs_default\n");
}

}  // namespace
}  // namespace ocrtl
