///////////////////////////////////////////////////////////////////////
// File:        experiment.hpp
// Description: Budgeted transfer experiments over corpora and init modes.
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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codec.hpp"
#include "evalkit.hpp"
#include "trainer.hpp"

namespace ocrtl {

// How a cell's network starts: from scratch or from a pretrained model with a
// given whitelist.
struct InitMode {
  std::string name;
  std::optional<std::filesystem::path> pretrained;
  CharSet whitelist;
  bool force_whitelist = false;
};

struct Corpus {
  std::string id;
  std::vector<Sample> lines;
};

struct ExperimentConfig {
  std::vector<std::size_t> budgets;
  std::size_t folds = 5;
  std::uint64_t master_seed = 0;
  TrainingConfig training;  // seed, init and output dir are set per cell
  std::filesystem::path work_dir;
  std::size_t jobs = 1;
  std::string default_mode = "default";  // baseline for gains
};

struct CellSpec {
  std::string corpus;
  std::size_t budget = 0;
  std::string mode;
  std::size_t fold = 0;  // 1-based
};

struct CellResult {
  CellSpec cell;
  double eval_cer = 0.0;  // fraction
};

struct SummaryRow {
  std::string corpus;  // "AVG" for the per-budget average rows
  std::size_t budget = 0;
  std::string mode;
  double mean_cer = 0.0;      // fraction
  std::optional<double> gain;  // percent, raw; absent for the default mode
};

struct ExperimentReport {
  std::vector<CellResult> cells;
  std::vector<SummaryRow> summary;

  const SummaryRow* find(std::string_view corpus, std::size_t budget,
                         std::string_view mode) const;
  std::string experiment_csv() const;
  std::string summary_csv() const;
};

// Lines held out for the test set inside a budget: round(budget * 2 / 15).
std::size_t test_lines_for_budget(std::size_t budget);

struct CorpusSplit {
  std::vector<std::size_t> eval;  // half of the corpus, rounded down
  std::vector<std::size_t> pool;  // the rest, source of every fold's lines
};
CorpusSplit split_corpus(std::size_t n_lines, std::uint64_t seed);

struct BudgetDraw {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
// The fold's permutation of the pool is fixed by `fold_seed`, so smaller
// budgets draw a prefix of larger ones.
BudgetDraw draw_budget(std::span<const std::size_t> pool, std::size_t budget,
                       std::uint64_t fold_seed);

std::uint64_t stable_hash(std::string_view text);

// Trains and scores one cell; returns the evaluation CER as a fraction.
using CellRunner = std::function<double(
    const CellSpec& cell, const InitMode& mode, std::span<const Sample> train,
    std::span<const Sample> test, std::span<const Sample> eval,
    std::uint64_t cell_seed, const std::filesystem::path& cell_dir)>;

// Real runner: train, pick the best checkpoint on the test lines, evaluate.
CellRunner training_cell_runner(const TrainingConfig& base);

// Deterministic stand-in returning base_cer[mode] (in percent) scaled by a
// factor in [1, 1.1) derived from the drawn training lines.
CellRunner stub_cell_runner(std::map<std::string, double> base_cer_percent);

// Every (corpus, budget, mode, fold) cell, then means and gains. Modes share
// each fold's line draw and training seed.
ExperimentReport run_experiment(std::span<const Corpus> corpora,
                                std::span<const InitMode> modes,
                                const ExperimentConfig& config,
                                const CellRunner& runner);

// Means over folds and gains versus config.default_mode, plus AVG rows.
std::vector<SummaryRow> summarize(std::span<const CellResult> cells,
                                  std::span<const std::string> corpus_order,
                                  std::span<const std::size_t> budgets,
                                  std::span<const InitMode> modes,
                                  std::string_view default_mode);

}  // namespace ocrtl

namespace ocrtl {

// Experiment described by a JSON document:
//   {"master_seed": 1, "folds": 5, "budgets": [60, 150], "jobs": 1,
//    "input_height": 48, "hidden_size": 100,
//    "training": {"iterations": .., "learning_rate": .., "momentum": ..,
//                 "checkpoint_every": .., "grad_clip": ..},
//    "corpora": [{"id": "B", "dir": "data/B"}],
//    "modes": [{"name": "default"},
//              {"name": "A+WL", "pretrained": "a.ocrm", "whitelist": "default"}],
//    "runner": "train" | "stub", "stub_cer": {"default": 8.0, "A+WL": 5.0}}
// Relative paths resolve against `base_dir`.
struct ExperimentPlan {
  std::vector<Corpus> corpora;
  std::vector<InitMode> modes;
  ExperimentConfig config;
  CellRunner runner;
};

ExperimentPlan load_experiment_plan(std::string_view config_json,
                                    const std::filesystem::path& base_dir,
                                    const std::filesystem::path& out_dir);

// Runs the plan and writes experiment.csv and summary.csv into out_dir.
ExperimentReport run_experiment_plan(const ExperimentPlan& plan,
                                     const std::filesystem::path& out_dir);

}  // namespace ocrtl
