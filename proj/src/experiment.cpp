///////////////////////////////////////////////////////////////////////
// File:        experiment.cpp
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

#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "error.hpp"
#include "modelstore.hpp"
#include "seeds.hpp"

namespace ocrtl {

namespace {

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[rng() % i]);
  }
  return idx;
}

std::vector<Sample> gather(const std::vector<Sample>& lines,
                           std::span<const std::size_t> idx) {
  std::vector<Sample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(lines[i]);
  return out;
}

std::string percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", 100.0 * fraction);
  return buf;
}

}  // namespace

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::size_t test_lines_for_budget(std::size_t budget) {
  return static_cast<std::size_t>(std::lround(static_cast<double>(budget) * 2.0 / 15.0));
}

CorpusSplit split_corpus(std::size_t n_lines, std::uint64_t seed) {
  const auto perm = permutation(n_lines, seed);
  CorpusSplit split;
  const std::size_t n_eval = n_lines / 2;
  split.eval.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_eval));
  split.pool.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_eval), perm.end());
  std::sort(split.eval.begin(), split.eval.end());
  std::sort(split.pool.begin(), split.pool.end());
  return split;
}

BudgetDraw draw_budget(std::span<const std::size_t> pool, std::size_t budget,
                       std::uint64_t fold_seed) {
  if (budget > pool.size()) {
    throw invalid_argument("insufficient GT: budget of " + std::to_string(budget) +
                           " lines but only " + std::to_string(pool.size()) +
                           " lines outside the evaluation half");
  }
  const std::size_t n_test = test_lines_for_budget(budget);
  if (n_test == 0 || n_test >= budget) {
    throw invalid_argument("budget of " + std::to_string(budget) +
                           " lines is too small to hold out a test set");
  }
  const auto perm = permutation(pool.size(), fold_seed);
  BudgetDraw draw;
  for (std::size_t i = 0; i < budget; ++i) {
    (i < budget - n_test ? draw.train : draw.test).push_back(pool[perm[i]]);
  }
  return draw;
}

CellRunner training_cell_runner(const TrainingConfig& base) {
  return [base](const CellSpec&, const InitMode& mode,
                std::span<const Sample> train_set, std::span<const Sample> test_set,
                std::span<const Sample> eval_set, std::uint64_t cell_seed,
                const std::filesystem::path& cell_dir) {
    TrainingConfig cfg = base;
    cfg.seed = cell_seed;
    cfg.pretrained = mode.pretrained;
    cfg.whitelist = mode.whitelist;
    cfg.force_whitelist = mode.force_whitelist;
    cfg.output_dir = cell_dir;
    const CheckpointSeries series = train(train_set, test_set, cfg);
    const auto best = std::make_shared<const Network>(
        load_model(select_best_checkpoint(series).path));
    return evaluate_model(NetworkRecognizer(best), eval_set).cer;
  };
}

CellRunner stub_cell_runner(std::map<std::string, double> base_cer_percent) {
  return [base = std::move(base_cer_percent)](
             const CellSpec& cell, const InitMode& mode,
             std::span<const Sample> train_set, std::span<const Sample>,
             std::span<const Sample>, std::uint64_t, const std::filesystem::path&) {
    auto it = base.find(mode.name);
    if (it == base.end()) {
      throw invalid_argument("stub runner has no CER for mode " + mode.name);
    }
    std::string ids = cell.corpus;
    for (const auto& s : train_set) ids += "|" + s.id;
    const double wobble = static_cast<double>(stable_hash(ids) % 1000) / 10000.0;
    return it->second / 100.0 * (1.0 + wobble);
  };
}

std::vector<SummaryRow> summarize(std::span<const CellResult> cells,
                                  std::span<const std::string> corpus_order,
                                  std::span<const std::size_t> budgets,
                                  std::span<const InitMode> modes,
                                  std::string_view default_mode) {
  std::vector<std::string> corpora(corpus_order.begin(), corpus_order.end());
  std::sort(corpora.begin(), corpora.end());
  std::vector<std::size_t> sorted_budgets(budgets.begin(), budgets.end());
  std::sort(sorted_budgets.begin(), sorted_budgets.end());

  auto mean_of = [&](const std::string& corpus, std::size_t budget,
                     const std::string& mode) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& c : cells) {
      if (c.cell.corpus == corpus && c.cell.budget == budget && c.cell.mode == mode) {
        sum += c.eval_cer;
        ++n;
      }
    }
    if (n == 0) throw invalid_argument("no results for " + corpus + "/" + mode);
    return sum / static_cast<double>(n);
  };

  std::vector<SummaryRow> rows;
  for (const auto& corpus : corpora) {
    for (std::size_t budget : sorted_budgets) {
      const double base = mean_of(corpus, budget, std::string(default_mode));
      for (const auto& mode : modes) {
        SummaryRow row{corpus, budget, mode.name, mean_of(corpus, budget, mode.name), {}};
        if (mode.name != default_mode && base > 0) row.gain = gain(base, row.mean_cer);
        rows.push_back(std::move(row));
      }
    }
  }
  // AVG: mean of per-corpus means, and mean of per-corpus gains.
  for (std::size_t budget : sorted_budgets) {
    for (const auto& mode : modes) {
      double cer_sum = 0, gain_sum = 0;
      std::size_t n = 0, n_gain = 0;
      for (const auto& r : rows) {
        if (r.budget != budget || r.mode != mode.name) continue;
        cer_sum += r.mean_cer;
        ++n;
        if (r.gain) {
          gain_sum += *r.gain;
          ++n_gain;
        }
      }
      SummaryRow avg{"AVG", budget, mode.name, cer_sum / static_cast<double>(n), {}};
      if (n_gain > 0) avg.gain = gain_sum / static_cast<double>(n_gain);
      rows.push_back(std::move(avg));
    }
  }
  return rows;
}

ExperimentReport run_experiment(std::span<const Corpus> corpora,
                                std::span<const InitMode> modes,
                                const ExperimentConfig& config,
                                const CellRunner& runner) {
  if (corpora.empty() || modes.empty() || config.budgets.empty() || config.folds == 0) {
    throw invalid_argument("experiment needs corpora, modes, budgets and folds");
  }
  if (std::none_of(modes.begin(), modes.end(),
                   [&](const InitMode& m) { return m.name == config.default_mode; })) {
    throw invalid_argument("no init mode named '" + config.default_mode +
                           "' to compute gains against");
  }

  struct Job {
    CellSpec cell;
    const Corpus* corpus;
    const InitMode* mode;
    std::vector<std::size_t> train, test;
    const std::vector<std::size_t>* eval;
    std::uint64_t seed;
  };
  std::vector<CorpusSplit> splits;
  splits.reserve(corpora.size());
  std::vector<Job> jobs;
  const std::size_t max_budget =
      *std::max_element(config.budgets.begin(), config.budgets.end());
  for (const auto& corpus : corpora) {
    const std::uint64_t corpus_key = stable_hash(corpus.id);
    splits.push_back(
        split_corpus(corpus.lines.size(), derive_seed(config.master_seed, {corpus_key, 0xE7A1})));
    const CorpusSplit& split = splits.back();
    if (split.pool.size() < max_budget || split.eval.empty()) {
      throw invalid_argument("insufficient GT in corpus " + corpus.id + ": " +
                             std::to_string(corpus.lines.size()) +
                             " lines cannot cover a " + std::to_string(max_budget) +
                             "-line budget plus the evaluation half");
    }
    for (std::size_t budget : config.budgets) {
      for (std::size_t fold = 1; fold <= config.folds; ++fold) {
        const BudgetDraw draw = draw_budget(
            split.pool, budget, derive_seed(config.master_seed, {corpus_key, fold, 0xF01D}));
        const std::uint64_t seed =
            derive_seed(config.master_seed, {corpus_key, budget, fold, 0xCE11});
        for (const auto& mode : modes) {
          jobs.push_back({{corpus.id, budget, mode.name, fold}, &corpus, &mode,
                          draw.train, draw.test, &split.eval, seed});
        }
      }
    }
  }

  std::vector<CellResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      const Job& job = jobs[i];
      try {
        const auto train_set = gather(job.corpus->lines, job.train);
        const auto test_set = gather(job.corpus->lines, job.test);
        const auto eval_set = gather(job.corpus->lines, *job.eval);
        const auto dir = config.work_dir / job.cell.corpus /
                         ("b" + std::to_string(job.cell.budget)) / job.cell.mode /
                         ("fold" + std::to_string(job.cell.fold));
        results[i] = {job.cell, runner(job.cell, *job.mode, train_set, test_set,
                                       eval_set, job.seed, dir)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(config.jobs, 1, jobs.size());
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  auto mode_rank = [&](const std::string& name) {
    return std::find_if(modes.begin(), modes.end(),
                        [&](const InitMode& m) { return m.name == name; }) -
           modes.begin();
  };
  std::stable_sort(results.begin(), results.end(), [&](const CellResult& a, const CellResult& b) {
    if (a.cell.corpus != b.cell.corpus) return a.cell.corpus < b.cell.corpus;
    if (a.cell.budget != b.cell.budget) return a.cell.budget < b.cell.budget;
    if (a.cell.mode != b.cell.mode) return mode_rank(a.cell.mode) < mode_rank(b.cell.mode);
    return a.cell.fold < b.cell.fold;
  });
  std::vector<std::string> ids;
  for (const auto& c : corpora) ids.push_back(c.id);
  ExperimentReport report;
  report.summary = summarize(results, ids, config.budgets, modes, config.default_mode);
  report.cells = std::move(results);
  return report;
}

const SummaryRow* ExperimentReport::find(std::string_view corpus, std::size_t budget,
                                         std::string_view mode) const {
  for (const auto& r : summary) {
    if (r.corpus == corpus && r.budget == budget && r.mode == mode) return &r;
  }
  return nullptr;
}

std::string ExperimentReport::experiment_csv() const {
  std::string csv = "corpus,budget,mode,fold,eval_cer\n";
  for (const auto& c : cells) {
    csv += c.cell.corpus + "," + std::to_string(c.cell.budget) + "," + c.cell.mode +
           "," + std::to_string(c.cell.fold) + "," + percent(c.eval_cer) + "\n";
  }
  return csv;
}

std::string ExperimentReport::summary_csv() const {
  std::string csv = "corpus,budget,mode,mean_cer,gain_vs_default\n";
  for (const auto& r : summary) {
    csv += r.corpus + "," + std::to_string(r.budget) + "," + r.mode + "," +
           percent(r.mean_cer) + ",";
    if (r.gain) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4f", *r.gain);
      csv += buf;
    }
    csv += "\n";
  }
  return csv;
}

}  // namespace ocrtl
