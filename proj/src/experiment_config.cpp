///////////////////////////////////////////////////////////////////////
// File:        experiment_config.cpp
// Description: JSON experiment plans.
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

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "experiment.hpp"

namespace ocrtl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ExperimentPlan load_experiment_plan(std::string_view config_json,
                                    const fs::path& base_dir,
                                    const fs::path& out_dir) {
  ExperimentPlan plan;
  json j;
  try {
    j = json::parse(config_json);
  } catch (const json::exception& e) {
    throw invalid_argument(std::string("experiment config is not valid JSON: ") + e.what());
  }
  try {
    auto& cfg = plan.config;
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.folds = j.value("folds", std::size_t{5});
    cfg.budgets = j.at("budgets").get<std::vector<std::size_t>>();
    cfg.jobs = j.value("jobs", std::size_t{1});
    cfg.default_mode = j.value("default_mode", std::string("default"));
    cfg.work_dir = out_dir / "cells";
    auto& t = cfg.training;
    t.input_height = j.value("input_height", kDefaultInputHeight);
    t.hidden_size = j.value("hidden_size", kDefaultHiddenSize);
    const json training = j.value("training", json::object());
    t.iterations = training.value("iterations", t.iterations);
    t.learning_rate = training.value("learning_rate", t.learning_rate);
    t.momentum = training.value("momentum", t.momentum);
    t.checkpoint_every = training.value("checkpoint_every", t.checkpoint_every);
    t.grad_clip = training.value("grad_clip", t.grad_clip);

    for (const auto& m : j.at("modes")) {
      InitMode mode;
      mode.name = m.at("name").get<std::string>();
      if (m.contains("pretrained")) {
        mode.pretrained = resolve(base_dir, m.at("pretrained").get<std::string>());
      }
      mode.whitelist = parse_whitelist_spec(m.value("whitelist", std::string("none")));
      mode.force_whitelist = m.value("force_whitelist", false);
      plan.modes.push_back(std::move(mode));
    }

    const std::string runner = j.value("runner", std::string("train"));
    if (runner == "stub") {
      plan.runner = stub_cell_runner(j.at("stub_cer").get<std::map<std::string, double>>());
    } else if (runner == "train") {
      t.output_dir = cfg.work_dir;
      t.validate();
      plan.runner = training_cell_runner(t);
    } else {
      throw invalid_argument("unknown runner '" + runner + "' (expected train or stub)");
    }

    for (const auto& c : j.at("corpora")) {
      Corpus corpus;
      corpus.id = c.at("id").get<std::string>();
      corpus.lines = load_dataset(resolve(base_dir, c.at("dir").get<std::string>()),
                                  t.input_height);
      plan.corpora.push_back(std::move(corpus));
    }
  } catch (const json::exception& e) {
    throw invalid_argument(std::string("bad experiment config: ") + e.what());
  }
  return plan;
}

ExperimentReport run_experiment_plan(const ExperimentPlan& plan, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + out_dir.string());
  ExperimentReport report =
      run_experiment(plan.corpora, plan.modes, plan.config, plan.runner);
  write_text_file(out_dir / "experiment.csv", report.experiment_csv());
  write_text_file(out_dir / "summary.csv", report.summary_csv());
  return report;
}

}  // namespace ocrtl
