///////////////////////////////////////////////////////////////////////
// File:        ocrtl_cli.cpp
// Description: The ocrtl command-line tool.
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

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ocrtl/ocrtl.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Carries a library failure out to main() with its status.
struct Failure {
  ocrtl_status status;
  std::string message;
};

void check(ocrtl_status status, const std::string& context) {
  if (status == OCRTL_OK) return;
  throw Failure{status, context + ": " + ocrtl_last_error()};
}

struct CString {
  char* ptr = nullptr;
  ~CString() { ocrtl_string_free(ptr); }
  char** out() { return &ptr; }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct ModelHandle {
  ocrtl_model* ptr = nullptr;
  ~ModelHandle() { ocrtl_model_free(ptr); }
};

struct CodecHandle {
  ocrtl_codec* ptr = nullptr;
  ~CodecHandle() { ocrtl_codec_free(ptr); }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{OCRTL_ERR_IO, "cannot read " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{OCRTL_ERR_IO, "cannot write " + path.string()};
  out << text;
}

std::string option_key(const CLI::Option* opt) {
  std::string name = opt->get_single_name();
  for (char& c : name) {
    if (c == '-') c = '_';
  }
  return name;
}

// Fills options not given on the command line from a JSON object.
void merge_config(CLI::App* sub, const fs::path& path) {
  const json cfg = json::parse(read_file(path));
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "config must be a JSON object");
  std::map<std::string, CLI::Option*> by_key;
  for (CLI::Option* opt : sub->get_options()) by_key[option_key(opt)] = opt;
  for (const auto& [key, value] : cfg.items()) {
    auto it = by_key.find(key);
    if (it == by_key.end() || key == "config" || key == "help") {
      throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    }
    CLI::Option* opt = it->second;
    if (opt->count() > 0) continue;
    std::vector<std::string> values;
    auto as_text = [](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (value.is_array()) {
      for (const auto& v : value) values.push_back(as_text(v));
    } else {
      values.push_back(as_text(value));
    }
    for (const auto& v : values) opt->add_result(v);
    opt->run_callback();
  }
}

// Every resolved option of `sub`, as it would appear in a config file.
json resolved_config(CLI::App* sub) {
  json out = json::object();
  for (CLI::Option* opt : sub->get_options()) {
    const std::string key = option_key(opt);
    if (key == "help" || key == "config") continue;
    const auto results = opt->reduced_results();
    if (results.empty()) {
      const std::string def = opt->get_default_str();
      if (!def.empty()) out[key] = def;
      continue;
    }
    if (opt->get_expected_max() > 1 || results.size() > 1) {
      out[key] = results;
    } else {
      out[key] = results.front();
    }
  }
  return out;
}

void record_config(CLI::App* sub, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "config.json", resolved_config(sub).dump(2) + "\n");
}

struct SynthArgs {
  std::string font = "A";
  std::size_t lines = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
  int height = 32;
  int x_scale = 1;
  std::size_t line_length = 16;
  std::size_t min_word = 2;
  std::size_t max_word = 7;
  double spacing = 1.0;
  double noise = 0.0;
  int blur = 0;
  int jitter = 0;
};

struct TrainArgs {
  std::string train;
  std::string test;
  std::string out;
  std::string model;
  std::string whitelist = "default";
  bool force_whitelist = false;
  std::size_t iterations = 10000;
  double lr = 1e-4;
  double momentum = 0.9;
  std::size_t checkpoint_every = 1000;
  std::uint64_t seed = 0;
  int height = 48;
  int hidden = 100;
  double grad_clip = 10.0;
};

int run_synth(const SynthArgs& a) {
  if (!a.manifest.empty()) {
    check(ocrtl_synth_regenerate(a.manifest.c_str(), a.out.c_str()), "synth");
    return kExitOk;
  }
  ocrtl_synth_options o;
  ocrtl_synth_options_init(&o);
  o.font = a.font.c_str();
  o.height = a.height;
  o.x_scale = a.x_scale;
  o.n_lines = a.lines;
  o.line_length = a.line_length;
  o.min_word = a.min_word;
  o.max_word = a.max_word;
  o.spacing_scale = a.spacing;
  o.noise_std = a.noise;
  o.blur_radius = a.blur;
  o.jitter = a.jitter;
  o.seed = a.seed;
  check(ocrtl_synth_corpus(&o, a.out.c_str()), "synth");
  return kExitOk;
}

int run_train(const TrainArgs& a, bool finetune) {
  ocrtl_train_options o;
  ocrtl_train_options_init(&o);
  o.train_dir = a.train.c_str();
  o.test_dir = a.test.empty() ? nullptr : a.test.c_str();
  o.output_dir = a.out.c_str();
  o.pretrained = finetune ? a.model.c_str() : nullptr;
  o.whitelist = a.whitelist.c_str();
  o.force_whitelist = a.force_whitelist ? 1 : 0;
  o.iterations = a.iterations;
  o.learning_rate = a.lr;
  o.momentum = a.momentum;
  o.checkpoint_every = a.checkpoint_every;
  o.seed = a.seed;
  o.input_height = a.height;
  o.hidden_size = a.hidden;
  o.grad_clip = a.grad_clip;
  CString result;
  check(ocrtl_train(&o, result.out()), finetune ? "finetune" : "train");
  const json r = json::parse(result.str());
  std::cout << "best " << r["best"]["path"].get<std::string>() << " iteration "
            << r["best"]["iteration"].get<std::size_t>() << " test_cer "
            << r["best"]["test_cer"].get<double>() << "\n";
  return kExitOk;
}

int run_predict(const std::string& model_path, const std::vector<std::string>& images) {
  ModelHandle model;
  check(ocrtl_model_load(model_path.c_str(), &model.ptr), model_path);
  for (const auto& image : images) {
    CString text;
    check(ocrtl_model_recognize_file(model.ptr, image.c_str(), text.out()), image);
    std::cout << image << "\t" << text.str() << "\n";
  }
  return kExitOk;
}

void print_report(const json& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", 100.0 * r["cer"].get<double>());
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"CER (%)", buf},
      {"lines", std::to_string(r["n_lines"].get<std::size_t>())},
      {"reference chars", std::to_string(r["n_ref_chars"].get<std::size_t>())},
      {"insertions", std::to_string(r["insertions"].get<std::size_t>())},
      {"deletions", std::to_string(r["deletions"].get<std::size_t>())},
      {"substitutions", std::to_string(r["substitutions"].get<std::size_t>())},
      {"merged words", std::to_string(r["merged_words"].get<std::size_t>())},
      {"split words", std::to_string(r["split_words"].get<std::size_t>())},
  };
  for (const auto& [k, v] : rows) std::printf("%-18s %12s\n", k.c_str(), v.c_str());
  if (!r["top_confusions"].empty()) {
    std::printf("\n%-8s %-8s %8s\n", "ref", "hyp", "count");
    auto shown = [](const json& c) {
      return c.is_null() ? std::string("-") : "'" + c.get<std::string>() + "'";
    };
    for (const auto& c : r["top_confusions"]) {
      std::printf("%-8s %-8s %8zu\n", shown(c["ref"]).c_str(), shown(c["hyp"]).c_str(),
                  c["count"].get<std::size_t>());
    }
  }
}

int run_eval(const std::string& model_path, const std::string& data, const std::string& json_out) {
  ModelHandle model;
  check(ocrtl_model_load(model_path.c_str(), &model.ptr), model_path);
  CString report;
  check(ocrtl_evaluate(model.ptr, data.c_str(), report.out()), "eval");
  print_report(json::parse(report.str()));
  if (!json_out.empty()) write_file(json_out, report.str() + "\n");
  return kExitOk;
}

int run_codec_inspect(const std::string& model_path) {
  ModelHandle model;
  check(ocrtl_model_load(model_path.c_str(), &model.ptr), model_path);
  CodecHandle codec;
  check(ocrtl_codec_from_model(model.ptr, &codec.ptr), "codec");
  CString listing;
  check(ocrtl_codec_inspect(codec.ptr, listing.out()), "codec");
  std::cout << listing.str();
  return kExitOk;
}

int run_codec_diff(const std::string& from, const std::string& to) {
  ModelHandle a, b;
  check(ocrtl_model_load(from.c_str(), &a.ptr), from);
  check(ocrtl_model_load(to.c_str(), &b.ptr), to);
  CodecHandle ca, cb;
  check(ocrtl_codec_from_model(a.ptr, &ca.ptr), "codec");
  check(ocrtl_codec_from_model(b.ptr, &cb.ptr), "codec");
  CString delta;
  check(ocrtl_codec_diff(ca.ptr, cb.ptr, delta.out()), "codec diff");
  std::cout << delta.str() << "\n";
  return kExitOk;
}

int run_codec_resize(const std::string& model_path, const std::string& add,
                     const std::string& keep, bool has_keep, std::uint64_t seed,
                     const std::string& out) {
  ModelHandle model;
  check(ocrtl_model_load(model_path.c_str(), &model.ptr), model_path);
  CString delta;
  check(ocrtl_model_resize_codec(model.ptr, add.empty() ? nullptr : add.c_str(),
                                 has_keep ? keep.c_str() : nullptr, seed, delta.out()),
        "codec resize");
  check(ocrtl_model_save(model.ptr, out.c_str()), out);
  std::cout << delta.str() << "\n";
  return kExitOk;
}

int run_rank(const std::vector<std::string>& models, const std::string& data,
             std::size_t max_lines) {
  std::vector<const char*> paths;
  for (const auto& m : models) paths.push_back(m.c_str());
  CString ranking;
  check(ocrtl_rank_models(paths.data(), paths.size(), data.c_str(), max_lines, ranking.out()),
        "rank-models");
  std::size_t rank = 1;
  for (const auto& r : json::parse(ranking.str())) {
    std::printf("%zu\t%.4f\t%s\n", rank++, 100.0 * r["cer"].get<double>(),
                r["path"].get<std::string>().c_str());
  }
  return kExitOk;
}

int run_experiment(const std::string& config, const std::string& out, int jobs) {
  const std::string text = read_file(config);
  const std::string base = fs::absolute(config).parent_path().string();
  fs::create_directories(out);
  json resolved = json::parse(text);
  if (jobs > 0) resolved["jobs"] = jobs;
  write_file(fs::path(out) / "config.json", resolved.dump(2) + "\n");
  CString summary;
  check(ocrtl_experiment_run(text.c_str(), base.c_str(), out.c_str(), jobs, summary.out()),
        "experiment");
  std::cout << summary.str();
  return kExitOk;
}

int run_model_info(const std::string& path) {
  CString header;
  check(ocrtl_model_info(path.c_str(), header.out()), path);
  std::cout << header.str() << "\n";
  return kExitOk;
}

void add_train_options(CLI::App* sub, TrainArgs& a) {
  sub->add_option("--train", a.train, "training dataset directory")->required();
  sub->add_option("--test", a.test, "test dataset directory (default: hold out lines)");
  sub->add_option("--out", a.out, "output directory")->required();
  sub->add_option("--whitelist", a.whitelist, "default | none | file:<path> | literal chars")
      ->capture_default_str();
  sub->add_option("--iterations", a.iterations)->capture_default_str();
  sub->add_option("--lr", a.lr, "learning rate")->capture_default_str();
  sub->add_option("--momentum", a.momentum)->capture_default_str();
  sub->add_option("--checkpoint-every", a.checkpoint_every)->capture_default_str();
  sub->add_option("--seed", a.seed)->capture_default_str();
  sub->add_option("--hidden", a.hidden, "LSTM units over both directions")
      ->capture_default_str();
  sub->add_option("--grad-clip", a.grad_clip)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ocrtl: line recognizer training and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ocrtl_version()));

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with option defaults")
        ->check(CLI::ExistingFile);
  };

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic line corpus");
  synth_cmd->add_option("--font", synth.font, "A or B")->capture_default_str();
  synth_cmd->add_option("--lines", synth.lines)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_option("--from-manifest", synth.manifest, "regenerate from a manifest.json");
  synth_cmd->add_option("--height", synth.height)->capture_default_str();
  synth_cmd->add_option("--x-scale", synth.x_scale)->capture_default_str();
  synth_cmd->add_option("--line-length", synth.line_length)->capture_default_str();
  synth_cmd->add_option("--min-word", synth.min_word)->capture_default_str();
  synth_cmd->add_option("--max-word", synth.max_word)->capture_default_str();
  synth_cmd->add_option("--spacing", synth.spacing)->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "pixel noise std")->capture_default_str();
  synth_cmd->add_option("--blur", synth.blur, "box blur radius")->capture_default_str();
  synth_cmd->add_option("--jitter", synth.jitter, "max vertical shift")->capture_default_str();
  add_config(synth_cmd);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "train a recognizer from scratch");
  add_train_options(train_cmd, train);
  train_cmd->add_option("--height", train.height, "input line height")->capture_default_str();
  add_config(train_cmd);

  TrainArgs tune;
  auto* tune_cmd = app.add_subcommand("finetune", "adapt a pretrained model");
  add_train_options(tune_cmd, tune);
  tune_cmd->add_option("--model", tune.model, "pretrained .ocrm")->required();
  tune_cmd->add_flag("--force-whitelist", tune.force_whitelist,
                     "add whitelist characters missing from the model");
  add_config(tune_cmd);

  std::string model_path, data_dir, json_out;
  std::vector<std::string> images;
  auto* predict_cmd = app.add_subcommand("predict", "recognize line images");
  predict_cmd->add_option("--model", model_path)->required();
  predict_cmd->add_option("images", images)->required();

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset");
  eval_cmd->add_option("--model", model_path)->required();
  eval_cmd->add_option("--data", data_dir)->required();
  eval_cmd->add_option("--json", json_out, "also write the report as JSON");

  auto* codec_cmd = app.add_subcommand("codec", "inspect or edit model codecs");
  codec_cmd->require_subcommand(1);
  auto* inspect_cmd = codec_cmd->add_subcommand("inspect", "list symbols");
  inspect_cmd->add_option("--model", model_path)->required();
  std::string diff_from, diff_to;
  auto* diff_cmd = codec_cmd->add_subcommand("diff", "compare two model codecs");
  diff_cmd->add_option("--from", diff_from)->required();
  diff_cmd->add_option("--to", diff_to)->required();
  std::string add_chars, keep_chars, resize_out;
  std::uint64_t resize_seed = 0;
  auto* resize_cmd = codec_cmd->add_subcommand("resize", "add or drop output symbols");
  resize_cmd->add_option("--model", model_path)->required();
  resize_cmd->add_option("--add", add_chars, "characters to add");
  auto* keep_opt = resize_cmd->add_option("--keep", keep_chars, "characters to keep");
  resize_cmd->add_option("--seed", resize_seed)->capture_default_str();
  resize_cmd->add_option("--out", resize_out)->required();

  std::vector<std::string> rank_models;
  std::size_t max_lines = 50;
  auto* rank_cmd = app.add_subcommand("rank-models", "order candidate models by raw CER");
  rank_cmd->add_option("--data", data_dir)->required();
  rank_cmd->add_option("--max-lines", max_lines, "0 = all lines")->capture_default_str();
  rank_cmd->add_option("models", rank_models)->required();

  std::string exp_config, exp_out = "experiment-out";
  int jobs = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "run a fine-tuning experiment");
  exp_cmd->add_option("--config", exp_config)->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("--out", exp_out)->capture_default_str();
  exp_cmd->add_option("--jobs", jobs, "parallel cells (0 = from config)")->capture_default_str();

  auto* model_cmd = app.add_subcommand("model", "model file utilities");
  model_cmd->require_subcommand(1);
  std::string info_path;
  auto* info_cmd = model_cmd->add_subcommand("info", "print the model header");
  info_cmd->add_option("path", info_path)->required();

  try {
    app.parse(argc, argv);
    for (CLI::App* sub : {synth_cmd, train_cmd, tune_cmd}) {
      if (sub->parsed() && !config_path.empty()) merge_config(sub, config_path);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      record_config(synth_cmd, synth.out);
      return run_synth(synth);
    }
    if (train_cmd->parsed()) {
      record_config(train_cmd, train.out);
      return run_train(train, false);
    }
    if (tune_cmd->parsed()) {
      record_config(tune_cmd, tune.out);
      return run_train(tune, true);
    }
    if (predict_cmd->parsed()) return run_predict(model_path, images);
    if (eval_cmd->parsed()) return run_eval(model_path, data_dir, json_out);
    if (inspect_cmd->parsed()) return run_codec_inspect(model_path);
    if (diff_cmd->parsed()) return run_codec_diff(diff_from, diff_to);
    if (resize_cmd->parsed()) {
      return run_codec_resize(model_path, add_chars, keep_chars, keep_opt->count() > 0,
                              resize_seed, resize_out);
    }
    if (rank_cmd->parsed()) return run_rank(rank_models, data_dir, max_lines);
    if (exp_cmd->parsed()) return run_experiment(exp_config, exp_out, jobs);
    if (info_cmd->parsed()) return run_model_info(info_path);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.status == OCRTL_ERR_INVALID_ARGUMENT ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
