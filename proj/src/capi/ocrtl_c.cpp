///////////////////////////////////////////////////////////////////////
// File:        ocrtl_c.cpp
// Description: C API implementation over the C++ core.
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

#include "ocrtl/ocrtl.h"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <numeric>
#include <string>

#include "codec.hpp"
#include "ctc.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "evalkit.hpp"
#include "experiment.hpp"
#include "image_io.hpp"
#include "linenet.hpp"
#include "modelstore.hpp"
#include "seeds.hpp"
#include "synthgen.hpp"
#include "trainer.hpp"
#include "unicode.hpp"

struct ocrtl_codec {
  ocrtl::Codec codec;
};

struct ocrtl_model {
  ocrtl::Network net;
};

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

thread_local std::string g_last_error;

ocrtl_status status_for(ocrtl::ErrorKind kind) {
  switch (kind) {
    case ocrtl::ErrorKind::kInvalidArgument:
      return OCRTL_ERR_INVALID_ARGUMENT;
    case ocrtl::ErrorKind::kBlindSpot:
      return OCRTL_ERR_BLIND_SPOT;
    case ocrtl::ErrorKind::kInfeasibleTarget:
      return OCRTL_ERR_INFEASIBLE_TARGET;
    case ocrtl::ErrorKind::kIo:
      return OCRTL_ERR_IO;
    case ocrtl::ErrorKind::kFormat:
      return OCRTL_ERR_FORMAT;
  }
  return OCRTL_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status plus last-error text.
template <class F>
ocrtl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return OCRTL_OK;
  } catch (const ocrtl::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return OCRTL_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw ocrtl::invalid_argument(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::vector<std::u32string> decode_texts(const char* const* texts, std::size_t n) {
  require(n == 0 || texts != nullptr, "texts must not be NULL");
  std::vector<std::u32string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(texts[i] != nullptr, "text entry must not be NULL");
    out.push_back(ocrtl::nfc_from_utf8(texts[i]));
  }
  return out;
}

ocrtl::CharSet charset_of(const char* utf8) {
  ocrtl::CharSet s;
  if (!utf8) return s;
  for (char32_t c : ocrtl::nfc_from_utf8(utf8)) s.insert(c);
  return s;
}

json delta_to_json(const ocrtl::CodecDelta& delta) {
  auto entries = [](const auto& list) {
    json arr = json::array();
    for (const auto& [c, idx] : list) {
      arr.push_back({{"char", ocrtl::u32_to_utf8(c)},
                     {"code_point", static_cast<std::uint32_t>(c)},
                     {"index", idx}});
    }
    return arr;
  };
  json retained = json::array();
  for (const auto& [o, n] : delta.retained) retained.push_back({o, n});
  return {{"added", entries(delta.added)},
          {"removed", entries(delta.removed)},
          {"retained", retained}};
}

json report_to_json(const ocrtl::EvalReport& r) {
  json confusions = json::array();
  for (const auto& c : r.top_confusions) {
    confusions.push_back(
        {{"ref", c.ref ? json(ocrtl::u32_to_utf8(*c.ref)) : json(nullptr)},
         {"hyp", c.hyp ? json(ocrtl::u32_to_utf8(*c.hyp)) : json(nullptr)},
         {"count", c.count}});
  }
  return {{"cer", r.cer},
          {"insertions", r.char_counts.insertions},
          {"deletions", r.char_counts.deletions},
          {"substitutions", r.char_counts.substitutions},
          {"merged_words", r.word_counts.merged_words},
          {"split_words", r.word_counts.split_words},
          {"n_lines", r.n_lines},
          {"n_ref_chars", r.n_ref_chars},
          {"top_confusions", confusions}};
}

}  // namespace

extern "C" {

const char* ocrtl_version(void) { return "0.1.0"; }

const char* ocrtl_last_error(void) { return g_last_error.c_str(); }

void ocrtl_string_free(char* s) { std::free(s); }

ocrtl_status ocrtl_whitelist_expand(const char* spec, char** chars) {
  return guarded([&] {
    require(spec && chars, "spec and output must not be NULL");
    std::u32string out;
    for (char32_t c : ocrtl::parse_whitelist_spec(spec)) out.push_back(c);
    *chars = dup_string(ocrtl::u32_to_utf8(out));
  });
}

ocrtl_status ocrtl_codec_build(const char* const* texts, size_t n_texts,
                               const char* whitelist_spec, ocrtl_codec** out) {
  return guarded([&] {
    require(out != nullptr, "output must not be NULL");
    const auto decoded = decode_texts(texts, n_texts);
    const auto wl = ocrtl::parse_whitelist_spec(whitelist_spec ? whitelist_spec : "none");
    *out = new ocrtl_codec{ocrtl::build_codec(decoded, wl)};
  });
}

ocrtl_status ocrtl_codec_from_model(const ocrtl_model* model, ocrtl_codec** out) {
  return guarded([&] {
    require(model && out, "model and output must not be NULL");
    *out = new ocrtl_codec{model->net.codec};
  });
}

void ocrtl_codec_free(ocrtl_codec* codec) { delete codec; }

size_t ocrtl_codec_size(const ocrtl_codec* codec) {
  return codec ? codec->codec.size() : 0;
}

ocrtl_status ocrtl_codec_symbol(const ocrtl_codec* codec, size_t index,
                                uint32_t* code_point) {
  return guarded([&] {
    require(codec && code_point, "codec and output must not be NULL");
    *code_point = static_cast<uint32_t>(codec->codec.symbol(static_cast<ocrtl::Label>(index)));
  });
}

int ocrtl_codec_contains(const ocrtl_codec* codec, uint32_t code_point) {
  return codec && codec->codec.contains(static_cast<char32_t>(code_point)) ? 1 : 0;
}

int ocrtl_codec_is_immune(const ocrtl_codec* codec, uint32_t code_point) {
  return codec && codec->codec.is_immune(static_cast<char32_t>(code_point)) ? 1 : 0;
}

ocrtl_status ocrtl_codec_encode(const ocrtl_codec* codec, const char* text,
                                int32_t* labels, size_t capacity, size_t* n_labels) {
  return guarded([&] {
    require(codec && text && n_labels, "codec, text and count must not be NULL");
    const auto encoded = codec->codec.encode(ocrtl::nfc_from_utf8(text));
    *n_labels = encoded.size();
    require(labels != nullptr || capacity == 0, "labels must not be NULL");
    std::copy_n(encoded.begin(), std::min(capacity, encoded.size()), labels);
  });
}

ocrtl_status ocrtl_codec_decode(const ocrtl_codec* codec, const int32_t* labels,
                                size_t n_labels, char** text) {
  return guarded([&] {
    require(codec && text && (labels || n_labels == 0), "arguments must not be NULL");
    const std::vector<ocrtl::Label> v(labels, labels + n_labels);
    *text = dup_string(ocrtl::u32_to_utf8(codec->codec.decode(v)));
  });
}

ocrtl_status ocrtl_codec_inspect(const ocrtl_codec* codec, char** listing) {
  return guarded([&] {
    require(codec && listing, "codec and output must not be NULL");
    std::string out;
    const auto& symbols = codec->codec.symbols();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      const char32_t c = symbols[i];
      char code[16];
      std::snprintf(code, sizeof code, "U+%04X", static_cast<unsigned>(c));
      std::string shown = c == ocrtl::kBlank ? "<blank>"
                          : c == ocrtl::kSpace ? "<space>"
                                               : ocrtl::u32_to_utf8(c);
      out += std::to_string(i) + "\t" + shown + "\t" + code;
      if (codec->codec.is_immune(c)) out += "\timmune";
      out += "\n";
    }
    *listing = dup_string(out);
  });
}

ocrtl_status ocrtl_codec_diff(const ocrtl_codec* from, const ocrtl_codec* to, char** out) {
  return guarded([&] {
    require(from && to && out, "arguments must not be NULL");
    *out = dup_string(delta_to_json(ocrtl::diff(from->codec, to->codec)).dump(2));
  });
}

ocrtl_status ocrtl_model_create(int input_height, int hidden_size,
                                const ocrtl_codec* codec, uint64_t seed,
                                ocrtl_model** out) {
  return guarded([&] {
    require(codec && out, "codec and output must not be NULL");
    *out = new ocrtl_model{ocrtl::init_network(input_height, hidden_size, codec->codec, seed)};
  });
}

ocrtl_status ocrtl_model_load(const char* path, ocrtl_model** out) {
  return guarded([&] {
    require(path && out, "path and output must not be NULL");
    *out = new ocrtl_model{ocrtl::load_model(path)};
  });
}

ocrtl_status ocrtl_model_save(const ocrtl_model* model, const char* path) {
  return guarded([&] {
    require(model && path, "model and path must not be NULL");
    ocrtl::save_model(model->net, path);
  });
}

void ocrtl_model_free(ocrtl_model* model) { delete model; }

ocrtl_status ocrtl_model_info(const char* path, char** header_json) {
  return guarded([&] {
    require(path && header_json, "path and output must not be NULL");
    // Full load first so corrupt files are reported, then the raw header.
    (void)ocrtl::load_model(path);
    *header_json = dup_string(ocrtl::read_model_header(path));
  });
}

int ocrtl_model_input_height(const ocrtl_model* model) {
  return model ? model->net.input_height : 0;
}

size_t ocrtl_model_output_size(const ocrtl_model* model) {
  return model ? model->net.codec.size() : 0;
}

ocrtl_status ocrtl_model_resize_codec(ocrtl_model* model, const char* add_chars,
                                      const char* keep_chars, uint64_t seed,
                                      char** delta_json) {
  return guarded([&] {
    require(model != nullptr, "model must not be NULL");
    ocrtl::Network net = model->net;
    const ocrtl::Codec before = net.codec;
    if (add_chars) {
      net = ocrtl::resize_output(net, ocrtl::extend(net.codec, charset_of(add_chars)).second, seed);
    }
    if (keep_chars) {
      ocrtl::CharSet keep = charset_of(keep_chars);
      const ocrtl::CharSet added = charset_of(add_chars);
      keep.insert(added.begin(), added.end());
      net = ocrtl::resize_output(net, ocrtl::reduce(net.codec, keep).second, seed);
    }
    if (delta_json) {
      *delta_json = dup_string(delta_to_json(ocrtl::diff(before, net.codec)).dump(2));
    }
    model->net = std::move(net);
  });
}

ocrtl_status ocrtl_model_reconcile(ocrtl_model* model, const char* const* gt_texts,
                                   size_t n_texts, const char* whitelist_spec,
                                   int force_whitelist, uint64_t seed) {
  return guarded([&] {
    require(model != nullptr, "model must not be NULL");
    const auto texts = decode_texts(gt_texts, n_texts);
    model->net = ocrtl::reconcile_codec(
        model->net, texts, ocrtl::parse_whitelist_spec(whitelist_spec ? whitelist_spec : "none"),
        seed, force_whitelist != 0);
  });
}

ocrtl_status ocrtl_model_forward(const ocrtl_model* model, const double* pixels,
                                 int height, int width, double* posteriors,
                                 size_t capacity) {
  return guarded([&] {
    require(model && pixels && posteriors, "arguments must not be NULL");
    require(height > 0 && width > 0, "image must have positive size");
    ocrtl::LineImage line{Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                          Eigen::RowMajor>>(pixels, height, width)};
    const auto trace = ocrtl::forward(model->net, line);
    const auto n = static_cast<std::size_t>(trace.posteriors.size());
    require(capacity >= n, "posterior buffer too small");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        posteriors, trace.posteriors.rows(), trace.posteriors.cols()) = trace.posteriors;
  });
}

ocrtl_status ocrtl_model_recognize_file(const ocrtl_model* model, const char* png_path,
                                        char** text) {
  return guarded([&] {
    require(model && png_path && text, "arguments must not be NULL");
    const auto line = ocrtl::load_line_png(png_path, model->net.input_height);
    const auto posteriors = ocrtl::forward(model->net, line).posteriors;
    *text = dup_string(ocrtl::u32_to_utf8(ocrtl::best_path_decode(posteriors, model->net.codec)));
  });
}

void ocrtl_synth_options_init(ocrtl_synth_options* o) {
  if (!o) return;
  const ocrtl::CorpusSpec d;
  o->font = "A";
  o->height = d.height;
  o->x_scale = d.x_scale;
  o->n_lines = d.n_lines;
  o->line_length = d.line_length;
  o->min_word = d.min_word;
  o->max_word = d.max_word;
  o->spacing_scale = d.spacing_scale;
  o->noise_std = d.degrade.pixel_noise_std;
  o->blur_radius = d.degrade.blur_radius;
  o->jitter = d.degrade.jitter;
  o->seed = d.seed;
}

ocrtl_status ocrtl_synth_corpus(const ocrtl_synth_options* o, const char* out_dir) {
  return guarded([&] {
    require(o && out_dir && o->font, "arguments must not be NULL");
    require(o->n_lines > 0, "n_lines must be positive");
    ocrtl::CorpusSpec spec;
    spec.font = o->font;
    spec.height = o->height;
    spec.x_scale = o->x_scale;
    spec.n_lines = o->n_lines;
    spec.line_length = o->line_length;
    spec.min_word = o->min_word;
    spec.max_word = o->max_word;
    spec.spacing_scale = o->spacing_scale;
    spec.degrade.pixel_noise_std = o->noise_std;
    spec.degrade.blur_radius = o->blur_radius;
    spec.degrade.jitter = o->jitter;
    spec.seed = o->seed;
    ocrtl::generate_corpus(spec, out_dir);
  });
}

ocrtl_status ocrtl_synth_regenerate(const char* manifest_path, const char* out_dir) {
  return guarded([&] {
    require(manifest_path && out_dir, "arguments must not be NULL");
    ocrtl::generate_corpus(
        ocrtl::parse_corpus_manifest(ocrtl::read_text_file(manifest_path)), out_dir);
  });
}

void ocrtl_train_options_init(ocrtl_train_options* o) {
  if (!o) return;
  const ocrtl::TrainingConfig d;
  *o = ocrtl_train_options{};
  o->whitelist = "default";
  o->iterations = d.iterations;
  o->learning_rate = d.learning_rate;
  o->momentum = d.momentum;
  o->checkpoint_every = d.checkpoint_every;
  o->seed = d.seed;
  o->input_height = d.input_height;
  o->hidden_size = d.hidden_size;
  o->grad_clip = d.grad_clip;
}

ocrtl_status ocrtl_train(const ocrtl_train_options* o, char** result_json) {
  return guarded([&] {
    require(o && o->train_dir && o->output_dir, "train_dir and output_dir are required");
    ocrtl::TrainingConfig cfg;
    cfg.iterations = o->iterations;
    cfg.learning_rate = o->learning_rate;
    cfg.momentum = o->momentum;
    cfg.checkpoint_every = o->checkpoint_every;
    cfg.seed = o->seed;
    cfg.whitelist = ocrtl::parse_whitelist_spec(o->whitelist ? o->whitelist : "none");
    cfg.force_whitelist = o->force_whitelist != 0;
    cfg.input_height = o->input_height;
    cfg.hidden_size = o->hidden_size;
    cfg.grad_clip = o->grad_clip;
    cfg.output_dir = o->output_dir;
    if (o->pretrained) {
      cfg.pretrained = fs::path(o->pretrained);
      cfg.input_height = ocrtl::load_model(*cfg.pretrained).input_height;
    }
    cfg.validate();

    std::vector<ocrtl::Sample> train_set = ocrtl::load_dataset(o->train_dir, cfg.input_height);
    std::vector<ocrtl::Sample> test_set;
    if (o->test_dir) {
      test_set = ocrtl::load_dataset(o->test_dir, cfg.input_height);
    } else {
      const std::size_t n_test =
          std::max<std::size_t>(1, ocrtl::test_lines_for_budget(train_set.size()));
      require(train_set.size() > n_test, "too few lines to hold out a test set");
      const auto split = ocrtl::draw_budget(
          [&] {
            std::vector<std::size_t> idx(train_set.size());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            return idx;
          }(),
          train_set.size(), ocrtl::derive_seed(cfg.seed, {0x7e57}));
      std::vector<ocrtl::Sample> kept;
      for (std::size_t i : split.train) kept.push_back(train_set[i]);
      for (std::size_t i : split.test) test_set.push_back(train_set[i]);
      train_set = std::move(kept);
    }

    const auto series = ocrtl::train(train_set, test_set, cfg);
    const auto& best = ocrtl::select_best_checkpoint(series);
    fs::copy_file(best.path, cfg.output_dir / "best.ocrm",
                  fs::copy_options::overwrite_existing);
    json checkpoints = json::array();
    for (const auto& c : series) {
      checkpoints.push_back({{"iteration", c.iteration},
                             {"path", c.path.string()},
                             {"test_cer", c.test_cer}});
    }
    json result = {{"checkpoints", checkpoints},
                   {"best", {{"iteration", best.iteration},
                             {"path", best.path.string()},
                             {"test_cer", best.test_cer}}},
                   {"train_lines", train_set.size()},
                   {"test_lines", test_set.size()}};
    if (result_json) *result_json = dup_string(result.dump(2));
  });
}

ocrtl_status ocrtl_evaluate(const ocrtl_model* model, const char* dataset_dir,
                            char** report_json) {
  return guarded([&] {
    require(model && dataset_dir && report_json, "arguments must not be NULL");
    const auto samples = ocrtl::load_dataset(dataset_dir, model->net.input_height);
    const ocrtl::NetworkRecognizer rec(std::make_shared<const ocrtl::Network>(model->net));
    *report_json = dup_string(report_to_json(ocrtl::evaluate_model(rec, samples)).dump(2));
  });
}

ocrtl_status ocrtl_rank_models(const char* const* model_paths, size_t n_models,
                               const char* dataset_dir, size_t max_lines,
                               char** ranking_json) {
  return guarded([&] {
    require(model_paths && n_models > 0 && dataset_dir && ranking_json,
            "at least one model and a dataset are required");
    std::vector<std::unique_ptr<ocrtl::NetworkRecognizer>> recognizers;
    for (std::size_t i = 0; i < n_models; ++i) {
      require(model_paths[i] != nullptr, "model path must not be NULL");
      recognizers.push_back(std::make_unique<ocrtl::NetworkRecognizer>(
          std::make_shared<const ocrtl::Network>(ocrtl::load_model(model_paths[i]))));
    }
    const int height = recognizers.front()->network().input_height;
    for (const auto& r : recognizers) {
      require(r->network().input_height == height,
              "all ranked models must share one input height");
    }
    auto samples = ocrtl::load_dataset(dataset_dir, height);
    if (max_lines > 0 && samples.size() > max_lines) samples.resize(max_lines);
    std::vector<const ocrtl::Recognizer*> candidates;
    for (const auto& r : recognizers) candidates.push_back(r.get());
    json out = json::array();
    for (const auto& r : ocrtl::rank_models(candidates, samples)) {
      out.push_back({{"index", r.index}, {"path", model_paths[r.index]}, {"cer", r.cer}});
    }
    *ranking_json = dup_string(out.dump(2));
  });
}

ocrtl_status ocrtl_gain(double cer_default, double cer_pretrained, double* gain) {
  return guarded([&] {
    require(gain != nullptr, "output must not be NULL");
    *gain = ocrtl::gain(cer_default, cer_pretrained);
  });
}

ocrtl_status ocrtl_experiment_run(const char* config_json, const char* base_dir,
                                  const char* out_dir, int jobs, char** summary_csv) {
  return guarded([&] {
    require(config_json && out_dir, "config and output directory are required");
    auto plan = ocrtl::load_experiment_plan(config_json, base_dir ? base_dir : ".", out_dir);
    if (jobs > 0) plan.config.jobs = static_cast<std::size_t>(jobs);
    const auto report = ocrtl::run_experiment_plan(plan, out_dir);
    if (summary_csv) *summary_csv = dup_string(report.summary_csv());
  });
}

}  // extern "C"
