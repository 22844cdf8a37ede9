/**********************************************************************
 * File:        ocrtl.h
 * Description: Public C interface.
 *
 * (C) Copyright 2026, The ocrtl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 **********************************************************************/

/* C interface to the ocrtl line-recognizer toolkit.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns an ocrtl_status; on failure a description is
 * available from ocrtl_last_error() on the same thread. Strings handed out
 * through char** parameters are NUL-terminated UTF-8 owned by the caller and
 * released with ocrtl_string_free(). */
#ifndef OCRTL_OCRTL_H_
#define OCRTL_OCRTL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(OCRTL_BUILDING_LIBRARY)
#define OCRTL_API __attribute__((visibility("default")))
#else
#define OCRTL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ocrtl_status {
  OCRTL_OK = 0,
  OCRTL_ERR_INVALID_ARGUMENT = 1,
  OCRTL_ERR_BLIND_SPOT = 2,       /* character missing from the codec */
  OCRTL_ERR_INFEASIBLE_TARGET = 3, /* text too long for its line image */
  OCRTL_ERR_IO = 4,
  OCRTL_ERR_FORMAT = 5,           /* malformed model file or dataset */
  OCRTL_ERR_INTERNAL = 6
} ocrtl_status;

typedef struct ocrtl_codec ocrtl_codec;
typedef struct ocrtl_model ocrtl_model;

OCRTL_API const char* ocrtl_version(void);
OCRTL_API const char* ocrtl_last_error(void);
OCRTL_API void ocrtl_string_free(char* s);

/* Expands "default" (a-z, A-Z, 0-9), "none", "file:<path>" or a literal
 * character list into the whitelist characters, in code point order. */
OCRTL_API ocrtl_status ocrtl_whitelist_expand(const char* spec, char** chars);

/* ---- codec ---------------------------------------------------------- */

/* Blank, space, whitelist and every character of `texts`. */
OCRTL_API ocrtl_status ocrtl_codec_build(const char* const* texts,
                                         size_t n_texts,
                                         const char* whitelist_spec,
                                         ocrtl_codec** out);
OCRTL_API ocrtl_status ocrtl_codec_from_model(const ocrtl_model* model,
                                              ocrtl_codec** out);
OCRTL_API void ocrtl_codec_free(ocrtl_codec* codec);
OCRTL_API size_t ocrtl_codec_size(const ocrtl_codec* codec);
/* Index 0 is the blank and reports code point 0. */
OCRTL_API ocrtl_status ocrtl_codec_symbol(const ocrtl_codec* codec,
                                          size_t index, uint32_t* code_point);
OCRTL_API int ocrtl_codec_contains(const ocrtl_codec* codec,
                                   uint32_t code_point);
OCRTL_API int ocrtl_codec_is_immune(const ocrtl_codec* codec,
                                    uint32_t code_point);
/* Writes up to `capacity` labels; `n_labels` always receives the full
 * count. Fails with OCRTL_ERR_BLIND_SPOT on characters outside the codec. */
OCRTL_API ocrtl_status ocrtl_codec_encode(const ocrtl_codec* codec,
                                          const char* text, int32_t* labels,
                                          size_t capacity, size_t* n_labels);
OCRTL_API ocrtl_status ocrtl_codec_decode(const ocrtl_codec* codec,
                                          const int32_t* labels,
                                          size_t n_labels, char** text);
/* One line per symbol: "<index>\t<char>\tU+XXXX[\timmune]". */
OCRTL_API ocrtl_status ocrtl_codec_inspect(const ocrtl_codec* codec,
                                           char** listing);
/* JSON {"added":[...], "removed":[...], "retained":[[old,new],...]}. */
OCRTL_API ocrtl_status ocrtl_codec_diff(const ocrtl_codec* from,
                                        const ocrtl_codec* to, char** json);

/* ---- models --------------------------------------------------------- */

OCRTL_API ocrtl_status ocrtl_model_create(int input_height, int hidden_size,
                                          const ocrtl_codec* codec,
                                          uint64_t seed, ocrtl_model** out);
OCRTL_API ocrtl_status ocrtl_model_load(const char* path, ocrtl_model** out);
OCRTL_API ocrtl_status ocrtl_model_save(const ocrtl_model* model,
                                        const char* path);
OCRTL_API void ocrtl_model_free(ocrtl_model* model);
/* The JSON header of a model file. */
OCRTL_API ocrtl_status ocrtl_model_info(const char* path, char** header_json);
OCRTL_API int ocrtl_model_input_height(const ocrtl_model* model);
OCRTL_API size_t ocrtl_model_output_size(const ocrtl_model* model);

/* Adds `add_chars` (may be NULL) and then, when `keep_chars` is not NULL,
 * removes every symbol outside keep_chars and the immune set. The delta
 * applied is returned as JSON when `delta_json` is not NULL. */
OCRTL_API ocrtl_status ocrtl_model_resize_codec(ocrtl_model* model,
                                                const char* add_chars,
                                                const char* keep_chars,
                                                uint64_t seed,
                                                char** delta_json);
/* Extends the codec with the ground truth's characters, then reduces it to
 * ground truth + blank + space + whitelist. */
OCRTL_API ocrtl_status ocrtl_model_reconcile(ocrtl_model* model,
                                             const char* const* gt_texts,
                                             size_t n_texts,
                                             const char* whitelist_spec,
                                             int force_whitelist,
                                             uint64_t seed);

/* Posteriors for an ink-high line image given row-major as height x width
 * values in [0,1]; `height` must equal the model's input height. Writes
 * width x output_size values, row-major by time step. */
OCRTL_API ocrtl_status ocrtl_model_forward(const ocrtl_model* model,
                                           const double* pixels, int height,
                                           int width, double* posteriors,
                                           size_t capacity);
OCRTL_API ocrtl_status ocrtl_model_recognize_file(const ocrtl_model* model,
                                                  const char* png_path,
                                                  char** text);

/* ---- synthetic data ------------------------------------------------- */

typedef struct ocrtl_synth_options {
  const char* font; /* "A" or "B" */
  int height;
  int x_scale;
  size_t n_lines;
  size_t line_length;
  size_t min_word;
  size_t max_word;
  double spacing_scale;
  double noise_std;
  int blur_radius;
  int jitter;
  uint64_t seed;
} ocrtl_synth_options;

OCRTL_API void ocrtl_synth_options_init(ocrtl_synth_options* options);
OCRTL_API ocrtl_status ocrtl_synth_corpus(const ocrtl_synth_options* options,
                                          const char* out_dir);
/* Re-creates a corpus from its manifest.json. */
OCRTL_API ocrtl_status ocrtl_synth_regenerate(const char* manifest_path,
                                              const char* out_dir);

/* ---- training ------------------------------------------------------- */

typedef struct ocrtl_train_options {
  const char* train_dir;
  const char* test_dir;   /* NULL: hold out round(2n/15) training lines */
  const char* output_dir;
  const char* pretrained; /* NULL: train from scratch */
  const char* whitelist;  /* whitelist spec, NULL means "none" */
  int force_whitelist;
  size_t iterations;
  double learning_rate;
  double momentum;
  size_t checkpoint_every;
  uint64_t seed;
  int input_height; /* ignored when fine-tuning: the model decides */
  int hidden_size;
  double grad_clip;
} ocrtl_train_options;

OCRTL_API void ocrtl_train_options_init(ocrtl_train_options* options);
/* Writes model-<iteration>.ocrm checkpoints, checkpoints.csv and a copy of
 * the best checkpoint as best.ocrm. Result JSON lists the series and the
 * best checkpoint. */
OCRTL_API ocrtl_status ocrtl_train(const ocrtl_train_options* options,
                                   char** result_json);

/* ---- evaluation ----------------------------------------------------- */

OCRTL_API ocrtl_status ocrtl_evaluate(const ocrtl_model* model,
                                      const char* dataset_dir,
                                      char** report_json);
/* Ranks models by raw CER on the first `max_lines` lines of the dataset
 * (0 = all). Result: JSON array of {"index","path","cer"}, best first. */
OCRTL_API ocrtl_status ocrtl_rank_models(const char* const* model_paths,
                                         size_t n_models,
                                         const char* dataset_dir,
                                         size_t max_lines,
                                         char** ranking_json);
/* 100 * (cer_default - cer_pretrained) / cer_default. */
OCRTL_API ocrtl_status ocrtl_gain(double cer_default, double cer_pretrained,
                                  double* gain);
/* Runs an experiment config; writes experiment.csv and summary.csv into
 * out_dir and returns the summary CSV. `jobs` > 0 overrides the config. */
OCRTL_API ocrtl_status ocrtl_experiment_run(const char* config_json,
                                            const char* base_dir,
                                            const char* out_dir, int jobs,
                                            char** summary_csv);

#ifdef __cplusplus
}
#endif

#endif /* OCRTL_OCRTL_H_ */
