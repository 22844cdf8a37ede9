///////////////////////////////////////////////////////////////////////
// File:        evalkit.hpp
// Description: Character error rate, edit breakdown and confusion counts.
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

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linenet.hpp"

namespace ocrtl {

struct EditCounts {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;

  std::size_t total() const { return insertions + deletions + substitutions; }
  EditCounts& operator+=(const EditCounts& o) {
    insertions += o.insertions;
    deletions += o.deletions;
    substitutions += o.substitutions;
    return *this;
  }
};

enum class EditKind { kMatch, kSubstitution, kDeletion, kInsertion };

// One alignment column. `ref` is empty for insertions, `hyp` for deletions.
struct EditOp {
  EditKind kind;
  std::optional<char32_t> ref;
  std::optional<char32_t> hyp;
};

struct Alignment {
  EditCounts counts;
  std::vector<EditOp> ops;  // in reference order
};

// Unit-cost Levenshtein distance.
std::size_t edit_distance(std::u32string_view ref, std::u32string_view hyp);

// One minimal alignment. On ties the backtrace prefers substitution (or
// match), then deletion, then insertion.
Alignment edit_ops(std::u32string_view ref, std::u32string_view hyp);

// Replays the alignment against its reference; yields the hypothesis.
std::u32string apply_alignment(const Alignment& alignment);

// Levenshtein distance / reference length over NFC text. An empty reference
// is a precondition violation and throws.
double cer(std::u32string_view ref, std::u32string_view hyp);

struct WordCounts {
  std::size_t merged_words = 0;  // reference spaces that were deleted
  std::size_t split_words = 0;   // spaces inserted into the hypothesis
};

WordCounts word_merge_split_counts(const Alignment& alignment);
WordCounts word_merge_split_counts(std::u32string_view ref,
                                   std::u32string_view hyp);

// Relative improvement in percent of `cer_pretrained` over `cer_default`.
// Throws if cer_default is not positive.
double gain(double cer_default, double cer_pretrained);
// Half-up rounding used for the printed tables.
long gain_display(double raw_gain);

struct Confusion {
  std::optional<char32_t> ref;
  std::optional<char32_t> hyp;
  std::size_t count = 0;
};

struct EvalReport {
  double cer = 0.0;  // total distance / total reference characters
  EditCounts char_counts;
  std::vector<Confusion> top_confusions;
  WordCounts word_counts;
  std::size_t n_lines = 0;
  std::size_t n_ref_chars = 0;
};

// Accumulates line pairs into an EvalReport (micro-averaged CER).
class EvalAccumulator {
 public:
  void add(std::u32string_view ref, std::u32string_view hyp);
  EvalReport report(std::size_t max_confusions = 10) const;

 private:
  EditCounts counts_;
  WordCounts words_;
  std::size_t n_lines_ = 0;
  std::size_t n_ref_chars_ = 0;
  std::vector<Confusion> confusions_;
};

// Anything that turns a line image into text.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::u32string recognize(const LineImage& line) const = 0;
};

class NetworkRecognizer : public Recognizer {
 public:
  explicit NetworkRecognizer(std::shared_ptr<const Network> net)
      : net_(std::move(net)) {}
  std::u32string recognize(const LineImage& line) const override;
  const Network& network() const { return *net_; }

 private:
  std::shared_ptr<const Network> net_;
};

struct Sample {
  std::string id;
  LineImage image;
  std::u32string text;  // NFC
};

EvalReport evaluate_model(const Recognizer& model,
                          std::span<const Sample> eval_set);

struct RankedModel {
  std::size_t index;  // position in the candidate list
  double cer;
};

// Ascending raw CER on `gt_sample`; ties keep input order.
std::vector<RankedModel> rank_models(
    std::span<const Recognizer* const> candidates,
    std::span<const Sample> gt_sample);

}  // namespace ocrtl
