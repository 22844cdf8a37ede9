///////////////////////////////////////////////////////////////////////
// File:        evalkit.cpp
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

#include "evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ctc.hpp"
#include "error.hpp"
#include "unicode.hpp"

namespace ocrtl {

std::size_t edit_distance(std::u32string_view ref, std::u32string_view hyp) {
  std::vector<std::size_t> row(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1,
                         diag + (ref[i - 1] == hyp[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[hyp.size()];
}

Alignment edit_ops(std::u32string_view ref, std::u32string_view hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1,
                           at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)});
    }
  }

  Alignment result;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        result.ops.push_back({same ? EditKind::kMatch : EditKind::kSubstitution,
                              ref[i - 1], hyp[j - 1]});
        if (!same) ++result.counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      result.ops.push_back({EditKind::kDeletion, ref[i - 1], std::nullopt});
      ++result.counts.deletions;
      --i;
      continue;
    }
    result.ops.push_back({EditKind::kInsertion, std::nullopt, hyp[j - 1]});
    ++result.counts.insertions;
    --j;
  }
  std::reverse(result.ops.begin(), result.ops.end());
  return result;
}

std::u32string apply_alignment(const Alignment& alignment) {
  std::u32string out;
  for (const auto& op : alignment.ops) {
    if (op.kind != EditKind::kDeletion) out.push_back(*op.hyp);
  }
  return out;
}

double cer(std::u32string_view ref, std::u32string_view hyp) {
  const std::u32string r = nfc(ref);
  const std::u32string h = nfc(hyp);
  if (r.empty()) throw invalid_argument("CER of an empty reference");
  return static_cast<double>(edit_distance(r, h)) /
         static_cast<double>(r.size());
}

WordCounts word_merge_split_counts(const Alignment& alignment) {
  WordCounts wc;
  for (const auto& op : alignment.ops) {
    if (op.kind == EditKind::kDeletion && op.ref == kSpace) ++wc.merged_words;
    if (op.kind == EditKind::kInsertion && op.hyp == kSpace) ++wc.split_words;
  }
  return wc;
}

WordCounts word_merge_split_counts(std::u32string_view ref,
                                   std::u32string_view hyp) {
  return word_merge_split_counts(edit_ops(ref, hyp));
}

double gain(double cer_default, double cer_pretrained) {
  if (!(cer_default > 0.0)) {
    throw invalid_argument("gain is undefined for a default CER of " +
                           std::to_string(cer_default));
  }
  return 100.0 * (cer_default - cer_pretrained) / cer_default;
}

long gain_display(double raw_gain) {
  return static_cast<long>(std::floor(raw_gain + 0.5));
}

void EvalAccumulator::add(std::u32string_view ref, std::u32string_view hyp) {
  const std::u32string r = nfc(ref);
  const std::u32string h = nfc(hyp);
  const Alignment a = edit_ops(r, h);
  counts_ += a.counts;
  const WordCounts wc = word_merge_split_counts(a);
  words_.merged_words += wc.merged_words;
  words_.split_words += wc.split_words;
  ++n_lines_;
  n_ref_chars_ += r.size();
  for (const auto& op : a.ops) {
    if (op.kind == EditKind::kMatch) continue;
    auto it = std::find_if(confusions_.begin(), confusions_.end(),
                           [&](const Confusion& c) {
                             return c.ref == op.ref && c.hyp == op.hyp;
                           });
    if (it == confusions_.end()) {
      confusions_.push_back({op.ref, op.hyp, 1});
    } else {
      ++it->count;
    }
  }
}

EvalReport EvalAccumulator::report(std::size_t max_confusions) const {
  EvalReport r;
  r.char_counts = counts_;
  r.word_counts = words_;
  r.n_lines = n_lines_;
  r.n_ref_chars = n_ref_chars_;
  const std::size_t dist = counts_.total();
  if (n_ref_chars_ > 0) {
    r.cer = static_cast<double>(dist) / static_cast<double>(n_ref_chars_);
  } else {
    // Only empty references: every hypothesis character is an insertion.
    r.cer = static_cast<double>(dist);
  }
  r.top_confusions = confusions_;
  auto key = [](const std::optional<char32_t>& c) {
    return c ? static_cast<std::int64_t>(*c) : -1;
  };
  std::stable_sort(r.top_confusions.begin(), r.top_confusions.end(),
                   [&](const Confusion& a, const Confusion& b) {
                     if (a.count != b.count) return a.count > b.count;
                     if (key(a.ref) != key(b.ref)) return key(a.ref) < key(b.ref);
                     return key(a.hyp) < key(b.hyp);
                   });
  if (r.top_confusions.size() > max_confusions) {
    r.top_confusions.resize(max_confusions);
  }
  return r;
}

std::u32string NetworkRecognizer::recognize(const LineImage& line) const {
  return best_path_decode(forward(*net_, line).posteriors, net_->codec);
}

EvalReport evaluate_model(const Recognizer& model,
                          std::span<const Sample> eval_set) {
  if (eval_set.empty()) throw invalid_argument("evaluation set is empty");
  EvalAccumulator acc;
  for (const auto& s : eval_set) {
    std::u32string hyp;
    try {
      hyp = model.recognize(s.image);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + s.id + ": " + e.what());
    }
    acc.add(s.text, hyp);
  }
  return acc.report();
}

std::vector<RankedModel> rank_models(
    std::span<const Recognizer* const> candidates,
    std::span<const Sample> gt_sample) {
  std::vector<RankedModel> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ranked.push_back({i, evaluate_model(*candidates[i], gt_sample).cer});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedModel& a, const RankedModel& b) {
                     return a.cer < b.cer;
                   });
  return ranked;
}

}  // namespace ocrtl
