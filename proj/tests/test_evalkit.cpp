///////////////////////////////////////////////////////////////////////
// File:        test_evalkit.cpp
// Description: Tests for the evalkit module.
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
#include <random>

#include "error.hpp"
#include "evalkit.hpp"

namespace ocrtl {
namespace {

// Independent full-matrix Levenshtein distance.
std::size_t oracle_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

std::u32string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const std::u32string alphabet = U"abc de";
  std::u32string s(rng() % (max_len + 1), U'a');
  for (auto& c : s) c = alphabet[rng() % alphabet.size()];
  return s;
}

TEST(Cer, Examples) {
  EXPECT_EQ(cer(U"abc", U"abc"), 0.0);
  EXPECT_EQ(cer(U"abc", U""), 1.0);
  EXPECT_DOUBLE_EQ(cer(U"kitten", U"sitting"), 0.5);
  EXPECT_EQ(oracle_distance(U"kitten", U"sitting"), 3u);
  EXPECT_THROW(cer(U"", U"x"), Error);
}

TEST(Cer, NormalizesBothSides) {
  EXPECT_EQ(cer(U"é", U"é"), 0.0);
}

TEST(EditOps, ConfusionEtoC) {
  const Alignment a = edit_ops(U"ec", U"cc");
  EXPECT_EQ(a.counts.substitutions, 1u);
  EXPECT_EQ(a.counts.total(), 1u);
  const auto sub = std::find_if(a.ops.begin(), a.ops.end(),
                                [](const EditOp& op) { return op.kind == EditKind::kSubstitution; });
  ASSERT_NE(sub, a.ops.end());
  EXPECT_EQ(sub->ref, U'e');
  EXPECT_EQ(sub->hyp, U'c');
}

TEST(EditOps, IdenticalHasNoEdits) {
  const Alignment a = edit_ops(U"ab", U"ab");
  EXPECT_EQ(a.counts.total(), 0u);
  for (const auto& op : a.ops) EXPECT_EQ(op.kind, EditKind::kMatch);
}

TEST(EditOps, PropertyAgreesWithOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const auto ref = random_text(rng, 25);
    const auto hyp = random_text(rng, 25);
    const std::size_t d = oracle_distance(ref, hyp);
    const Alignment a = edit_ops(ref, hyp);
    EXPECT_EQ(edit_distance(ref, hyp), d);
    EXPECT_EQ(a.counts.total(), d);
    EXPECT_EQ(apply_alignment(a), hyp);
    std::u32string ref_side;
    for (const auto& op : a.ops) {
      if (op.ref) ref_side.push_back(*op.ref);
    }
    EXPECT_EQ(ref_side, ref);
  }
}

TEST(WordCounts, MergesAndSplits) {
  EXPECT_EQ(word_merge_split_counts(U"a b", U"ab").merged_words, 1u);
  EXPECT_EQ(word_merge_split_counts(U"ab", U"a b").split_words, 1u);
  // "one two six" -> "onetwo s ix": the first space vanished, one appeared.
  const WordCounts w = word_merge_split_counts(U"one two six", U"onetwo s ix");
  EXPECT_EQ(w.merged_words, 1u);
  EXPECT_EQ(w.split_words, 1u);
}

TEST(Gain, ReferenceExamples) {
  EXPECT_EQ(gain_display(gain(8.21, 5.35)), 35);
  EXPECT_EQ(gain_display(gain(6.19, 4.79)), 23);
  EXPECT_EQ(gain(3.0, 3.0), 0.0);
  EXPECT_LT(gain(2.0, 3.0), 0.0);
  EXPECT_THROW(gain(0.0, 1.0), Error);
}

TEST(Gain, DisplayRoundsHalfUp) {
  EXPECT_EQ(gain_display(42.5), 43);
  EXPECT_EQ(gain_display(42.49), 42);
  EXPECT_EQ(gain_display(-0.5), 0);
}

TEST(Accumulator, MicroAverage) {
  EvalAccumulator acc;
  acc.add(U"abcd", U"abcd");
  acc.add(U"ab", U"");
  const EvalReport r = acc.report();
  EXPECT_DOUBLE_EQ(r.cer, 2.0 / 6.0);
  EXPECT_EQ(r.n_lines, 2u);
  EXPECT_EQ(r.n_ref_chars, 6u);
  EXPECT_EQ(r.char_counts.deletions, 2u);
}

TEST(Accumulator, ConfusionsSortedByCount) {
  EvalAccumulator acc;
  acc.add(U"eee", U"ccc");
  acc.add(U"o", U"a");
  const EvalReport r = acc.report();
  ASSERT_GE(r.top_confusions.size(), 2u);
  EXPECT_EQ(r.top_confusions[0].ref, U'e');
  EXPECT_EQ(r.top_confusions[0].count, 3u);
}

// Recognizer reading the line index from the first pixel.
class TableRecognizer : public Recognizer {
 public:
  explicit TableRecognizer(std::vector<std::u32string> outputs) : outputs_(std::move(outputs)) {}
  std::u32string recognize(const LineImage& line) const override {
    return outputs_.at(static_cast<std::size_t>(line.pixels(0, 0)));
  }

 private:
  std::vector<std::u32string> outputs_;
};

std::vector<Sample> indexed_samples(const std::vector<std::u32string>& texts) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({std::to_string(i),
                   LineImage{Eigen::MatrixXd::Constant(1, 1, static_cast<double>(i))}, texts[i]});
  }
  return out;
}

TEST(EvaluateModel, VerbatimAndEmptyStubs) {
  const std::vector<std::u32string> texts = {U"abc", U"de f", U"g"};
  const auto samples = indexed_samples(texts);
  EXPECT_EQ(evaluate_model(TableRecognizer(texts), samples).cer, 0.0);
  EXPECT_EQ(evaluate_model(TableRecognizer({U"", U"", U""}), samples).cer, 1.0);
  EXPECT_THROW(evaluate_model(TableRecognizer(texts), {}), Error);
}

TEST(RankModels, OrdersByRawCer) {
  const std::vector<std::u32string> texts = {U"abcd"};
  const auto samples = indexed_samples(texts);
  const TableRecognizer perfect(texts), empty({U""});
  const std::vector<const Recognizer*> candidates = {&empty, &perfect};
  const auto ranked = rank_models(candidates, samples);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].index, 1u);
  EXPECT_EQ(ranked[0].cer, 0.0);
  EXPECT_EQ(ranked[1].cer, 1.0);
  const std::vector<const Recognizer*> single = {&empty};
  EXPECT_EQ(rank_models(single, samples)[0].index, 0u);
}

}  // namespace
}  // namespace ocrtl
