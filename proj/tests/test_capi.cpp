///////////////////////////////////////////////////////////////////////
// File:        test_capi.cpp
// Description: Tests for the capi module.
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

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "ocrtl/ocrtl.h"

namespace {

namespace fs = std::filesystem;

class ScratchDir {
 public:
  ScratchDir() {
    path_ = fs::temp_directory_path() /
            ("ocrtl-capi-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  std::string str(const std::string& name = "") const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  ocrtl_string_free(s);
  return out;
}

TEST(CApi, CodecBuildEncodeDecode) {
  const char* texts[] = {"ab", "ba"};
  ocrtl_codec* codec = nullptr;
  ASSERT_EQ(ocrtl_codec_build(texts, 2, "none", &codec), OCRTL_OK);
  EXPECT_EQ(ocrtl_codec_size(codec), 4u);
  uint32_t cp = 0;
  ASSERT_EQ(ocrtl_codec_symbol(codec, 2, &cp), OCRTL_OK);
  EXPECT_EQ(cp, static_cast<uint32_t>('a'));
  int32_t labels[8];
  size_t n = 0;
  ASSERT_EQ(ocrtl_codec_encode(codec, "ba b", labels, 8, &n), OCRTL_OK);
  ASSERT_EQ(n, 4u);
  EXPECT_EQ(labels[0], 3);
  EXPECT_EQ(labels[2], 1);
  char* text = nullptr;
  ASSERT_EQ(ocrtl_codec_decode(codec, labels, n, &text), OCRTL_OK);
  EXPECT_EQ(take(text), "ba b");
  EXPECT_EQ(ocrtl_codec_encode(codec, "ac", labels, 8, &n), OCRTL_ERR_BLIND_SPOT);
  EXPECT_NE(std::string(ocrtl_last_error()).find("'c'"), std::string::npos);
  ocrtl_codec_free(codec);
}

TEST(CApi, WhitelistExpansion) {
  char* chars = nullptr;
  ASSERT_EQ(ocrtl_whitelist_expand("default", &chars), OCRTL_OK);
  EXPECT_EQ(take(chars).size(), 62u);
  EXPECT_EQ(ocrtl_whitelist_expand("file:/nonexistent/wl", &chars), OCRTL_ERR_IO);
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(ocrtl_codec_build(nullptr, 0, "none", nullptr), OCRTL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ocrtl_model_load(nullptr, nullptr), OCRTL_ERR_INVALID_ARGUMENT);
  EXPECT_GT(std::string(ocrtl_last_error()).size(), 0u);
  ocrtl_codec_free(nullptr);
  ocrtl_model_free(nullptr);
}

TEST(CApi, ModelLifecycle) {
  ScratchDir dir;
  const char* texts[] = {"abc"};
  ocrtl_codec* codec = nullptr;
  ASSERT_EQ(ocrtl_codec_build(texts, 1, "none", &codec), OCRTL_OK);
  ocrtl_model* model = nullptr;
  ASSERT_EQ(ocrtl_model_create(4, 6, codec, 7, &model), OCRTL_OK);
  ocrtl_codec_free(codec);
  EXPECT_EQ(ocrtl_model_output_size(model), 5u);

  const std::vector<double> pixels(4 * 3, 0.5);
  std::vector<double> post(3 * 5);
  ASSERT_EQ(ocrtl_model_forward(model, pixels.data(), 4, 3, post.data(), post.size()), OCRTL_OK);
  double row = 0;
  for (int k = 0; k < 5; ++k) row += post[k];
  EXPECT_NEAR(row, 1.0, 1e-12);
  EXPECT_EQ(ocrtl_model_forward(model, pixels.data(), 3, 4, post.data(), post.size()),
            OCRTL_ERR_INVALID_ARGUMENT);

  char* delta = nullptr;
  ASSERT_EQ(ocrtl_model_resize_codec(model, "q", nullptr, 3, &delta), OCRTL_OK);
  EXPECT_NE(take(delta).find("\"q\""), std::string::npos);
  EXPECT_EQ(ocrtl_model_output_size(model), 6u);

  const std::string path = dir.str("m.ocrm");
  ASSERT_EQ(ocrtl_model_save(model, path.c_str()), OCRTL_OK);
  ocrtl_model* loaded = nullptr;
  ASSERT_EQ(ocrtl_model_load(path.c_str(), &loaded), OCRTL_OK);
  std::vector<double> a(3 * 6), b(3 * 6);
  ASSERT_EQ(ocrtl_model_forward(loaded, pixels.data(), 4, 3, a.data(), a.size()), OCRTL_OK);
  ocrtl_model* reloaded = nullptr;
  ASSERT_EQ(ocrtl_model_save(loaded, dir.str("n.ocrm").c_str()), OCRTL_OK);
  ASSERT_EQ(ocrtl_model_load(dir.str("n.ocrm").c_str(), &reloaded), OCRTL_OK);
  ASSERT_EQ(ocrtl_model_forward(reloaded, pixels.data(), 4, 3, b.data(), b.size()), OCRTL_OK);
  EXPECT_EQ(a, b);

  char* header = nullptr;
  ASSERT_EQ(ocrtl_model_info(path.c_str(), &header), OCRTL_OK);
  EXPECT_NE(take(header).find("\"codec\""), std::string::npos);
  EXPECT_EQ(ocrtl_model_load(dir.str("missing.ocrm").c_str(), &loaded), OCRTL_ERR_IO);
  ocrtl_model_free(reloaded);
  ocrtl_model_free(loaded);
  ocrtl_model_free(model);
}

TEST(CApi, ReconcileKeepsWhitelistedCharacter) {
  const char* texts[] = {"queen tea"};
  ocrtl_codec* codec = nullptr;
  ASSERT_EQ(ocrtl_codec_build(texts, 1, "none", &codec), OCRTL_OK);
  ocrtl_model* model = nullptr;
  ASSERT_EQ(ocrtl_model_create(4, 4, codec, 1, &model), OCRTL_OK);
  const char* gt[] = {"tea", "net"};
  ASSERT_EQ(ocrtl_model_reconcile(model, gt, 2, "default", 0, 5), OCRTL_OK);
  ocrtl_codec* after = nullptr;
  ASSERT_EQ(ocrtl_codec_from_model(model, &after), OCRTL_OK);
  EXPECT_TRUE(ocrtl_codec_contains(after, 'q'));
  ocrtl_codec_free(after);
  ASSERT_EQ(ocrtl_model_reconcile(model, gt, 2, "none", 0, 5), OCRTL_OK);
  ASSERT_EQ(ocrtl_codec_from_model(model, &after), OCRTL_OK);
  EXPECT_FALSE(ocrtl_codec_contains(after, 'q'));
  ocrtl_codec_free(after);
  ocrtl_codec_free(codec);
  ocrtl_model_free(model);
}

TEST(CApi, SynthTrainEvaluateRank) {
  ScratchDir dir;
  ocrtl_synth_options so;
  ocrtl_synth_options_init(&so);
  so.n_lines = 12;
  so.height = 16;
  so.line_length = 6;
  so.seed = 3;
  ASSERT_EQ(ocrtl_synth_corpus(&so, dir.str("data").c_str()), OCRTL_OK) << ocrtl_last_error();

  ocrtl_train_options to;
  ocrtl_train_options_init(&to);
  const std::string data = dir.str("data"), out = dir.str("run");
  to.train_dir = data.c_str();
  to.output_dir = out.c_str();
  to.iterations = 10;
  to.checkpoint_every = 5;
  to.input_height = 16;
  to.hidden_size = 4;
  char* result = nullptr;
  ASSERT_EQ(ocrtl_train(&to, &result), OCRTL_OK) << ocrtl_last_error();
  const std::string r = take(result);
  EXPECT_NE(r.find("\"test_lines\": 2"), std::string::npos) << r;
  EXPECT_TRUE(fs::exists(dir.str("run/best.ocrm")));
  EXPECT_TRUE(fs::exists(dir.str("run/checkpoints.csv")));

  ocrtl_model* model = nullptr;
  ASSERT_EQ(ocrtl_model_load(dir.str("run/best.ocrm").c_str(), &model), OCRTL_OK);
  char* report = nullptr;
  ASSERT_EQ(ocrtl_evaluate(model, data.c_str(), &report), OCRTL_OK);
  EXPECT_NE(take(report).find("\"n_lines\": 12"), std::string::npos);
  char* text = nullptr;
  ASSERT_EQ(ocrtl_model_recognize_file(model, dir.str("data/000000.png").c_str(), &text),
            OCRTL_OK);
  ocrtl_string_free(text);
  ocrtl_model_free(model);

  const std::string m5 = dir.str("run/model-5.ocrm"), m10 = dir.str("run/model-10.ocrm");
  const char* paths[] = {m5.c_str(), m10.c_str()};
  char* ranking = nullptr;
  ASSERT_EQ(ocrtl_rank_models(paths, 2, data.c_str(), 5, &ranking), OCRTL_OK);
  EXPECT_NE(take(ranking).find("\"cer\""), std::string::npos);
}

TEST(CApi, Gain) {
  double g = 0;
  ASSERT_EQ(ocrtl_gain(8.21, 5.35, &g), OCRTL_OK);
  EXPECT_NEAR(g, 100.0 * (8.21 - 5.35) / 8.21, 1e-12);
  EXPECT_EQ(ocrtl_gain(0.0, 1.0, &g), OCRTL_ERR_INVALID_ARGUMENT);
}

}  // namespace
