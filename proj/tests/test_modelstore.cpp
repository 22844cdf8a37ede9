///////////////////////////////////////////////////////////////////////
// File:        test_modelstore.cpp
// Description: Tests for the modelstore module.
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

#include <nlohmann/json.hpp>

#include <cstring>
#include <fstream>
#include <random>

#include "modelstore.hpp"
#include "test_support.hpp"

namespace ocrtl {
namespace {

using nlohmann::json;

std::uint32_t read_u32(const std::string& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
  return v;
}

void write_u32(std::string& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

// Splits a model file into header JSON and payload bytes.
std::pair<json, std::string> unpack(const std::string& bytes) {
  const std::uint32_t len = read_u32(bytes, 8);
  return {json::parse(bytes.substr(12, len)), bytes.substr(12 + len)};
}

std::string repack(const json& header, const std::string& payload) {
  const std::string text = header.dump();
  std::string out = "OCRM";
  out.resize(12);
  write_u32(out, 4, kModelFormatVersion);
  write_u32(out, 8, static_cast<std::uint32_t>(text.size()));
  return out + text + payload;
}

ModelFormatIssue issue_of(const std::string& bytes) {
  try {
    deserialize_model(bytes);
  } catch (const ModelFormatError& e) {
    return e.issue();
  }
  ADD_FAILURE() << "model unexpectedly loaded";
  return ModelFormatIssue::kMalformedHeader;
}

Network sample_network() {
  Network net = testing::random_network(3, 6, 4, testing::letters_codec(3), 0.7);
  net.seed_lineage = {3, 17};
  net.provenance = {{"init", "scratch"}};
  return net;
}

TEST(ModelStore, RoundTripPreservesFloatRoundedNetwork) {
  const Network net = sample_network();
  const Network loaded = deserialize_model(serialize_model(net));
  const Network rounded = round_to_float(net);
  EXPECT_TRUE(loaded.params == rounded.params);
  EXPECT_EQ(loaded.codec, net.codec);
  EXPECT_EQ(loaded.seed_lineage, net.seed_lineage);
  EXPECT_EQ(loaded.provenance, net.provenance);
  std::mt19937_64 rng(2);
  const LineImage line = testing::random_line(rng, 6, 10);
  EXPECT_EQ(forward(loaded, line).posteriors, forward(rounded, line).posteriors);
  EXPECT_EQ(serialize_model(loaded), serialize_model(net));
}

TEST(ModelStore, HeaderDescribesLayout) {
  const std::string bytes = serialize_model(sample_network());
  ASSERT_EQ(bytes.substr(0, 4), "OCRM");
  EXPECT_EQ(read_u32(bytes, 4), kModelFormatVersion);
  const auto [header, payload] = unpack(bytes);
  EXPECT_EQ(header["payload_offset"].get<std::size_t>(), 12 + read_u32(bytes, 8));
  EXPECT_EQ(header["payload_bytes"].get<std::size_t>(), payload.size());
  EXPECT_EQ(header["blocks"].size(), 8u);
  EXPECT_EQ(header["codec"]["symbols"].size(), 5u);
}

TEST(ModelStore, TruncatedPayloadIsShapeMismatch) {
  std::string bytes = serialize_model(sample_network());
  bytes.resize(bytes.size() - 4);
  EXPECT_EQ(issue_of(bytes), ModelFormatIssue::kPayloadMismatch);
}

TEST(ModelStore, CodecLargerThanOutputRowsIsCodecMismatch) {
  const auto [header, payload] = unpack(serialize_model(sample_network()));
  json corrupted = header;
  corrupted["codec"]["symbols"].push_back(static_cast<std::uint32_t>(U'z'));
  EXPECT_EQ(issue_of(repack(corrupted, payload)), ModelFormatIssue::kCodecMismatch);
}

TEST(ModelStore, BadMagicAndVersion) {
  std::string bytes = serialize_model(sample_network());
  std::string wrong_magic = bytes;
  wrong_magic[0] = 'X';
  EXPECT_EQ(issue_of(wrong_magic), ModelFormatIssue::kBadMagic);
  EXPECT_EQ(issue_of(""), ModelFormatIssue::kBadMagic);
  write_u32(bytes, 4, 2);
  EXPECT_EQ(issue_of(bytes), ModelFormatIssue::kUnsupportedVersion);
}

TEST(ModelStore, GarbageHeaderIsMalformed) {
  const auto [header, payload] = unpack(serialize_model(sample_network()));
  std::string bytes = repack(header, payload);
  bytes[12] = '!';
  EXPECT_EQ(issue_of(bytes), ModelFormatIssue::kMalformedHeader);
}

TEST(ModelStore, SaveAndLoadFile) {
  testing::TempDir dir("store");
  const Network net = sample_network();
  save_model(net, dir / "m.ocrm");
  EXPECT_TRUE(load_model(dir / "m.ocrm").params == round_to_float(net).params);
  EXPECT_NE(read_model_header(dir / "m.ocrm").find("\"hidden_size\""), std::string::npos);
  EXPECT_THROW(load_model(dir / "missing.ocrm"), Error);
}

}  // namespace
}  // namespace ocrtl
