///////////////////////////////////////////////////////////////////////
// File:        modelstore.hpp
// Description: Versioned binary model files (.ocrm).
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

#include <cstdint>
#include <filesystem>
#include <string>

#include "error.hpp"
#include "linenet.hpp"

namespace ocrtl {

// .ocrm layout, all integers little-endian:
//   "OCRM" | u32 version | u32 header byte length | UTF-8 JSON header |
//   float32 payload (blocks in header order, row-major)
// The header also records the absolute payload offset and byte length.
inline constexpr char kModelMagic[4] = {'O', 'C', 'R', 'M'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

enum class ModelFormatIssue {
  kBadMagic,
  kUnsupportedVersion,
  kMalformedHeader,
  kPayloadMismatch,  // declared shapes disagree with the payload length
  kCodecMismatch,    // codec size disagrees with the output matrix rows
};

class ModelFormatError : public Error {
 public:
  ModelFormatError(ModelFormatIssue issue, const std::string& what)
      : Error(ErrorKind::kFormat, what), issue_(issue) {}
  ModelFormatIssue issue() const noexcept { return issue_; }

 private:
  ModelFormatIssue issue_;
};

std::string serialize_model(const Network& net);
Network deserialize_model(const std::string& bytes);

void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

// The JSON header of a model file, pretty-printed.
std::string read_model_header(const std::filesystem::path& path);

}  // namespace ocrtl
