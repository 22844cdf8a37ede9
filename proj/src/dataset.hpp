///////////////////////////////////////////////////////////////////////
// File:        dataset.hpp
// Description: Line-image datasets on disk: image plus .gt.txt pairs.
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

#include <filesystem>
#include <string>
#include <vector>

#include "evalkit.hpp"

namespace ocrtl {

// Dataset directory layout: <dir>/NNNNNN.png (grayscale line image) next to
// <dir>/NNNNNN.gt.txt (one line of UTF-8 ground truth).
std::string sample_stem(std::size_t index);

// Loads every *.png that has a matching .gt.txt, sorted by file name, and
// normalizes the images to `input_height`. Text is NFC-normalized with the
// trailing newline stripped.
std::vector<Sample> load_dataset(const std::filesystem::path& dir,
                                 int input_height);

void write_sample(const std::filesystem::path& dir, std::size_t index,
                  const LineImage& line, std::u32string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ocrtl
