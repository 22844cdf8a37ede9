///////////////////////////////////////////////////////////////////////
// File:        dataset.cpp
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

#include "dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "image_io.hpp"
#include "unicode.hpp"

namespace ocrtl {

namespace fs = std::filesystem;

std::string sample_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

std::vector<Sample> load_dataset(const fs::path& dir, int input_height) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kIo, "dataset directory not found: " + dir.string());
  }
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      images.push_back(entry.path());
    }
  }
  std::sort(images.begin(), images.end());
  std::vector<Sample> samples;
  for (const auto& img : images) {
    fs::path gt = img;
    gt.replace_extension(".gt.txt");
    if (!fs::exists(gt)) continue;
    std::string text = read_text_file(gt);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
      text.pop_back();
    }
    Sample s;
    s.id = img.stem().string();
    try {
      s.text = nfc_from_utf8(text);
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, gt.string() + ": " + e.what());
    }
    s.image = load_line_png(img, input_height);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) {
    throw Error(ErrorKind::kFormat,
                "no image/ground-truth pairs in " + dir.string());
  }
  return samples;
}

void write_sample(const fs::path& dir, std::size_t index, const LineImage& line,
                  std::u32string_view text) {
  const std::string stem = sample_stem(index);
  write_line_png(dir / (stem + ".png"), line);
  write_text_file(dir / (stem + ".gt.txt"), u32_to_utf8(text) + "\n");
}

}  // namespace ocrtl
