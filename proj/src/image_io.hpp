///////////////////////////////////////////////////////////////////////
// File:        image_io.hpp
// Description: Grayscale PNG reading and writing.
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

#include <Eigen/Dense>

#include <filesystem>

#include "linenet.hpp"

namespace ocrtl {

// 8-bit grayscale PNG -> values in [0,1] as stored (paper white = 1).
Eigen::MatrixXd read_png_gray(const std::filesystem::path& path);

// Writes ink-high line pixels as a conventional dark-on-white 8-bit PNG.
// Output bytes depend only on the pixels.
void write_line_png(const std::filesystem::path& path, const LineImage& line);

// Loads a PNG written by write_line_png (or any grayscale scan) and
// normalizes it to `target_height`.
LineImage load_line_png(const std::filesystem::path& path, int target_height);

}  // namespace ocrtl
