///////////////////////////////////////////////////////////////////////
// File:        synthgen.hpp
// Description: Synthetic text-line rendering and degradation.
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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "codec.hpp"
#include "linenet.hpp"

namespace ocrtl {

// Bitmap typeface. Glyph matrices hold 0/1 and all share `height` rows.
struct SynthFont {
  std::string name;
  int height = 0;
  int spacing = 1;  // blank columns between neighbouring glyphs
  std::map<char32_t, Eigen::MatrixXd> glyphs;

  CharSet alphabet() const;
  bool supports(char32_t c) const { return glyphs.count(c) > 0; }
};

// Built-in typefaces. Both cover a-z, space, '.' and ','. "A" is a light
// roman face with œ and ß; "B" is a bold face with its own a, e, g, k, t, y
// and the exclusive characters é and ü. Glyphs are drawn on a 5x9 grid and
// scaled by an integer factor to fit `height` (at least 9).
SynthFont builtin_font(std::string_view name, int height, int x_scale = 1);

// Glyphs left to right with round(spacing * spacing_scale) blank columns
// between neighbours. Throws on unsupported characters and empty text.
LineImage render_line(std::u32string_view text, const SynthFont& font,
                      double spacing_scale = 1.0);

struct DegradeParams {
  double pixel_noise_std = 0.0;  // additive Gaussian noise
  int blur_radius = 0;           // box blur half-width
  int jitter = 0;                // max vertical shift of the whole line
  std::uint64_t seed = 0;
};

// Shift, blur, add noise, clamp to [0,1]; in that order.
LineImage degrade(const LineImage& line, const DegradeParams& params);

// Words of uniformly drawn length in [min_word, max_word] over `alphabet`,
// separated by single spaces, stopping once `length` characters are reached.
std::u32string sample_text(std::uint64_t seed, std::size_t length,
                           const CharSet& alphabet, std::size_t min_word,
                           std::size_t max_word);

struct CorpusSpec {
  std::string font = "A";
  int height = 32;
  int x_scale = 1;
  std::size_t n_lines = 100;
  std::size_t line_length = 16;
  std::size_t min_word = 2;
  std::size_t max_word = 7;
  double spacing_scale = 1.0;
  DegradeParams degrade;  // degrade.seed is replaced per line
  std::uint64_t seed = 0;
};

// Writes n_lines image/text pairs plus manifest.json into `out_dir`
// (created if needed). Returns the manifest text.
std::string generate_corpus(const CorpusSpec& spec,
                            const std::filesystem::path& out_dir);

std::string corpus_manifest(const CorpusSpec& spec);
CorpusSpec parse_corpus_manifest(std::string_view manifest_json);

}  // namespace ocrtl
