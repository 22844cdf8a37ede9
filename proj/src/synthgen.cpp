///////////////////////////////////////////////////////////////////////
// File:        synthgen.cpp
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

#include "synthgen.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "seeds.hpp"
#include "unicode.hpp"

namespace ocrtl {

namespace {

constexpr int kGridRows = 9;

struct GlyphDef {
  char32_t ch;
  const char* rows[kGridRows];
};

// Rows 0-1 ascenders and accents, 2-6 x-height, 7-8 descenders.
const GlyphDef kRoman[] = {
    {U'a', {".....", ".....", ".###.", "....#", ".####", "#...#", ".####", ".....", "....."}},
    {U'b', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "####.", ".....", "....."}},
    {U'c', {".....", ".....", ".###.", "#....", "#....", "#....", ".###.", ".....", "....."}},
    {U'd', {"....#", "....#", ".####", "#...#", "#...#", "#...#", ".####", ".....", "....."}},
    {U'e', {".....", ".....", ".###.", "#...#", "#####", "#....", ".###.", ".....", "....."}},
    {U'f', {"..##.", ".#...", "####.", ".#...", ".#...", ".#...", ".#...", ".....", "....."}},
    {U'g', {".....", ".....", ".####", "#...#", "#...#", ".####", "....#", "....#", ".###."}},
    {U'h', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#", ".....", "....."}},
    {U'i', {".#.", "...", "##.", ".#.", ".#.", ".#.", "###", "...", "..."}},
    {U'j', {"..#", "...", ".##", "..#", "..#", "..#", "..#", "#.#", ".#."}},
    {U'k', {"#...", "#...", "#..#", "#.#.", "##..", "#.#.", "#..#", "....", "...."}},
    {U'l', {"##.", ".#.", ".#.", ".#.", ".#.", ".#.", "###", "...", "..."}},
    {U'm', {".....", ".....", "##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#", ".....", "....."}},
    {U'n', {".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#", ".....", "....."}},
    {U'o', {".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###.", ".....", "....."}},
    {U'p', {".....", ".....", "####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {U'q', {".....", ".....", ".####", "#...#", "#...#", ".####", "....#", "....#", "....#"}},
    {U'r', {".....", ".....", "#.##.", "##..#", "#....", "#....", "#....", ".....", "....."}},
    {U's', {".....", ".....", ".####", "#....", ".###.", "....#", "####.", ".....", "....."}},
    {U't', {".#...", ".#...", "####.", ".#...", ".#...", ".#..#", "..##.", ".....", "....."}},
    {U'u', {".....", ".....", "#...#", "#...#", "#...#", "#..##", ".##.#", ".....", "....."}},
    {U'v', {".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#..", ".....", "....."}},
    {U'w', {".....", ".....", "#...#", "#...#", "#.#.#", "#.#.#", ".#.#.", ".....", "....."}},
    {U'x', {".....", ".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", ".....", "....."}},
    {U'y', {".....", ".....", "#...#", "#...#", "#...#", ".####", "....#", "....#", ".###."}},
    {U'z', {".....", ".....", "#####", "...#.", "..#..", ".#...", "#####", ".....", "....."}},
    {U'.', {"..", "..", "..", "..", "..", "##", "##", "..", ".."}},
    {U',', {"..", "..", "..", "..", "..", "##", "##", ".#", "#."}},
    {U' ', {"...", "...", "...", "...", "...", "...", "...", "...", "..."}},
};

const GlyphDef kRomanOnly[] = {
    {U'œ', {".......", ".......", ".##.##.", "#..#..#", "#..####", "#..#...", ".##.###", ".......", "......."}},
    {U'ß', {".##..", "#..#.", "#..#.", "#.#..", "#..#.", "#...#", "#.##.", ".....", "....."}},
};

// Face B redraws a few letters before emboldening.
const GlyphDef kBoldVariants[] = {
    {U'a', {".....", ".....", ".####", "#...#", "#...#", "#..##", ".##.#", ".....", "....."}},
    {U'e', {".....", ".....", ".###.", "#...#", "####.", "#....", ".####", ".....", "....."}},
    {U'g', {".....", ".....", ".###.", "#...#", "#...#", ".####", "....#", "#...#", ".###."}},
    {U'k', {"#....", "#....", "#...#", "#..#.", "###..", "#..#.", "#...#", ".....", "....."}},
    {U't', {".....", "..#..", "#####", "..#..", "..#..", "..#..", "...##", ".....", "....."}},
    {U'y', {".....", ".....", "#...#", "#...#", ".#.#.", "..#..", ".#...", "#....", "....."}},
    {U'é', {"...#.", "..#..", ".###.", "#...#", "####.", "#....", ".####", ".....", "....."}},
    {U'ü', {".#.#.", ".....", "#...#", "#...#", "#...#", "#..##", ".##.#", ".....", "....."}},
};

Eigen::MatrixXd grid(const GlyphDef& def) {
  const auto w = static_cast<Eigen::Index>(std::string_view(def.rows[0]).size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kGridRows, w);
  for (int r = 0; r < kGridRows; ++r) {
    const std::string_view row(def.rows[r]);
    for (Eigen::Index c = 0; c < w && c < static_cast<Eigen::Index>(row.size()); ++c) {
      m(r, c) = row[c] == '#' ? 1.0 : 0.0;
    }
  }
  return m;
}

// Every stroke one column wider.
Eigen::MatrixXd embolden(const Eigen::MatrixXd& g) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.rows(), g.cols() + 1);
  out.leftCols(g.cols()) = g;
  out.rightCols(g.cols()) = out.rightCols(g.cols()).cwiseMax(g);
  return out;
}

Eigen::MatrixXd place(const Eigen::MatrixXd& g, int height, int y_scale,
                      int x_scale, int top) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(height, g.cols() * x_scale);
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      if (g(r, c) == 0.0) continue;
      out.block(top + r * y_scale, c * x_scale, y_scale, x_scale).setOnes();
    }
  }
  return out;
}

}  // namespace

CharSet SynthFont::alphabet() const {
  CharSet s;
  for (const auto& [c, g] : glyphs) s.insert(c);
  return s;
}

SynthFont builtin_font(std::string_view name, int height, int x_scale) {
  if (height < kGridRows) {
    throw invalid_argument("font height must be at least " +
                           std::to_string(kGridRows) + " pixels");
  }
  if (x_scale < 1) throw invalid_argument("x_scale must be positive");
  const bool bold = (name == "B");
  if (!bold && name != "A") {
    throw invalid_argument("unknown built-in font '" + std::string(name) +
                           "' (expected A or B)");
  }
  std::map<char32_t, Eigen::MatrixXd> grids;
  for (const auto& def : kRoman) grids[def.ch] = grid(def);
  if (bold) {
    for (const auto& def : kBoldVariants) grids[def.ch] = grid(def);
    for (auto& [c, g] : grids) {
      if (c != kSpace) g = embolden(g);
    }
  } else {
    for (const auto& def : kRomanOnly) grids[def.ch] = grid(def);
  }

  const int y_scale = height / kGridRows;
  const int slack = height - y_scale * kGridRows;
  // B sits one row lower than A.
  const int top = std::min(slack, slack / 2 + (bold ? 1 : 0));
  SynthFont font;
  font.name = std::string(name);
  font.height = height;
  font.spacing = x_scale;
  for (const auto& [c, g] : grids) {
    font.glyphs[c] = place(g, height, y_scale, x_scale, top);
  }
  return font;
}

LineImage render_line(std::u32string_view text, const SynthFont& font,
                      double spacing_scale) {
  if (text.empty()) throw invalid_argument("cannot render an empty line");
  if (!(spacing_scale >= 0.0)) throw invalid_argument("spacing scale must be >= 0");
  const auto gap = static_cast<Eigen::Index>(std::lround(font.spacing * spacing_scale));
  std::vector<const Eigen::MatrixXd*> glyphs;
  Eigen::Index width = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto it = font.glyphs.find(text[i]);
    if (it == font.glyphs.end()) {
      throw invalid_argument("font " + font.name + " has no glyph for " +
                             describe_char(text[i]) + " at position " +
                             std::to_string(i));
    }
    glyphs.push_back(&it->second);
    width += it->second.cols();
  }
  width += gap * static_cast<Eigen::Index>(glyphs.size() - 1);
  LineImage line{Eigen::MatrixXd::Zero(font.height, width)};
  Eigen::Index x = 0;
  for (const auto* g : glyphs) {
    line.pixels.middleCols(x, g->cols()) = *g;
    x += g->cols() + gap;
  }
  return line;
}

LineImage degrade(const LineImage& line, const DegradeParams& params) {
  if (params.pixel_noise_std < 0 || params.blur_radius < 0 || params.jitter < 0 ||
      !std::isfinite(params.pixel_noise_std)) {
    throw invalid_argument("degradation parameters must be finite and >= 0");
  }
  std::mt19937_64 rng(params.seed);
  Eigen::MatrixXd img = line.pixels;
  const auto h = img.rows(), w = img.cols();

  if (params.jitter > 0) {
    std::uniform_int_distribution<int> shift_dist(-params.jitter, params.jitter);
    const int shift = shift_dist(rng);
    Eigen::MatrixXd shifted = Eigen::MatrixXd::Zero(h, w);
    for (Eigen::Index y = 0; y < h; ++y) {
      const Eigen::Index src = y - shift;
      if (src >= 0 && src < h) shifted.row(y) = img.row(src);
    }
    img = std::move(shifted);
  }

  if (params.blur_radius > 0) {
    const int r = params.blur_radius;
    auto box = [r](const Eigen::MatrixXd& in, bool along_rows) {
      Eigen::MatrixXd out(in.rows(), in.cols());
      const Eigen::Index n = along_rows ? in.cols() : in.rows();
      for (Eigen::Index i = 0; i < in.rows(); ++i) {
        for (Eigen::Index j = 0; j < in.cols(); ++j) {
          const Eigen::Index pos = along_rows ? j : i;
          double sum = 0;
          for (int k = -r; k <= r; ++k) {
            const Eigen::Index q = std::clamp<Eigen::Index>(pos + k, 0, n - 1);
            sum += along_rows ? in(i, q) : in(q, j);
          }
          out(i, j) = sum / (2 * r + 1);
        }
      }
      return out;
    };
    img = box(box(img, true), false);
  }

  if (params.pixel_noise_std > 0) {
    std::normal_distribution<double> noise(0.0, params.pixel_noise_std);
    for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] += noise(rng);
  }
  return {img.cwiseMax(0.0).cwiseMin(1.0)};
}

std::u32string sample_text(std::uint64_t seed, std::size_t length,
                           const CharSet& alphabet, std::size_t min_word,
                           std::size_t max_word) {
  std::vector<char32_t> letters;
  for (char32_t c : alphabet) {
    if (c != kSpace && c != kBlank) letters.push_back(c);
  }
  if (letters.empty()) throw invalid_argument("text alphabet is empty");
  if (min_word < 1 || max_word < min_word) {
    throw invalid_argument("word length range must satisfy 1 <= min <= max");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> word_len(min_word, max_word);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::u32string text;
  while (text.size() < std::max<std::size_t>(length, 1)) {
    if (!text.empty()) text.push_back(kSpace);
    const std::size_t n = word_len(rng);
    for (std::size_t i = 0; i < n; ++i) text.push_back(letters[pick(rng)]);
  }
  return text;
}

std::string corpus_manifest(const CorpusSpec& spec) {
  nlohmann::json j;
  j["format"] = "ocrtl-synth";
  j["version"] = 1;
  j["font"] = spec.font;
  j["height"] = spec.height;
  j["x_scale"] = spec.x_scale;
  j["n_lines"] = spec.n_lines;
  j["line_length"] = spec.line_length;
  j["min_word"] = spec.min_word;
  j["max_word"] = spec.max_word;
  j["spacing_scale"] = spec.spacing_scale;
  j["seed"] = spec.seed;
  j["degrade"] = {{"pixel_noise_std", spec.degrade.pixel_noise_std},
                  {"blur_radius", spec.degrade.blur_radius},
                  {"jitter", spec.degrade.jitter}};
  return j.dump(2) + "\n";
}

CorpusSpec parse_corpus_manifest(std::string_view manifest_json) {
  try {
    const auto j = nlohmann::json::parse(manifest_json);
    CorpusSpec spec;
    spec.font = j.at("font").get<std::string>();
    spec.height = j.at("height").get<int>();
    spec.x_scale = j.value("x_scale", 1);
    spec.n_lines = j.at("n_lines").get<std::size_t>();
    spec.line_length = j.at("line_length").get<std::size_t>();
    spec.min_word = j.at("min_word").get<std::size_t>();
    spec.max_word = j.at("max_word").get<std::size_t>();
    spec.spacing_scale = j.at("spacing_scale").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    const auto& d = j.at("degrade");
    spec.degrade.pixel_noise_std = d.at("pixel_noise_std").get<double>();
    spec.degrade.blur_radius = d.at("blur_radius").get<int>();
    spec.degrade.jitter = d.at("jitter").get<int>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("bad corpus manifest: ") + e.what());
  }
}

std::string generate_corpus(const CorpusSpec& spec,
                            const std::filesystem::path& out_dir) {
  const SynthFont font = builtin_font(spec.font, spec.height, spec.x_scale);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, "cannot create " + out_dir.string() + ": " +
                                    ec.message());
  }
  const CharSet alphabet = font.alphabet();
  for (std::size_t i = 0; i < spec.n_lines; ++i) {
    const std::u32string text =
        sample_text(derive_seed(spec.seed, {1, i}), spec.line_length, alphabet,
                    spec.min_word, spec.max_word);
    DegradeParams d = spec.degrade;
    d.seed = derive_seed(spec.seed, {2, i});
    const LineImage line = degrade(render_line(text, font, spec.spacing_scale), d);
    write_sample(out_dir, i, line, text);
  }
  const std::string manifest = corpus_manifest(spec);
  write_text_file(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace ocrtl
