///////////////////////////////////////////////////////////////////////
// File:        codec.hpp
// Description: Character set of a recognizer: symbol table, immune set, diffs.
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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ocrtl {

using Label = std::int32_t;
using CharSet = std::set<char32_t>;

// The CTC blank. U+0000 never appears in transcriptions, and sorting by code
// point keeps it at index 0 without special casing.
inline constexpr char32_t kBlank = U'\0';
inline constexpr char32_t kSpace = U' ';
inline constexpr Label kBlankLabel = 0;

// Records how one codec turns into another: which symbols appear, which
// disappear, and where every surviving symbol moves.
struct CodecDelta {
  std::vector<std::pair<char32_t, Label>> added;    // (char, new index)
  std::vector<std::pair<char32_t, Label>> removed;  // (char, old index)
  std::vector<std::pair<Label, Label>> retained;    // old index -> new index

  // True when nothing is added or removed and every index maps to itself.
  bool is_identity() const;
  std::size_t target_size() const { return retained.size() + added.size(); }
};

// Bijection between recognizable characters and network output rows.
// Immutable once built.
class Codec {
 public:
  // {blank, space} with an immune set of {blank, space}.
  Codec();

  // Validates: blank first, no duplicates. Blank and space are always added
  // to the immune set.
  static Codec from_symbols(std::vector<char32_t> symbols, CharSet immune);

  std::size_t size() const { return symbols_.size(); }
  const std::vector<char32_t>& symbols() const { return symbols_; }
  const CharSet& immune() const { return immune_; }
  char32_t symbol(Label index) const;
  std::optional<Label> index_of(char32_t c) const;
  bool contains(char32_t c) const { return index_of(c).has_value(); }
  bool is_immune(char32_t c) const { return immune_.count(c) > 0; }

  // Same symbols, replaced immune set (blank and space stay immune).
  Codec with_immune(CharSet immune) const;

  // Throws Error(kBlindSpot) naming the first unknown character and its
  // position. Never emits the blank label.
  std::vector<Label> encode(std::u32string_view text) const;
  std::u32string decode(std::span<const Label> labels) const;

  bool operator==(const Codec& other) const {
    return symbols_ == other.symbols_ && immune_ == other.immune_;
  }

 private:
  struct Empty {};
  explicit Codec(Empty) {}

  std::vector<char32_t> symbols_;
  CharSet immune_;
  std::unordered_map<char32_t, Label> index_;
};

// Symbols: blank, then the union of space, whitelist and every character in
// `texts`, ascending by code point. Immune: blank, space and the whitelist.
// Texts are expected to be NFC already.
Codec build_codec(std::span<const std::u32string> texts,
                  const CharSet& whitelist);

// Appends genuinely new characters in code point order; existing indices
// never move. Adding the blank throws.
std::pair<Codec, CodecDelta> extend(const Codec& codec,
                                    const CharSet& new_chars);

// Drops every symbol that is neither in `keep` nor immune. Survivors keep
// their relative order.
std::pair<Codec, CodecDelta> reduce(const Codec& codec, const CharSet& keep);

// Delta that turns `from`'s symbol set into `to`'s via extend-then-reduce.
CodecDelta diff(const Codec& from, const Codec& to);

// Target codec obtained by applying `delta` to `source`. Throws
// Error(kInvalidArgument) when the delta does not describe `source`.
Codec apply_delta(const Codec& source, const CodecDelta& delta);

// Whitelist of a-z, A-Z and 0-9.
CharSet default_whitelist();

// "default", "none", "file:<path>" (every non-newline character of the
// NFC-normalized file) or a literal string of characters.
CharSet parse_whitelist_spec(std::string_view spec);

CharSet chars_of(std::span<const std::u32string> texts);

}  // namespace ocrtl
