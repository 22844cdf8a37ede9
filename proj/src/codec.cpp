///////////////////////////////////////////////////////////////////////
// File:        codec.cpp
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

#include "codec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "unicode.hpp"

namespace ocrtl {

bool CodecDelta::is_identity() const {
  if (!added.empty() || !removed.empty()) return false;
  return std::all_of(retained.begin(), retained.end(),
                     [](const auto& p) { return p.first == p.second; });
}

Codec::Codec() : Codec(from_symbols({kBlank, kSpace}, {})) {}

Codec Codec::from_symbols(std::vector<char32_t> symbols, CharSet immune) {
  if (symbols.empty() || symbols.front() != kBlank) {
    throw invalid_argument("codec must start with the blank symbol");
  }
  Codec codec{Empty{}};
  codec.index_.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!codec.index_.emplace(symbols[i], static_cast<Label>(i)).second) {
      throw invalid_argument("duplicate codec symbol " +
                             describe_char(symbols[i]));
    }
  }
  codec.symbols_ = std::move(symbols);
  immune.insert(kBlank);
  immune.insert(kSpace);
  codec.immune_ = std::move(immune);
  return codec;
}

char32_t Codec::symbol(Label index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= symbols_.size()) {
    throw invalid_argument("label " + std::to_string(index) +
                           " outside codec of size " +
                           std::to_string(symbols_.size()));
  }
  return symbols_[static_cast<std::size_t>(index)];
}

std::optional<Label> Codec::index_of(char32_t c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Codec Codec::with_immune(CharSet immune) const {
  return from_symbols(symbols_, std::move(immune));
}

std::vector<Label> Codec::encode(std::u32string_view text) const {
  std::vector<Label> labels;
  labels.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    auto idx = index_of(text[pos]);
    if (!idx || *idx == kBlankLabel) {
      throw Error(ErrorKind::kBlindSpot,
                  "character not in codec: " + describe_char(text[pos]) +
                      " at position " + std::to_string(pos));
    }
    labels.push_back(*idx);
  }
  return labels;
}

std::u32string Codec::decode(std::span<const Label> labels) const {
  std::u32string text;
  text.reserve(labels.size());
  for (Label l : labels) {
    if (l == kBlankLabel) continue;
    text.push_back(symbol(l));
  }
  return text;
}

CharSet chars_of(std::span<const std::u32string> texts) {
  CharSet chars;
  for (const auto& t : texts) chars.insert(t.begin(), t.end());
  return chars;
}

Codec build_codec(std::span<const std::u32string> texts,
                  const CharSet& whitelist) {
  CharSet all = chars_of(texts);
  all.insert(whitelist.begin(), whitelist.end());
  all.insert(kSpace);
  all.erase(kBlank);
  std::vector<char32_t> symbols{kBlank};
  symbols.insert(symbols.end(), all.begin(), all.end());
  return Codec::from_symbols(std::move(symbols), whitelist);
}

namespace {

std::vector<std::pair<Label, Label>> identity_map(std::size_t n) {
  std::vector<std::pair<Label, Label>> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = {static_cast<Label>(i), static_cast<Label>(i)};
  }
  return m;
}

}  // namespace

std::pair<Codec, CodecDelta> extend(const Codec& codec,
                                    const CharSet& new_chars) {
  if (new_chars.count(kBlank)) {
    throw invalid_argument("the blank symbol is reserved and cannot be added");
  }
  CodecDelta delta;
  delta.retained = identity_map(codec.size());
  std::vector<char32_t> symbols = codec.symbols();
  for (char32_t c : new_chars) {  // CharSet iterates in code point order
    if (codec.contains(c)) continue;
    delta.added.emplace_back(c, static_cast<Label>(symbols.size()));
    symbols.push_back(c);
  }
  return {Codec::from_symbols(std::move(symbols), codec.immune()),
          std::move(delta)};
}

std::pair<Codec, CodecDelta> reduce(const Codec& codec, const CharSet& keep) {
  CodecDelta delta;
  std::vector<char32_t> symbols;
  const auto& old = codec.symbols();
  for (std::size_t i = 0; i < old.size(); ++i) {
    const char32_t c = old[i];
    if (keep.count(c) || codec.is_immune(c)) {
      delta.retained.emplace_back(static_cast<Label>(i),
                                  static_cast<Label>(symbols.size()));
      symbols.push_back(c);
    } else {
      delta.removed.emplace_back(c, static_cast<Label>(i));
    }
  }
  return {Codec::from_symbols(std::move(symbols), codec.immune()),
          std::move(delta)};
}

CodecDelta diff(const Codec& from, const Codec& to) {
  CodecDelta delta;
  const auto& old = from.symbols();
  Label next = 0;
  for (std::size_t i = 0; i < old.size(); ++i) {
    if (to.contains(old[i])) {
      delta.retained.emplace_back(static_cast<Label>(i), next++);
    } else {
      delta.removed.emplace_back(old[i], static_cast<Label>(i));
    }
  }
  CharSet fresh;
  for (char32_t c : to.symbols()) {
    if (!from.contains(c)) fresh.insert(c);
  }
  for (char32_t c : fresh) delta.added.emplace_back(c, next++);
  return delta;
}

Codec apply_delta(const Codec& source, const CodecDelta& delta) {
  const std::size_t n_old = source.size();
  if (delta.retained.size() + delta.removed.size() != n_old) {
    throw invalid_argument("codec delta does not cover the source codec (" +
                           std::to_string(delta.retained.size()) + " kept + " +
                           std::to_string(delta.removed.size()) +
                           " removed != " + std::to_string(n_old) + ")");
  }
  const std::size_t n_new = delta.target_size();
  std::vector<char32_t> symbols(n_new, kBlank);
  std::vector<bool> seen_old(n_old, false), seen_new(n_new, false);
  auto claim = [&](std::vector<bool>& seen, Label i, const char* what) {
    if (i < 0 || static_cast<std::size_t>(i) >= seen.size() || seen[i]) {
      throw invalid_argument(std::string("codec delta has an invalid or "
                                         "repeated ") +
                             what + " index " + std::to_string(i));
    }
    seen[i] = true;
  };
  for (const auto& [c, old_i] : delta.removed) {
    claim(seen_old, old_i, "removed");
    if (source.symbol(old_i) != c) {
      throw invalid_argument("codec delta removes " + describe_char(c) +
                             " at index " + std::to_string(old_i) +
                             " but the codec holds " +
                             describe_char(source.symbol(old_i)) + " there");
    }
    if (c == kBlank) throw invalid_argument("codec delta removes the blank");
  }
  for (const auto& [old_i, new_i] : delta.retained) {
    claim(seen_old, old_i, "retained source");
    claim(seen_new, new_i, "retained target");
    symbols[new_i] = source.symbol(old_i);
  }
  for (const auto& [c, new_i] : delta.added) {
    claim(seen_new, new_i, "added");
    if (source.contains(c)) {
      throw invalid_argument("codec delta adds " + describe_char(c) +
                             " which is already present");
    }
    symbols[new_i] = c;
  }
  if (symbols.front() != kBlank || !delta.retained.size() ||
      delta.retained.front() != std::pair<Label, Label>{0, 0}) {
    throw invalid_argument("codec delta must keep the blank at index 0");
  }
  return Codec::from_symbols(std::move(symbols), source.immune());
}

CharSet default_whitelist() {
  CharSet wl;
  for (char32_t c = U'a'; c <= U'z'; ++c) wl.insert(c);
  for (char32_t c = U'A'; c <= U'Z'; ++c) wl.insert(c);
  for (char32_t c = U'0'; c <= U'9'; ++c) wl.insert(c);
  return wl;
}

CharSet parse_whitelist_spec(std::string_view spec) {
  if (spec == "default") return default_whitelist();
  if (spec == "none" || spec.empty()) return {};
  std::u32string chars;
  if (spec.substr(0, 5) == "file:") {
    const std::string path(spec.substr(5));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::kIo, "cannot read whitelist file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    chars = nfc_from_utf8(buf.str());
  } else {
    chars = nfc_from_utf8(spec);
  }
  CharSet wl;
  for (char32_t c : chars) {
    if (c != U'\n' && c != U'\r' && c != kBlank) wl.insert(c);
  }
  return wl;
}

}  // namespace ocrtl
