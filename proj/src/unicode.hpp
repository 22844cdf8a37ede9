///////////////////////////////////////////////////////////////////////
// File:        unicode.hpp
// Description: UTF-8 handling and NFC normalization.
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

#include <string>
#include <string_view>

namespace ocrtl {

// UTF-8 -> code points. Throws Error(kInvalidArgument) on malformed input.
std::u32string utf8_to_u32(std::string_view utf8);
std::string u32_to_utf8(std::u32string_view text);
std::string u32_to_utf8(char32_t c);

// Canonical composition, so "e" + U+0302 and U+00EA become the same symbol.
std::u32string nfc(std::u32string_view text);
std::u32string nfc_from_utf8(std::string_view utf8);

// Printable form for diagnostics: the character itself plus U+XXXX.
std::string describe_char(char32_t c);

}  // namespace ocrtl
