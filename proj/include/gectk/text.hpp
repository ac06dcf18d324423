/*
 * Copyright 2026 The gectk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gectk {

using Tokens = std::vector<std::string>;

/// Splits on runs of ASCII whitespace (space, \t, \n, \v, \f, \r).
/// Every other byte is kept verbatim, so pre-tokenized text round-trips.
Tokens tokenize(std::string_view raw);

std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

/// Decodes UTF-8 into code points. Invalid sequences decode byte-wise
/// as U+FFFD so that comparisons stay total.
std::u32string decode_utf8(std::string_view s);

/// True when cp is in Unicode general category P* (Pc Pd Ps Pe Pi Pf Po).
bool is_punct_codepoint(char32_t cp);

/// True when the token is non-empty and every code point is punctuation.
bool is_punct_token(std::string_view token);

/// Simple case fold: ASCII, Latin-1 Supplement, Greek and Cyrillic
/// upper-case blocks map to lower case. Everything else is unchanged.
char32_t fold_case(char32_t cp);
std::u32string fold_case(std::u32string_view s);

/// Levenshtein distance over code points.
std::size_t char_edit_distance(std::u32string_view a, std::u32string_view b);

}  // namespace gectk
