/*
 * Copyright 2026 The Propex Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace propex::text {

std::string trim(std::string_view s);

/// Replaces every run of whitespace with a single space and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

/// Full Unicode lowercase mapping (root locale).
std::string to_lower_unicode(std::string_view s);

/// Entity canonical form: Unicode NFKC, lowercase, whitespace collapsed.
std::string canonicalize(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lowercased word tokens. A word is a maximal run of ASCII alphanumerics or
/// non-ASCII bytes; everything else separates.
std::vector<std::string> word_tokens(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace propex::text
