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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace propex {

/// Standard extractive-QA normalisation: lowercase, drop ASCII punctuation,
/// drop the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view s);

int exact_match(std::string_view prediction, std::string_view gold);

/// F1 over the multiset of normalised tokens. Both empty -> 1, one empty -> 0.
double token_f1(std::string_view prediction, std::string_view gold);

/// 1 if any of the first k ranked ids is gold, else 0. nullopt (unscorable) for empty gold.
std::optional<int> recall_at_k(std::span<const std::string> ranked, const std::set<std::string>& gold, int k);

}  // namespace propex
