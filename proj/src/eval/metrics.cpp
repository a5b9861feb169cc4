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


#include "propex/eval/metrics.hpp"

#include <map>
#include <string_view>

#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

namespace {

constexpr std::string_view kPunctuation = R"(!"#$%&'()*+,-./:;<=>?@[\]^_`{|}~)";

std::vector<std::string> normalized_tokens(std::string_view s) {
    auto n = normalize_answer(s);
    if (n.empty()) return {};
    return text::split(n, ' ');
}

}  // namespace

std::string normalize_answer(std::string_view s) {
    std::string lowered = text::to_lower_unicode(s);
    std::string no_punct;
    no_punct.reserve(lowered.size());
    for (char c : lowered) {
        if (kPunctuation.find(c) == std::string_view::npos) no_punct.push_back(c);
    }
    std::vector<std::string> kept;
    for (auto& tok : text::split(text::collapse_whitespace(no_punct), ' ')) {
        if (tok.empty() || tok == "a" || tok == "an" || tok == "the") continue;
        kept.push_back(std::move(tok));
    }
    return text::join(kept, " ");
}

int exact_match(std::string_view prediction, std::string_view gold) {
    return normalize_answer(prediction) == normalize_answer(gold) ? 1 : 0;
}

double token_f1(std::string_view prediction, std::string_view gold) {
    auto pred = normalized_tokens(prediction);
    auto ref = normalized_tokens(gold);
    if (pred.empty() || ref.empty()) return pred.empty() && ref.empty() ? 1.0 : 0.0;
    std::map<std::string, int> counts;
    for (const auto& t : ref) ++counts[t];
    int same = 0;
    for (const auto& t : pred) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++same;
        }
    }
    if (same == 0) return 0.0;
    double precision = 1.0 * same / static_cast<double>(pred.size());
    double recall = 1.0 * same / static_cast<double>(ref.size());
    return (2 * precision * recall) / (precision + recall);
}

std::optional<int> recall_at_k(std::span<const std::string> ranked, const std::set<std::string>& gold, int k) {
    if (k < 1) throw UsageError("recall@k needs k >= 1");
    if (gold.empty()) return std::nullopt;
    auto n = std::min(ranked.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        if (gold.contains(ranked[i])) return 1;
    }
    return 0;
}

}  // namespace propex
