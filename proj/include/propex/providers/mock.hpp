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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "propex/providers/provider.hpp"

namespace propex {

/// Deterministic offline embedding. Lowercased word unigrams and bigrams are
/// hashed (with `seed`) into `dim` signed buckets and the result is L2-normalised,
/// so texts sharing more tokens have higher cosine similarity. Requires dim >= 8.
EmbeddingVector mock_embed(std::string_view text, int dim, std::uint64_t seed);

class MockEmbeddingProvider : public EmbeddingProvider {
public:
    explicit MockEmbeddingProvider(int dim = 256, std::uint64_t seed = 0);

    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::string model_id() const override;

private:
    int dim_;
    std::uint64_t seed_;
};

/// Offline chat model. Responses come from, in order:
///  1. fixtures: the first fixture whose `contains` text occurs in the request;
///  2. a rule-based responder that understands the built-in prompt templates
///     (entity extraction, triple extraction, fact gating, answering);
///  3. a fixed acknowledgement derived from the request digest.
/// Every response is a pure function of (system_text, user_text).
class MockChatProvider : public ChatProvider {
public:
    struct Fixture {
        std::string contains;
        std::string response;
    };

    MockChatProvider() = default;
    explicit MockChatProvider(std::vector<Fixture> fixtures) : fixtures_(std::move(fixtures)) {}

    /// One JSON object per line: {"contains": "...", "response": "..."}.
    static MockChatProvider from_fixture_file(const std::filesystem::path& file);

    void add_fixture(std::string contains, std::string response);

    std::string complete(const ChatRequest& request) override;
    std::string model_id() const override { return "mock-chat"; }

private:
    std::vector<Fixture> fixtures_;
};

namespace mock_rules {

/// Capitalised-phrase entity spotter used by the rule-based responder.
std::vector<std::string> spot_entities(std::string_view title, std::string_view text);

/// Sentence-level co-occurrence triples between the given entity names.
std::vector<std::string> spot_triples(std::string_view text, const std::vector<std::string>& entities);

}  // namespace mock_rules

}  // namespace propex
