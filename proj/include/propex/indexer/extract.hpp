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
#include <string>
#include <string_view>
#include <vector>

#include "propex/common/prompts.hpp"
#include "propex/indexer/types.hpp"
#include "propex/providers/provider.hpp"

namespace propex {

struct ExtractedEntity {
    std::string surface_form;
    std::string canonical_name;

    friend bool operator==(const ExtractedEntity&, const ExtractedEntity&) = default;
};

struct EntityExtraction {
    std::vector<ExtractedEntity> entities;
    std::vector<std::string> warnings;
};

struct TripleExtraction {
    std::vector<FactTriple> triples;  // embeddings are not filled in yet
    std::vector<std::string> warnings;
};

/// Parses an entity list reply ("a; b", "a, b", one per line, or a JSON array).
/// Returns nullopt when the reply is not a list of short names.
std::optional<std::vector<std::string>> parse_entity_list(std::string_view reply);

struct RawTriple {
    std::string subject;
    std::string predicate;
    std::string object;
};

/// Parses "(s | p | o)" lines; other lines are ignored. Returns nullopt when
/// the reply contains no triple line and is not "NONE".
std::optional<std::vector<RawTriple>> parse_triple_lines(std::string_view reply);

/// Prompted entity extraction with one reprompt on an unparseable reply.
/// Results are deduplicated by canonical name in first-seen order.
EntityExtraction extract_entities(const Passage& passage, ChatProvider& chat, const PromptTemplate& prompt);

/// Prompted triple extraction. Triples whose subject or object is not in
/// `entities` are dropped with a warning. No provider call for an empty entity list.
TripleExtraction extract_triples(const Passage& passage, const std::vector<ExtractedEntity>& entities,
                                 ChatProvider& chat, const PromptTemplate& prompt);

}  // namespace propex
