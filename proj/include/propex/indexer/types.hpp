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

#include "propex/providers/embedding.hpp"

namespace propex {

struct Passage {
    std::string id;
    std::string title;
    std::string text;

    friend bool operator==(const Passage&, const Passage&) = default;
};

struct EntityNode {
    std::string id;  // equal to canonical_name
    std::string canonical_name;
    std::vector<std::string> surface_forms;  // sorted, unique
    int passage_frequency = 0;
    double node_score = 0.0;

    friend bool operator==(const EntityNode&, const EntityNode&) = default;
};

struct FactTriple {
    std::string id;
    std::string subject;  // entity id
    std::string predicate;
    std::string object;  // entity id
    std::string source_passage;
    EmbeddingVector embedding;

    /// "subject | predicate | object", the string that gets embedded.
    std::string rendered() const;

    friend bool operator==(const FactTriple&, const FactTriple&) = default;
};

enum class EdgeKind { Synonymy, Relatedness, MentionedIn };

std::string_view to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(std::string_view s);

/// Synonymy and Relatedness run entity -> entity; MentionedIn runs entity -> passage.
struct TypedEdge {
    std::string src;
    std::string dst;
    EdgeKind kind;
    double weight;

    friend bool operator==(const TypedEdge&, const TypedEdge&) = default;
};

std::string render_triple(std::string_view subject, std::string_view predicate, std::string_view object);

}  // namespace propex
