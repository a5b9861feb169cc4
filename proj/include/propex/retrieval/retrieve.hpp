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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "propex/common/prompts.hpp"
#include "propex/indexer/graph_index.hpp"
#include "propex/providers/provider.hpp"
#include "propex/retrieval/params.hpp"
#include "propex/retrieval/ppr.hpp"
#include "propex/retrieval/trace.hpp"

namespace propex {

struct ScoredTriple {
    std::size_t triple;  // index into GraphIndex::triples()
    double cosine;
};

/// Exhaustive top-k triples by cosine to the query, descending; ties by ascending triple id.
std::vector<ScoredTriple> retrieve_candidate_triples(const EmbeddingVector& query, const GraphIndex& index,
                                                     int k);

struct GateResult {
    std::vector<FactTriple> kept;  // subset of the candidates, original order
    bool fail_open = false;
    std::vector<std::string> warnings;
};

/// Parses "keep: 1, 3" / "keep: none" / "keep: all" into 0-based positions.
/// nullopt when no keep line is present or any number is out of range.
std::optional<std::vector<std::size_t>> parse_keep_reply(std::string_view reply, std::size_t candidates);

/// Keep-drop gating. An unparseable reply gets one reprompt; if that fails too,
/// every candidate is kept and the result is flagged fail_open.
GateResult filter_facts(const std::string& query, const std::vector<FactTriple>& candidates, ChatProvider& chat,
                        const PromptTemplate& prompt);

/// Subjects and objects of the kept triples, deduplicated in first-appearance order.
std::vector<std::string> seed_entities(std::span<const FactTriple> kept);

/// (seeds mentioned in the passage + kept triples sourced from it) / (|seeds| + |kept|).
double overlap(std::size_t passage, std::span<const std::string> seeds, std::span<const FactTriple> kept,
               const GraphIndex& index);

/// Passage ranking by min-max normalised PPR score plus lambda_rerank * overlap;
/// ties by ascending passage id; top `k`.
std::vector<RankedPassage> rerank(const ScoreVector& ppr, std::span<const std::string> seeds,
                                  std::span<const FactTriple> kept, const GraphIndex& index,
                                  const RetrievalParams& params, std::size_t k);

/// Passages ranked by cosine(query, passage embedding); ties by ascending id.
std::vector<RankedPassage> dense_rank(const EmbeddingVector& query, const GraphIndex& index, std::size_t k);

struct Providers {
    ChatProvider& chat;
    EmbeddingProvider& embedder;
};

/// embed -> candidate triples -> gate -> seeds -> restart -> PPR -> rerank,
/// with dense fallback when no seed survives.
QueryTrace retrieve(const std::string& query, const GraphIndex& index, Providers providers, const PromptSet& prompts,
                    const RetrievalParams& params, const std::string& query_id = "");

}  // namespace propex
