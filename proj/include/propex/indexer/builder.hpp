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
#include <vector>

#include "propex/common/prompts.hpp"
#include "propex/indexer/graph_index.hpp"
#include "propex/providers/provider.hpp"

namespace propex {

struct BuildOptions {
    double synonymy_threshold = 0.9;
    NodeScoreMode node_score_mode = NodeScoreMode::Inverse;
    int jobs = 1;
    std::size_t embed_batch = 64;
};

/// Digest of the corpus content and every build setting that affects the index.
std::string corpus_fingerprint(const std::vector<Passage>& passages, const BuildOptions& options,
                               const std::string& chat_model, const std::string& embed_model,
                               const PromptSet& prompts);

/// The text embedded for a passage (used by the dense fallback ranking).
std::string passage_embedding_text(const Passage& passage);

/// Full offline indexing: extraction per passage (parallel up to `jobs`), then a
/// deterministic reduction in corpus order into entities, triples, typed edges,
/// embeddings, and the assembled graph.
GraphIndex build_index(std::vector<Passage> passages, ChatProvider& chat, EmbeddingProvider& embedder,
                       const PromptSet& prompts, const BuildOptions& options);

/// Embeds texts in batches of at most `batch` items.
std::vector<EmbeddingVector> embed_in_batches(const std::vector<std::string>& texts, EmbeddingProvider& embedder,
                                              std::size_t batch);

}  // namespace propex
