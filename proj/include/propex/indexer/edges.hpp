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

#include <span>
#include <vector>

#include "propex/indexer/types.hpp"
#include "propex/providers/provider.hpp"

namespace propex {

/// Embeds canonical names and links every unordered pair with cosine >=
/// threshold by two Synonymy edges weighted by that cosine. 0 < threshold < 1.
std::vector<TypedEdge> build_synonymy_edges(std::span<const EntityNode> entities, EmbeddingProvider& embedder,
                                            double threshold);

/// Same, over precomputed name embeddings (one per entity).
std::vector<TypedEdge> synonymy_edges_from_embeddings(std::span<const EntityNode> entities,
                                                      std::span<const EmbeddingVector> name_embeddings,
                                                      double threshold);

/// Two Relatedness edges per co-occurring (subject, object) pair, weighted by
/// the number of distinct triples linking them. Self-pairs are skipped.
std::vector<TypedEdge> build_relatedness_edges(std::span<const FactTriple> triples);

}  // namespace propex
