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


#include "propex/indexer/edges.hpp"

#include <map>
#include <set>

#include "propex/common/error.hpp"

namespace propex {

std::vector<TypedEdge> synonymy_edges_from_embeddings(std::span<const EntityNode> entities,
                                                      std::span<const EmbeddingVector> name_embeddings,
                                                      double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("synonymy threshold must lie in (0, 1)");
    if (name_embeddings.size() != entities.size()) {
        throw IndexCorruptionError("expected one name embedding per entity");
    }
    std::vector<TypedEdge> out;
    for (std::size_t i = 0; i < entities.size(); ++i) {
        for (std::size_t j = i + 1; j < entities.size(); ++j) {
            if (entities[i].id == entities[j].id) continue;
            double sim = cosine(name_embeddings[i], name_embeddings[j]);
            if (sim < threshold) continue;
            out.push_back({entities[i].id, entities[j].id, EdgeKind::Synonymy, sim});
            out.push_back({entities[j].id, entities[i].id, EdgeKind::Synonymy, sim});
        }
    }
    return out;
}

std::vector<TypedEdge> build_synonymy_edges(std::span<const EntityNode> entities, EmbeddingProvider& embedder,
                                            double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("synonymy threshold must lie in (0, 1)");
    if (entities.size() < 2) return {};
    std::vector<std::string> names;
    names.reserve(entities.size());
    for (const auto& e : entities) names.push_back(e.canonical_name);
    auto vecs = embed_texts(names, embedder);
    return synonymy_edges_from_embeddings(entities, vecs, threshold);
}

std::vector<TypedEdge> build_relatedness_edges(std::span<const FactTriple> triples) {
    std::map<std::pair<std::string, std::string>, std::set<std::string>> pairs;
    for (const auto& t : triples) {
        if (t.subject == t.object) continue;
        auto key = t.subject < t.object ? std::pair{t.subject, t.object} : std::pair{t.object, t.subject};
        pairs[key].insert(t.id);
    }
    std::vector<TypedEdge> out;
    out.reserve(pairs.size() * 2);
    for (const auto& [key, ids] : pairs) {
        auto w = static_cast<double>(ids.size());
        out.push_back({key.first, key.second, EdgeKind::Relatedness, w});
        out.push_back({key.second, key.first, EdgeKind::Relatedness, w});
    }
    return out;
}

}  // namespace propex
