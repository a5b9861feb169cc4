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


#include "propex/indexer/graph_index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "propex/common/error.hpp"

namespace propex {

std::string render_triple(std::string_view subject, std::string_view predicate, std::string_view object) {
    std::string out;
    out.reserve(subject.size() + predicate.size() + object.size() + 6);
    out.append(subject).append(" | ").append(predicate).append(" | ").append(object);
    return out;
}

std::string FactTriple::rendered() const { return render_triple(subject, predicate, object); }

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Synonymy: return "synonymy";
        case EdgeKind::Relatedness: return "relatedness";
        case EdgeKind::MentionedIn: return "mentioned_in";
    }
    return "?";
}

EdgeKind edge_kind_from_string(std::string_view s) {
    if (s == "synonymy") return EdgeKind::Synonymy;
    if (s == "relatedness") return EdgeKind::Relatedness;
    if (s == "mentioned_in") return EdgeKind::MentionedIn;
    throw IndexCorruptionError("unknown edge kind '" + std::string(s) + "'");
}

std::string_view to_string(NodeScoreMode mode) { return mode == NodeScoreMode::Inverse ? "inverse" : "log"; }

NodeScoreMode node_score_mode_from_string(std::string_view s) {
    if (s == "inverse") return NodeScoreMode::Inverse;
    if (s == "log") return NodeScoreMode::Log;
    throw DataError("unknown node score mode '" + std::string(s) + "'");
}

double CscMatrix::at(std::size_t row, std::size_t col) const {
    for (auto k = col_ptr[col]; k < col_ptr[col + 1]; ++k) {
        if (row_idx[k] == row) return values[k];
    }
    return 0.0;
}

CscMatrix column_normalize(std::size_t n, std::span<const WeightedArc> arcs) {
    std::vector<std::map<std::uint32_t, double>> cols(n);
    for (const auto& a : arcs) {
        if (a.src >= n || a.dst >= n) throw IndexCorruptionError("arc endpoint out of range");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
            throw IndexCorruptionError("arc weight must be positive and finite");
        }
        cols[a.src][a.dst] += a.weight;
    }
    CscMatrix m;
    m.n = n;
    m.col_ptr.assign(1, 0);
    for (const auto& col : cols) {
        double total = 0.0;
        for (const auto& [dst, w] : col) total += w;
        for (const auto& [dst, w] : col) {
            m.row_idx.push_back(dst);
            m.values.push_back(w / total);
        }
        m.col_ptr.push_back(m.values.size());
    }
    return m;
}

bool IncidenceMatrix::contains(std::size_t entity, std::size_t passage) const {
    auto row = passages_of(entity);
    return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(passage));
}

std::map<std::string, double> compute_node_scores(const IncidenceMatrix& incidence,
                                                  std::span<const std::string> entity_ids, NodeScoreMode mode) {
    if (entity_ids.size() != incidence.rows) {
        throw IndexCorruptionError("incidence matrix has " + std::to_string(incidence.rows) + " rows for " +
                                   std::to_string(entity_ids.size()) + " entities");
    }
    std::map<std::string, double> scores;
    for (std::size_t e = 0; e < incidence.rows; ++e) {
        auto pf = incidence.row_ptr[e + 1] - incidence.row_ptr[e];
        if (pf == 0) {
            throw IndexCorruptionError("entity '" + entity_ids[e] + "' is mentioned in no passage");
        }
        double f = static_cast<double>(pf);
        scores[entity_ids[e]] = mode == NodeScoreMode::Inverse
                                    ? 1.0 / f
                                    : std::log(1.0 + static_cast<double>(incidence.cols) / f);
    }
    return scores;
}

GraphIndex::GraphIndex(Parts parts) : p_(std::move(parts)) {
    const std::size_t ne = p_.entities.size();
    const std::size_t np = p_.passages.size();
    for (std::size_t i = 0; i < ne; ++i) {
        if (!entity_lookup_.emplace(p_.entities[i].id, i).second) {
            throw IndexCorruptionError("duplicate entity id '" + p_.entities[i].id + "'");
        }
    }
    for (std::size_t i = 0; i < np; ++i) {
        if (!passage_lookup_.emplace(p_.passages[i].id, i).second) {
            throw IndexCorruptionError("duplicate passage id '" + p_.passages[i].id + "'");
        }
    }
    for (std::size_t i = 0; i < p_.triples.size(); ++i) {
        const auto& t = p_.triples[i];
        if (!triple_lookup_.emplace(t.id, i).second) throw IndexCorruptionError("duplicate triple id '" + t.id + "'");
        if (!entity_lookup_.contains(t.subject) || !entity_lookup_.contains(t.object)) {
            throw IndexCorruptionError("triple '" + t.id + "' references an unknown entity");
        }
        if (!passage_lookup_.contains(t.source_passage)) {
            throw IndexCorruptionError("triple '" + t.id + "' references unknown passage '" + t.source_passage + "'");
        }
    }
    const std::size_t n = ne + np;
    if (p_.adjacency.n != n || p_.adjacency.col_ptr.size() != n + 1 ||
        p_.adjacency.row_idx.size() != p_.adjacency.values.size() || p_.adjacency.col_ptr.back() != p_.adjacency.nnz()) {
        throw IndexCorruptionError("adjacency matrix shape does not match the node count " + std::to_string(n));
    }
    for (auto r : p_.adjacency.row_idx) {
        if (r >= n) throw IndexCorruptionError("adjacency row index out of range");
    }
    if (p_.incidence.rows != ne || p_.incidence.cols != np || p_.incidence.row_ptr.size() != ne + 1 ||
        p_.incidence.row_ptr.back() != p_.incidence.col_idx.size()) {
        throw IndexCorruptionError("incidence matrix shape does not match entity/passage counts");
    }
    if (p_.passage_embeddings.size() != np) {
        throw IndexCorruptionError("expected one passage embedding per passage");
    }

    // Transposed incidence for passage -> entities lookups.
    std::vector<std::vector<std::uint32_t>> by_passage(np);
    for (std::size_t e = 0; e < ne; ++e) {
        for (auto p : p_.incidence.passages_of(e)) {
            if (p >= np) throw IndexCorruptionError("incidence column index out of range");
            by_passage[p].push_back(static_cast<std::uint32_t>(e));
        }
    }
    passage_entity_ptr_.assign(1, 0);
    for (auto& row : by_passage) {
        passage_entity_idx_.insert(passage_entity_idx_.end(), row.begin(), row.end());
        passage_entity_ptr_.push_back(passage_entity_idx_.size());
    }
}

std::optional<std::size_t> GraphIndex::entity_index(const std::string& id) const {
    auto it = entity_lookup_.find(id);
    if (it == entity_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> GraphIndex::passage_index(const std::string& id) const {
    auto it = passage_lookup_.find(id);
    if (it == passage_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> GraphIndex::triple_index(const std::string& id) const {
    auto it = triple_lookup_.find(id);
    if (it == triple_lookup_.end()) return std::nullopt;
    return it->second;
}

std::span<const std::uint32_t> GraphIndex::entities_in(std::size_t passage) const {
    return {passage_entity_idx_.data() + passage_entity_ptr_[passage],
            passage_entity_idx_.data() + passage_entity_ptr_[passage + 1]};
}

std::vector<std::size_t> GraphIndex::dangling_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < p_.adjacency.n; ++j) {
        if (p_.adjacency.is_dangling(j)) out.push_back(j);
    }
    return out;
}

GraphIndex assemble_graph(std::vector<Passage> passages, std::vector<EntityNode> entities,
                          std::vector<FactTriple> triples, std::vector<TypedEdge> edges,
                          std::vector<EmbeddingVector> passage_embeddings, IndexMeta meta) {
    std::sort(entities.begin(), entities.end(), [](const EntityNode& a, const EntityNode& b) { return a.id < b.id; });
    std::map<std::string, std::uint32_t> entity_row;
    for (std::size_t i = 0; i < entities.size(); ++i) {
        if (!entity_row.emplace(entities[i].id, static_cast<std::uint32_t>(i)).second) {
            throw IndexCorruptionError("duplicate entity id '" + entities[i].id + "'");
        }
    }
    std::map<std::string, std::uint32_t> passage_col;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (!passage_col.emplace(passages[i].id, static_cast<std::uint32_t>(i)).second) {
            throw IndexCorruptionError("duplicate passage id '" + passages[i].id + "'");
        }
    }
    auto entity_of = [&](const std::string& id) {
        auto it = entity_row.find(id);
        if (it == entity_row.end()) throw IndexCorruptionError("dangling reference to entity '" + id + "'");
        return it->second;
    };
    auto passage_of = [&](const std::string& id) {
        auto it = passage_col.find(id);
        if (it == passage_col.end()) throw IndexCorruptionError("dangling reference to passage '" + id + "'");
        return it->second;
    };

    const auto ne = static_cast<std::uint32_t>(entities.size());
    std::vector<std::set<std::uint32_t>> mentions(entities.size());
    std::vector<WeightedArc> arcs;
    arcs.reserve(edges.size());
    for (const auto& e : edges) {
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw IndexCorruptionError("edge " + e.src + " -> " + e.dst + " has non-positive weight");
        }
        auto src = entity_of(e.src);
        if (e.kind == EdgeKind::MentionedIn) {
            auto p = passage_of(e.dst);
            mentions[src].insert(p);
            arcs.push_back({src, ne + p, 1.0});
        } else {
            auto dst = entity_of(e.dst);
            if (src == dst) throw IndexCorruptionError("self-loop on entity '" + e.src + "'");
            arcs.push_back({src, dst, e.weight});
        }
    }
    for (const auto& t : triples) {
        entity_of(t.subject);
        entity_of(t.object);
        passage_of(t.source_passage);
    }

    IncidenceMatrix inc;
    inc.rows = entities.size();
    inc.cols = passages.size();
    for (const auto& row : mentions) {
        inc.col_idx.insert(inc.col_idx.end(), row.begin(), row.end());
        inc.row_ptr.push_back(inc.col_idx.size());
    }
    std::vector<std::string> ids;
    ids.reserve(entities.size());
    for (const auto& e : entities) ids.push_back(e.id);
    auto scores = compute_node_scores(inc, ids, meta.node_score_mode);
    for (std::size_t i = 0; i < entities.size(); ++i) {
        entities[i].passage_frequency = static_cast<int>(mentions[i].size());
        entities[i].node_score = scores.at(entities[i].id);
    }

    GraphIndex::Parts parts;
    parts.adjacency = column_normalize(entities.size() + passages.size(), arcs);
    parts.incidence = std::move(inc);
    parts.entities = std::move(entities);
    parts.passages = std::move(passages);
    parts.triples = std::move(triples);
    parts.edges = std::move(edges);
    parts.passage_embeddings = std::move(passage_embeddings);
    parts.meta = std::move(meta);
    return GraphIndex(std::move(parts));
}

}  // namespace propex
