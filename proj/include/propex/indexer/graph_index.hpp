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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "propex/indexer/types.hpp"

namespace propex {

/// Square sparse matrix in compressed-sparse-column layout. Column j holds the
/// out-edges of node j, so for a transition matrix each non-empty column sums to 1.
struct CscMatrix {
    std::size_t n = 0;
    std::vector<std::uint64_t> col_ptr{0};
    std::vector<std::uint32_t> row_idx;
    std::vector<double> values;

    std::size_t nnz() const { return values.size(); }
    bool is_dangling(std::size_t col) const { return col_ptr[col] == col_ptr[col + 1]; }

    /// Dense value lookup, O(column length).
    double at(std::size_t row, std::size_t col) const;

    friend bool operator==(const CscMatrix&, const CscMatrix&) = default;
};

/// Builds a column-stochastic matrix from weighted (src, dst, w) triples: the
/// weights leaving each src are summed per dst and divided by their total.
/// Columns without out-edges stay empty (dangling).
struct WeightedArc {
    std::uint32_t src;
    std::uint32_t dst;
    double weight;
};
CscMatrix column_normalize(std::size_t n, std::span<const WeightedArc> arcs);

/// Entity x passage 0/1 matrix stored row-wise (per entity, sorted passage indices).
struct IncidenceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint64_t> row_ptr{0};
    std::vector<std::uint32_t> col_idx;

    std::span<const std::uint32_t> passages_of(std::size_t entity) const {
        return {col_idx.data() + row_ptr[entity], col_idx.data() + row_ptr[entity + 1]};
    }
    bool contains(std::size_t entity, std::size_t passage) const;

    friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;
};

enum class NodeScoreMode { Inverse, Log };

std::string_view to_string(NodeScoreMode mode);
NodeScoreMode node_score_mode_from_string(std::string_view s);

/// Inverse passage frequency per entity row: 1/pf, or ln(1 + P/pf) in Log mode
/// where P is the passage count. An entity with no passages is index corruption.
std::map<std::string, double> compute_node_scores(const IncidenceMatrix& incidence,
                                                  std::span<const std::string> entity_ids,
                                                  NodeScoreMode mode = NodeScoreMode::Inverse);

struct IndexMeta {
    int format_version = 1;
    std::string fingerprint;
    std::string embed_model_id;
    std::size_t embed_dim = 0;
    std::string chat_model_id;
    double synonymy_threshold = 0.9;
    NodeScoreMode node_score_mode = NodeScoreMode::Inverse;
    std::map<std::string, std::string> template_versions;
    std::size_t extraction_warnings = 0;

    friend bool operator==(const IndexMeta&, const IndexMeta&) = default;
};

/// Immutable heterogeneous entity/passage graph. Node order is entities
/// (sorted by id) followed by passages (corpus order).
class GraphIndex {
public:
    struct Parts {
        std::vector<EntityNode> entities;
        std::vector<Passage> passages;
        std::vector<FactTriple> triples;
        std::vector<TypedEdge> edges;
        CscMatrix adjacency;
        IncidenceMatrix incidence;
        std::vector<EmbeddingVector> passage_embeddings;
        IndexMeta meta;
    };

    /// Checks cross-references and shapes; throws IndexCorruptionError.
    explicit GraphIndex(Parts parts);

    const std::vector<EntityNode>& entities() const { return p_.entities; }
    const std::vector<Passage>& passages() const { return p_.passages; }
    const std::vector<FactTriple>& triples() const { return p_.triples; }
    const std::vector<TypedEdge>& edges() const { return p_.edges; }
    const CscMatrix& adjacency() const { return p_.adjacency; }
    const IncidenceMatrix& incidence() const { return p_.incidence; }
    const std::vector<EmbeddingVector>& passage_embeddings() const { return p_.passage_embeddings; }
    const IndexMeta& meta() const { return p_.meta; }

    std::size_t node_count() const { return p_.entities.size() + p_.passages.size(); }
    std::size_t passage_node(std::size_t passage) const { return p_.entities.size() + passage; }

    std::optional<std::size_t> entity_index(const std::string& id) const;
    std::optional<std::size_t> passage_index(const std::string& id) const;
    std::optional<std::size_t> triple_index(const std::string& id) const;

    /// Entity rows mentioned in a passage, ascending.
    std::span<const std::uint32_t> entities_in(std::size_t passage) const;
    std::vector<std::size_t> dangling_nodes() const;

private:
    Parts p_;
    std::unordered_map<std::string, std::size_t> entity_lookup_;
    std::unordered_map<std::string, std::size_t> passage_lookup_;
    std::unordered_map<std::string, std::size_t> triple_lookup_;
    std::vector<std::uint64_t> passage_entity_ptr_;
    std::vector<std::uint32_t> passage_entity_idx_;
};

/// Assembles the graph: sorts entities, validates every id reference, builds
/// the incidence matrix from MentionedIn edges, fills passage frequencies and
/// node scores, and column-normalises all out-edges jointly (MentionedIn
/// weighted 1.0) into the adjacency matrix.
GraphIndex assemble_graph(std::vector<Passage> passages, std::vector<EntityNode> entities,
                          std::vector<FactTriple> triples, std::vector<TypedEdge> edges,
                          std::vector<EmbeddingVector> passage_embeddings, IndexMeta meta);

}  // namespace propex
