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


#include "propex/indexer/builder.hpp"

#include <fmt/format.h>

#include <map>

#include "propex/common/digest.hpp"
#include "propex/common/error.hpp"
#include "propex/common/log.hpp"
#include "propex/common/parallel.hpp"
#include "propex/indexer/edges.hpp"
#include "propex/indexer/extract.hpp"

namespace propex {

std::string corpus_fingerprint(const std::vector<Passage>& passages, const BuildOptions& options,
                               const std::string& chat_model, const std::string& embed_model,
                               const PromptSet& prompts) {
    Sha256 h;
    h.update_field("propex-index");
    h.update_field(chat_model);
    h.update_field(embed_model);
    h.update_field(fmt::format("{:.17g}", options.synonymy_threshold));
    h.update_field(to_string(options.node_score_mode));
    for (const auto* t : {&prompts.extract_entities, &prompts.extract_triples}) {
        h.update_field(t->version());
        h.update_field(t->section("user"));
    }
    for (const auto& p : passages) {
        h.update_field(p.id);
        h.update_field(p.title);
        h.update_field(p.text);
    }
    return h.hex_digest();
}

std::string passage_embedding_text(const Passage& passage) {
    return passage.title.empty() ? passage.text : passage.title + "\n" + passage.text;
}

std::vector<EmbeddingVector> embed_in_batches(const std::vector<std::string>& texts, EmbeddingProvider& embedder,
                                              std::size_t batch) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    batch = std::max<std::size_t>(batch, 1);
    for (std::size_t i = 0; i < texts.size(); i += batch) {
        auto n = std::min(batch, texts.size() - i);
        auto part = embed_texts(std::span<const std::string>(texts.data() + i, n), embedder);
        if (!out.empty() && part.front().dim() != out.front().dim()) {
            throw IndexCorruptionError("embedding dimension changed between batches");
        }
        for (auto& v : part) out.push_back(std::move(v));
    }
    return out;
}

GraphIndex build_index(std::vector<Passage> passages, ChatProvider& chat, EmbeddingProvider& embedder,
                       const PromptSet& prompts, const BuildOptions& options) {
    if (passages.empty()) throw DataError("cannot build an index from an empty corpus");
    struct PerPassage {
        EntityExtraction entities;
        TripleExtraction triples;
    };
    std::vector<PerPassage> extracted(passages.size());
    parallel_for(passages.size(), options.jobs, [&](std::size_t i) {
        extracted[i].entities = extract_entities(passages[i], chat, prompts.extract_entities);
        extracted[i].triples =
            extract_triples(passages[i], extracted[i].entities.entities, chat, prompts.extract_triples);
    });

    std::map<std::string, EntityNode> entity_map;
    std::vector<TypedEdge> edges;
    std::vector<FactTriple> triples;
    std::size_t warnings = 0;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        auto& ex = extracted[i];
        warnings += ex.entities.warnings.size() + ex.triples.warnings.size();
        for (const auto& e : ex.entities.entities) {
            auto& node = entity_map[e.canonical_name];
            node.id = e.canonical_name;
            node.canonical_name = e.canonical_name;
            auto& forms = node.surface_forms;
            auto pos = std::lower_bound(forms.begin(), forms.end(), e.surface_form);
            if (pos == forms.end() || *pos != e.surface_form) forms.insert(pos, e.surface_form);
            edges.push_back({e.canonical_name, passages[i].id, EdgeKind::MentionedIn, 1.0});
        }
        for (auto& t : ex.triples.triples) triples.push_back(std::move(t));
    }
    std::vector<EntityNode> entities;
    entities.reserve(entity_map.size());
    for (auto& [id, node] : entity_map) entities.push_back(std::move(node));

    if (!triples.empty()) {
        std::vector<std::string> rendered;
        rendered.reserve(triples.size());
        for (const auto& t : triples) rendered.push_back(t.rendered());
        auto vecs = embed_in_batches(rendered, embedder, options.embed_batch);
        for (std::size_t i = 0; i < triples.size(); ++i) triples[i].embedding = std::move(vecs[i]);
    }

    std::vector<std::string> passage_texts;
    passage_texts.reserve(passages.size());
    for (const auto& p : passages) passage_texts.push_back(passage_embedding_text(p));
    auto passage_vecs = embed_in_batches(passage_texts, embedder, options.embed_batch);

    if (entities.size() >= 2) {
        std::vector<std::string> names;
        names.reserve(entities.size());
        for (const auto& e : entities) names.push_back(e.canonical_name);
        auto name_vecs = embed_in_batches(names, embedder, options.embed_batch);
        auto syn = synonymy_edges_from_embeddings(entities, name_vecs, options.synonymy_threshold);
        edges.insert(edges.end(), syn.begin(), syn.end());
    }
    auto rel = build_relatedness_edges(triples);
    edges.insert(edges.end(), rel.begin(), rel.end());

    IndexMeta meta;
    meta.fingerprint = corpus_fingerprint(passages, options, chat.model_id(), embedder.model_id(), prompts);
    meta.embed_model_id = embedder.model_id();
    meta.embed_dim = passage_vecs.front().dim();
    meta.chat_model_id = chat.model_id();
    meta.synonymy_threshold = options.synonymy_threshold;
    meta.node_score_mode = options.node_score_mode;
    meta.template_versions = {{"extract_entities", prompts.extract_entities.version()},
                              {"extract_triples", prompts.extract_triples.version()}};
    meta.extraction_warnings = warnings;
    if (warnings > 0) logger()->warn("indexing finished with {} extraction warnings", warnings);
    return assemble_graph(std::move(passages), std::move(entities), std::move(triples), std::move(edges),
                          std::move(passage_vecs), std::move(meta));
}

}  // namespace propex
