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


#include "propex/retrieval/retrieve.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <set>

#include "propex/common/error.hpp"
#include "propex/common/log.hpp"
#include "propex/common/text.hpp"

namespace propex {

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& out) : out_(out), start_(std::chrono::steady_clock::now()) {}
    void lap(const char* stage) {
        auto now = std::chrono::steady_clock::now();
        out_.push_back({stage, std::chrono::duration<double, std::milli>(now - start_).count()});
        start_ = now;
    }

private:
    std::vector<StageTiming>& out_;
    std::chrono::steady_clock::time_point start_;
};

bool ranks_before(const RankedPassage& a, const RankedPassage& b) {
    if (a.final_score != b.final_score) return a.final_score > b.final_score;
    return a.passage_id < b.passage_id;
}

}  // namespace

std::vector<ScoredTriple> retrieve_candidate_triples(const EmbeddingVector& query, const GraphIndex& index, int k) {
    if (k < 1) throw UsageError("k_triples must be at least 1");
    const auto& triples = index.triples();
    std::vector<ScoredTriple> scored;
    scored.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) scored.push_back({i, cosine(query, triples[i].embedding)});
    auto before = [&](const ScoredTriple& a, const ScoredTriple& b) {
        if (a.cosine != b.cosine) return a.cosine > b.cosine;
        return triples[a.triple].id < triples[b.triple].id;
    };
    auto take = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), before);
    scored.resize(take);
    return scored;
}

std::optional<std::vector<std::size_t>> parse_keep_reply(std::string_view reply, std::size_t candidates) {
    for (const auto& raw : text::split_lines(reply)) {
        auto line = text::trim(raw);
        if (!text::starts_with_icase(line, "keep:")) continue;
        auto rest = text::to_lower_ascii(text::trim(line.substr(5)));
        while (!rest.empty() && rest.back() == '.') rest.pop_back();
        if (rest == "none") return std::vector<std::size_t>{};
        if (rest == "all") {
            std::vector<std::size_t> all(candidates);
            for (std::size_t i = 0; i < candidates; ++i) all[i] = i;
            return all;
        }
        std::set<std::size_t> picked;
        for (auto& tok : text::split(rest, ',')) {
            for (const auto& piece : text::split(text::trim(tok), ' ')) {
                if (piece.empty()) continue;
                if (!std::all_of(piece.begin(), piece.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
                    piece.size() > 6) {
                    return std::nullopt;
                }
                auto n = static_cast<std::size_t>(std::stoul(piece));
                if (n < 1 || n > candidates) return std::nullopt;
                picked.insert(n - 1);
            }
        }
        if (picked.empty()) return std::nullopt;
        return std::vector<std::size_t>(picked.begin(), picked.end());
    }
    return std::nullopt;
}

GateResult filter_facts(const std::string& query, const std::vector<FactTriple>& candidates, ChatProvider& chat,
                        const PromptTemplate& prompt) {
    GateResult result;
    if (candidates.empty()) return result;
    std::string facts;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i) facts += '\n';
        facts += std::to_string(i + 1) + ". " + candidates[i].rendered();
    }
    const std::string user = prompt.render("user", {{"question", query}, {"facts", facts}});
    ChatRequest req{prompt.has_section("system") ? prompt.section("system") : "", user, 0.0, 64, prompt.version()};
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1 && prompt.has_section("retry")) req.user_text = user + "\n\n" + prompt.section("retry");
        std::optional<std::vector<std::size_t>> keep;
        try {
            keep = parse_keep_reply(chat_complete(req, chat), candidates.size());
        } catch (const EmptyOutputError&) {
        }
        if (keep) {
            for (auto i : *keep) result.kept.push_back(candidates[i]);
            return result;
        }
    }
    result.fail_open = true;
    result.kept = candidates;
    result.warnings.push_back("fact gate output unparseable after reprompt; keeping all candidates");
    logger()->warn("fact gate output unparseable after reprompt; keeping all {} candidates", candidates.size());
    return result;
}

std::vector<std::string> seed_entities(std::span<const FactTriple> kept) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& t : kept) {
        if (seen.insert(t.subject).second) out.push_back(t.subject);
        if (seen.insert(t.object).second) out.push_back(t.object);
    }
    return out;
}

double overlap(std::size_t passage, std::span<const std::string> seeds, std::span<const FactTriple> kept,
               const GraphIndex& index) {
    const std::size_t denom = seeds.size() + kept.size();
    if (denom == 0) return 0.0;
    std::size_t hits = 0;
    for (const auto& s : seeds) {
        auto e = index.entity_index(s);
        if (e && index.incidence().contains(*e, passage)) ++hits;
    }
    const auto& pid = index.passages()[passage].id;
    for (const auto& t : kept) {
        if (t.source_passage == pid) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(denom);
}

std::vector<RankedPassage> rerank(const ScoreVector& ppr, std::span<const std::string> seeds,
                                  std::span<const FactTriple> kept, const GraphIndex& index,
                                  const RetrievalParams& params, std::size_t k) {
    const auto np = index.passages().size();
    if (np == 0) return {};
    double lo = ppr.values[index.passage_node(0)];
    double hi = lo;
    for (std::size_t p = 0; p < np; ++p) {
        double v = ppr.values[index.passage_node(p)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    std::vector<RankedPassage> ranked;
    ranked.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
        RankedPassage r;
        r.passage_id = index.passages()[p].id;
        r.ppr_score = ppr.values[index.passage_node(p)];
        r.overlap = overlap(p, seeds, kept, index);
        double normalized = range > 0.0 ? (r.ppr_score - lo) / range : 0.0;
        r.final_score = normalized + params.lambda_rerank * r.overlap;
        ranked.push_back(std::move(r));
    }
    auto take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(), ranks_before);
    ranked.resize(take);
    return ranked;
}

std::vector<RankedPassage> dense_rank(const EmbeddingVector& query, const GraphIndex& index, std::size_t k) {
    std::vector<RankedPassage> ranked;
    ranked.reserve(index.passages().size());
    for (std::size_t p = 0; p < index.passages().size(); ++p) {
        RankedPassage r;
        r.passage_id = index.passages()[p].id;
        r.final_score = cosine(query, index.passage_embeddings()[p]);
        ranked.push_back(std::move(r));
    }
    auto take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(), ranks_before);
    ranked.resize(take);
    return ranked;
}

QueryTrace retrieve(const std::string& query, const GraphIndex& index, Providers providers, const PromptSet& prompts,
                    const RetrievalParams& params, const std::string& query_id) {
    params.validate();
    if (providers.embedder.model_id() != index.meta().embed_model_id) {
        throw DataError("index was built with embedding model '" + index.meta().embed_model_id +
                        "' but the query embedder is '" + providers.embedder.model_id() + "'");
    }
    QueryTrace trace;
    trace.query_id = query_id;
    trace.query_text = query;
    StageClock clock(trace.timings);
    const auto k = static_cast<std::size_t>(params.k_passages);

    trace.query_embedding = embed_text(query, providers.embedder);
    clock.lap("embed");

    auto candidates = retrieve_candidate_triples(trace.query_embedding, index, params.k_triples);
    std::vector<FactTriple> candidate_triples;
    for (const auto& c : candidates) {
        candidate_triples.push_back(index.triples()[c.triple]);
        trace.candidate_triples.emplace_back(index.triples()[c.triple].id, c.cosine);
    }
    clock.lap("candidates");

    auto fall_back = [&](const std::string& why) {
        trace.fallback = true;
        trace.warnings.push_back("dense fallback: " + why);
        trace.ranked_passages = dense_rank(trace.query_embedding, index, k);
        clock.lap("dense_fallback");
        return trace;
    };
    if (candidate_triples.empty()) return fall_back("index has no triples");

    auto gate = filter_facts(query, candidate_triples, providers.chat, prompts.filter_facts);
    trace.gate_fail_open = gate.fail_open;
    trace.warnings.insert(trace.warnings.end(), gate.warnings.begin(), gate.warnings.end());
    for (const auto& t : gate.kept) trace.kept_triples.push_back(t.id);
    clock.lap("gate");

    trace.seeds = seed_entities(gate.kept);
    if (trace.seeds.empty()) return fall_back("fact gate kept no triples");

    ScoreVector v0;
    try {
        v0 = restart_distribution(trace.seeds, index, params, &trace.warnings);
    } catch (const NoSeedsError& e) {
        return fall_back(e.what());
    }
    auto ppr = run_ppr(index, v0, params);
    trace.ppr.iterations = ppr.iteration_count;
    trace.ppr.converged = ppr.converged;
    for (double v : ppr.values) {
        trace.ppr.mass += v;
        if (v > 0.0) ++trace.ppr.nonzero;
    }
    if (!ppr.converged) {
        trace.warnings.push_back("PPR stopped at max_iter without converging");
    }
    clock.lap("ppr");

    trace.ranked_passages = rerank(ppr, trace.seeds, gate.kept, index, params, k);
    clock.lap("rerank");
    return trace;
}

}  // namespace propex
