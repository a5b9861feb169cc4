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


#include "propex/eval/runner.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>

#include "propex/common/error.hpp"
#include "propex/common/log.hpp"
#include "propex/common/parallel.hpp"
#include "propex/eval/cache.hpp"
#include "propex/eval/metrics.hpp"

namespace propex {

namespace {

using ojson = nlohmann::ordered_json;

std::map<int, int> recall_flags(const std::vector<std::string>& ranked, const std::set<std::string>& gold) {
    std::map<int, int> flags;
    for (int k : kRecallCutoffs) flags[k] = *recall_at_k(ranked, gold, k);
    return flags;
}

QueryResult evaluate_one(const QAExample& ex, const GraphIndex& index, Providers providers, const PromptSet& prompts,
                         const RetrievalParams& params, const EvalOptions& options) {
    QueryResult row;
    row.question_id = ex.question_id;
    row.question = ex.question;
    row.gold_answer = ex.gold_answer;
    row.gold_passage_ids = ex.gold_passage_ids;
    const std::set<std::string> gold(ex.gold_passage_ids.begin(), ex.gold_passage_ids.end());
    const bool scorable = ex.recall_scorable && !gold.empty();
    try {
        RetrievalParams deep = params;
        deep.k_passages = std::max(params.k_passages, kRecallCutoffs.back());
        auto trace = retrieve(ex.question, index, providers, prompts, deep, ex.question_id);
        for (const auto& r : trace.ranked_passages) row.ranked_passage_ids.push_back(r.passage_id);
        if (scorable) row.recall = recall_flags(row.ranked_passage_ids, gold);
        auto prompt = assemble_answer_prompt(trace, index, ex.question, prompts.answer, options.char_budget,
                                             static_cast<std::size_t>(params.k_passages));
        auto answer = generate_answer(prompt, prompts.answer, providers.chat, ex.question_id);
        row.prediction = answer.answer_text;
        row.cited_passage_ids = answer.cited_passage_ids;
        row.em = exact_match(row.prediction, ex.gold_answer);
        row.f1 = token_f1(row.prediction, ex.gold_answer);
        row.trace = std::move(trace);
    } catch (const std::exception& e) {
        logger()->warn("question '{}' failed: {}", ex.question_id, e.what());
        row.error = e.what();
        row.em = 0;
        row.f1 = 0.0;
        row.prediction.clear();
        row.cited_passage_ids.clear();
        if (scorable) {
            row.recall = std::map<int, int>{};
            for (int k : kRecallCutoffs) (*row.recall)[k] = 0;
        }
    }
    return row;
}

}  // namespace

EvalReport aggregate(std::vector<QueryResult> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const QueryResult& a, const QueryResult& b) { return a.question_id < b.question_id; });
    EvalReport report;
    report.n_queries = rows.size();
    double em = 0.0, f1 = 0.0;
    std::map<int, double> recall;
    for (int k : kRecallCutoffs) recall[k] = 0.0;
    for (const auto& r : rows) {
        em += r.em;
        f1 += r.f1;
        if (r.recall) {
            ++report.recall_scored;
            for (int k : kRecallCutoffs) recall[k] += r.recall->at(k);
        }
    }
    if (report.n_queries > 0) {
        report.em = em / static_cast<double>(report.n_queries);
        report.f1 = f1 / static_cast<double>(report.n_queries);
    }
    for (int k : kRecallCutoffs) {
        report.recall_at[k] = report.recall_scored > 0 ? recall[k] / static_cast<double>(report.recall_scored) : 0.0;
    }
    report.per_query = std::move(rows);
    return report;
}

EvalReport run_eval(const GraphIndex& index, const std::vector<QAExample>& examples, Providers providers,
                    const PromptSet& prompts, const RetrievalParams& params, const EvalOptions& options) {
    params.validate();
    std::unique_ptr<ResponseCache> cache;
    std::unique_ptr<CachingChatProvider> cached_chat;
    std::unique_ptr<CachingEmbeddingProvider> cached_embed;
    if (options.cache_dir) {
        cache = std::make_unique<ResponseCache>(*options.cache_dir);
        cached_chat = std::make_unique<CachingChatProvider>(providers.chat, *cache);
        cached_embed = std::make_unique<CachingEmbeddingProvider>(providers.embedder, *cache);
    }
    Providers active = cache ? Providers{*cached_chat, *cached_embed} : providers;

    std::vector<QueryResult> rows(examples.size());
    parallel_for(examples.size(), options.jobs, [&](std::size_t i) {
        rows[i] = evaluate_one(examples[i], index, active, prompts, params, options);
    });
    return aggregate(std::move(rows));
}

std::string serialize_report(const EvalReport& report) {
    ojson recall = ojson::object();
    for (const auto& [k, v] : report.recall_at) recall[std::to_string(k)] = v;
    ojson summary = {{"n_queries", report.n_queries},
                     {"em", report.em},
                     {"f1", report.f1},
                     {"recall_at", recall},
                     {"recall_scored", report.recall_scored}};
    std::string out = ojson{{"summary", summary}}.dump() + "\n";
    for (const auto& r : report.per_query) {
        ojson flags = nullptr;
        if (r.recall) {
            flags = ojson::object();
            for (const auto& [k, v] : *r.recall) flags[std::to_string(k)] = v;
        }
        ojson row = {{"question_id", r.question_id},
                     {"question", r.question},
                     {"gold_answer", r.gold_answer},
                     {"prediction", r.prediction},
                     {"em", r.em},
                     {"f1", r.f1},
                     {"recall", flags},
                     {"gold_passage_ids", r.gold_passage_ids},
                     {"ranked_passage_ids", r.ranked_passage_ids},
                     {"cited_passage_ids", r.cited_passage_ids},
                     {"error", r.error},
                     {"trace", r.trace ? to_json(*r.trace) : ojson(nullptr)}};
        out += row.dump() + "\n";
    }
    return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write report '" + file.string() + "'");
    out << serialize_report(report);
    if (!out) throw DataError("failed writing report '" + file.string() + "'");
}

}  // namespace propex
