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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "propex/answer/answer.hpp"
#include "propex/common/prompts.hpp"
#include "propex/eval/dataset.hpp"
#include "propex/indexer/graph_index.hpp"
#include "propex/retrieval/retrieve.hpp"

namespace propex {

inline constexpr std::array<int, 5> kRecallCutoffs = {1, 2, 5, 8, 10};

struct QueryResult {
    std::string question_id;
    std::string question;
    std::string gold_answer;
    std::string prediction;
    int em = 0;
    double f1 = 0.0;
    std::optional<std::map<int, int>> recall;  // nullopt when unscorable
    std::vector<std::string> gold_passage_ids;
    std::vector<std::string> ranked_passage_ids;
    std::vector<std::string> cited_passage_ids;
    std::string error;
    std::optional<QueryTrace> trace;
};

struct EvalReport {
    std::size_t n_queries = 0;
    double em = 0.0;
    double f1 = 0.0;
    std::map<int, double> recall_at;
    std::size_t recall_scored = 0;
    std::vector<QueryResult> per_query;  // sorted by question_id
};

struct EvalOptions {
    int jobs = 1;
    std::size_t char_budget = kDefaultCharBudget;
    /// When set, every provider response is read through this cache directory.
    std::optional<std::filesystem::path> cache_dir;
};

/// Retrieve, answer and score every example. A failing query becomes a
/// zero-score row carrying the error text; the run itself does not abort.
/// Retrieval ranks at least 10 passages for scoring, and the answer prompt
/// uses the top params.k_passages of them.
EvalReport run_eval(const GraphIndex& index, const std::vector<QAExample>& examples, Providers providers,
                    const PromptSet& prompts, const RetrievalParams& params, const EvalOptions& options = {});

/// Aggregates per-query rows (sorted by question_id first) into report means.
EvalReport aggregate(std::vector<QueryResult> rows);

/// Summary line followed by one line per query, fixed field order.
std::string serialize_report(const EvalReport& report);
void write_report(const EvalReport& report, const std::filesystem::path& file);

}  // namespace propex
