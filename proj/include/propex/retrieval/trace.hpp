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

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "propex/providers/embedding.hpp"

namespace propex {

struct RankedPassage {
    std::string passage_id;
    double ppr_score = 0.0;
    double overlap = 0.0;
    double final_score = 0.0;

    friend bool operator==(const RankedPassage&, const RankedPassage&) = default;
};

struct PprSummary {
    int iterations = 0;
    bool converged = false;
    double mass = 0.0;
    std::size_t nonzero = 0;

    friend bool operator==(const PprSummary&, const PprSummary&) = default;
};

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

/// Everything retrieve() decided for one query.
struct QueryTrace {
    std::string query_id;
    std::string query_text;
    EmbeddingVector query_embedding;
    std::vector<std::pair<std::string, double>> candidate_triples;  // (triple id, cosine)
    std::vector<std::string> kept_triples;
    std::vector<std::string> seeds;
    PprSummary ppr;
    std::vector<RankedPassage> ranked_passages;
    bool fallback = false;
    bool gate_fail_open = false;
    std::vector<std::string> warnings;
    std::vector<StageTiming> timings;  // wall clock; excluded from equality

    /// Equality over every field except timings.
    bool same_result(const QueryTrace& other) const;
};

/// One self-contained record. Timings are written only when requested so that
/// repeated runs serialise byte-identically.
nlohmann::ordered_json to_json(const QueryTrace& trace, bool include_timing = false);

}  // namespace propex
