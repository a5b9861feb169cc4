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


#include "propex/retrieval/trace.hpp"

namespace propex {

bool QueryTrace::same_result(const QueryTrace& o) const {
    return query_id == o.query_id && query_text == o.query_text && query_embedding == o.query_embedding &&
           candidate_triples == o.candidate_triples && kept_triples == o.kept_triples && seeds == o.seeds &&
           ppr == o.ppr && ranked_passages == o.ranked_passages && fallback == o.fallback &&
           gate_fail_open == o.gate_fail_open && warnings == o.warnings;
}

nlohmann::ordered_json to_json(const QueryTrace& t, bool include_timing) {
    using ojson = nlohmann::ordered_json;
    ojson candidates = ojson::array();
    for (const auto& [id, cos] : t.candidate_triples) candidates.push_back({{"triple_id", id}, {"cosine", cos}});
    ojson ranked = ojson::array();
    for (const auto& r : t.ranked_passages) {
        ranked.push_back({{"passage_id", r.passage_id},
                          {"ppr_score", r.ppr_score},
                          {"overlap", r.overlap},
                          {"final_score", r.final_score}});
    }
    ojson j = {
        {"query_id", t.query_id},
        {"query_text", t.query_text},
        {"query_embedding", std::vector<double>(t.query_embedding.values().begin(), t.query_embedding.values().end())},
        {"candidate_triples", candidates},
        {"kept_triples", t.kept_triples},
        {"seeds", t.seeds},
        {"ppr",
         {{"iterations", t.ppr.iterations},
          {"converged", t.ppr.converged},
          {"mass", t.ppr.mass},
          {"nonzero", t.ppr.nonzero}}},
        {"ranked_passages", ranked},
        {"fallback", t.fallback},
        {"gate_fail_open", t.gate_fail_open},
        {"warnings", t.warnings},
    };
    if (include_timing) {
        ojson timing = ojson::object();
        for (const auto& s : t.timings) timing[s.stage] = s.milliseconds;
        j["timing_ms"] = timing;
    }
    return j;
}

}  // namespace propex
