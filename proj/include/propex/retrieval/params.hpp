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

namespace propex {

struct RetrievalParams {
    double alpha = 0.5;          // restart probability inside the PPR update
    double lambda_rerank = 1.0;  // weight of the symbolic-overlap bonus
    int k_triples = 5;
    int k_passages = 5;
    double tol = 1e-8;  // L1 change between iterates
    int max_iter = 200;
    bool use_node_score_restart = false;

    /// Throws UsageError on out-of-range values.
    void validate() const;
};

}  // namespace propex
