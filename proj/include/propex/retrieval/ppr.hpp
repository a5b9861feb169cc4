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

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "propex/indexer/graph_index.hpp"
#include "propex/retrieval/params.hpp"

namespace propex {

/// Per-node scores in GraphIndex node order.
struct ScoreVector {
    std::vector<double> values;
    int iteration_count = 0;
    bool converged = false;
};

/// Raised when no seed resolves to an entity node; callers fall back to dense ranking.
class NoSeedsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Restart vector over the seed entity nodes, summing to 1: uniform, or
/// proportional to node_score when params.use_node_score_restart is set.
/// Unknown seeds are skipped (a warning is appended); if none remain, throws NoSeedsError.
ScoreVector restart_distribution(std::span<const std::string> seeds, const GraphIndex& index,
                                 const RetrievalParams& params, std::vector<std::string>* warnings = nullptr);

using IterationObserver = std::function<void(int iteration, std::span<const double> scores)>;

/// Personalised PageRank by power iteration on a column-stochastic matrix:
///   v <- (1 - alpha) * (M v + d(v) * v0) + alpha * v0
/// where d(v) is the mass sitting on dangling columns. Stops when the L1 change
/// drops below params.tol or after params.max_iter updates. `observer` sees
/// every iterate. Throws NumericalError if a non-finite value appears.
ScoreVector run_ppr(const CscMatrix& transition, std::span<const double> v0, const RetrievalParams& params,
                    const IterationObserver& observer = {});

ScoreVector run_ppr(const GraphIndex& index, const ScoreVector& v0, const RetrievalParams& params,
                    const IterationObserver& observer = {});

}  // namespace propex
