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


#include "propex/retrieval/ppr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "propex/common/error.hpp"

namespace propex {

void RetrievalParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError(fmt::format("alpha must lie in (0, 1], got {}", alpha));
    if (!(lambda_rerank >= 0.0) || !std::isfinite(lambda_rerank)) {
        throw UsageError(fmt::format("lambda_rerank must be non-negative, got {}", lambda_rerank));
    }
    if (k_triples < 1) throw UsageError("k_triples must be at least 1");
    if (k_passages < 1) throw UsageError("k_passages must be at least 1");
    if (!(tol > 0.0)) throw UsageError("tol must be positive");
    if (max_iter < 1) throw UsageError("max_iter must be at least 1");
}

ScoreVector restart_distribution(std::span<const std::string> seeds, const GraphIndex& index,
                                 const RetrievalParams& params, std::vector<std::string>* warnings) {
    ScoreVector v;
    v.values.assign(index.node_count(), 0.0);
    std::vector<std::size_t> rows;
    for (const auto& s : seeds) {
        auto row = index.entity_index(s);
        if (!row) {
            if (warnings) warnings->push_back("seed entity '" + s + "' is not in the index");
            continue;
        }
        rows.push_back(*row);
    }
    if (rows.empty()) throw NoSeedsError("no seed entity resolves to an index node");

    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    double total = 0.0;
    for (auto r : rows) {
        v.values[r] = params.use_node_score_restart ? index.entities()[r].node_score : 1.0;
        total += v.values[r];
    }
    for (auto r : rows) v.values[r] /= total;
    return v;
}

ScoreVector run_ppr(const CscMatrix& m, std::span<const double> v0, const RetrievalParams& params,
                    const IterationObserver& observer) {
    params.validate();
    if (v0.size() != m.n) {
        throw Error(ErrorKind::Internal,
                    fmt::format("restart vector has {} entries for a {}-node graph", v0.size(), m.n));
    }
    double v0_sum = 0.0;
    for (double x : v0) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorKind::Internal, "restart vector has a negative entry");
        v0_sum += x;
    }
    if (std::abs(v0_sum - 1.0) > 1e-9) {
        throw Error(ErrorKind::Internal, fmt::format("restart vector sums to {}, expected 1", v0_sum));
    }

    const double alpha = params.alpha;
    const double damp = 1.0 - alpha;
    ScoreVector out;
    std::vector<double> v(v0.begin(), v0.end());
    std::vector<double> next(m.n);
    for (int t = 1; t <= params.max_iter; ++t) {
        double dangling = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) {
            if (m.is_dangling(j)) dangling += v[j];
        }
        const double restart = alpha + damp * dangling;
        for (std::size_t i = 0; i < m.n; ++i) next[i] = restart * v0[i];
        for (std::size_t j = 0; j < m.n; ++j) {
            const double mass = damp * v[j];
            if (mass == 0.0) continue;
            for (auto k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) next[m.row_idx[k]] += m.values[k] * mass;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < m.n; ++i) {
            if (!std::isfinite(next[i])) {
                throw NumericalError(fmt::format("non-finite PPR score at node {} in iteration {}", i, t), t);
            }
            diff += std::abs(next[i] - v[i]);
        }
        v.swap(next);
        if (observer) observer(t, v);
        out.iteration_count = t;
        if (diff < params.tol) {
            out.converged = true;
            break;
        }
    }
    out.values = std::move(v);
    return out;
}

ScoreVector run_ppr(const GraphIndex& index, const ScoreVector& v0, const RetrievalParams& params,
                    const IterationObserver& observer) {
    return run_ppr(index.adjacency(), v0.values, params, observer);
}

}  // namespace propex
