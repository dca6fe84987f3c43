/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_DDP_HPP
#define DCDP_DDP_HPP

#include <span>
#include <vector>

#include <dcdp/core.hpp>
#include <dcdp/estimators.hpp>
#include <dcdp/observations.hpp>
#include <dcdp/stats_cache.hpp>

namespace dcdp {

struct DivideConfig {
    double gamma = 1.0;
    GridSpec grid;
    ModelSpec model;

    void validate() const;
};

/// Forward-pass table of the grid dynamic program. nodes is
/// {0} u grid u {n}; best_cost[r] is the minimal penalized cost of a
/// partition of (0, nodes[r]] with breakpoints on the grid and back_ptr[r]
/// the position of the last breakpoint before nodes[r] (-1 for position 0).
struct DpState {
    std::vector<Index> nodes;
    std::vector<double> best_cost;
    std::vector<std::ptrdiff_t> back_ptr;

    ChangePointSet backtrack() const;
};

/// Runs the forward pass for every penalty in gammas at once; each interval
/// cost is evaluated a single time.
std::vector<DpState> divide_states(const PrefixCache& cache, std::span<const Index> grid,
                                   std::span<const double> gammas, const ModelSpec& spec);

DpState divide_state(const PrefixCache& cache, std::span<const Index> grid, double gamma, const ModelSpec& spec);

/// Minimizes sum of goodness-of-fit plus gamma per segment over all
/// partitions whose breakpoints lie on the resolved grid.
ChangePointSet divide(const ObservationSet& data, const DivideConfig& config);
ChangePointSet divide(const PrefixCache& cache, const DivideConfig& config);

double divide_objective(const ObservationSet& data, const ChangePointSet& cps, const DivideConfig& config);
double divide_objective(const PrefixCache& cache, const ChangePointSet& cps, const DivideConfig& config);

}  // namespace dcdp

#endif  // DCDP_DDP_HPP
