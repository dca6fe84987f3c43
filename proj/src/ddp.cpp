/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/ddp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcdp {

void DivideConfig::validate() const
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorKind::invalid_config, "gamma must be positive and finite");
    }
    model.validate();
}

ChangePointSet DpState::backtrack() const
{
    std::vector<Index> points;
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(nodes.size()) - 1;
    while (k > 0) {
        const std::ptrdiff_t h = back_ptr[static_cast<std::size_t>(k)];
        if (h > 0) points.push_back(nodes[static_cast<std::size_t>(h)]);
        k = h;
    }
    std::reverse(points.begin(), points.end());
    return ChangePointSet(std::move(points), nodes.back());
}

std::vector<DpState> divide_states(const PrefixCache& cache, std::span<const Index> grid,
                                   std::span<const double> gammas, const ModelSpec& spec)
{
    const Index n = cache.n();
    std::vector<Index> nodes;
    nodes.reserve(grid.size() + 2);
    nodes.push_back(0);
    for (Index s : grid) {
        if (s <= 0 || s >= n || s <= nodes.back()) {
            throw Error(ErrorKind::invalid_grid, "grid must be strictly increasing inside (0, n)");
        }
        nodes.push_back(s);
    }
    nodes.push_back(n);

    const std::size_t m = nodes.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<DpState> states(gammas.size());
    for (auto& st : states) {
        st.nodes = nodes;
        st.best_cost.assign(m, inf);
        st.back_ptr.assign(m, -1);
        st.best_cost[0] = 0.0;
    }

    GofEvaluator gof(spec, cache.p());
    IntervalStats stats;
    stats.resize(cache.family(), cache.p());
    const bool streaming = cache.mode() == CacheMode::streaming;

    for (std::size_t r = 1; r < m; ++r) {
        gof.reset_warm_start();
        if (streaming) stats.set_zero();
        // Descending l grows the interval one block at a time, which is what
        // the streaming accumulator and the Lasso warm start both rely on.
        for (std::size_t l = r; l-- > 0;) {
            if (streaming) {
                for (Index t = nodes[l] + 1; t <= nodes[l + 1]; ++t) cache.add_observation(t, stats);
            } else {
                cache.interval_stats(Interval(nodes[l], nodes[r]), stats);
            }
            const double f = gof(stats);
            for (std::size_t g = 0; g < gammas.size(); ++g) {
                DpState& st = states[g];
                const double b = st.best_cost[l] + gammas[g] + f;
                // <= with descending l keeps the smallest l among ties.
                if (b <= st.best_cost[r]) {
                    st.best_cost[r] = b;
                    st.back_ptr[r] = static_cast<std::ptrdiff_t>(l);
                }
            }
        }
    }
    return states;
}

DpState divide_state(const PrefixCache& cache, std::span<const Index> grid, double gamma, const ModelSpec& spec)
{
    const double gammas[] = {gamma};
    return std::move(divide_states(cache, grid, gammas, spec).front());
}

ChangePointSet divide(const PrefixCache& cache, const DivideConfig& config)
{
    config.validate();
    const auto grid = resolve_grid(config.grid, cache.n());
    return divide_state(cache, grid, config.gamma, config.model).backtrack();
}

ChangePointSet divide(const ObservationSet& data, const DivideConfig& config)
{
    config.validate();
    return divide(build_cache(data), config);
}

double divide_objective(const PrefixCache& cache, const ChangePointSet& cps, const DivideConfig& config)
{
    double total = 0.0;
    for (const Interval& seg : partition_of(cps)) {
        total += goodness_of_fit(cache, seg, config.model) + config.gamma;
    }
    return total;
}

double divide_objective(const ObservationSet& data, const ChangePointSet& cps, const DivideConfig& config)
{
    return divide_objective(build_cache(data), cps, config);
}

}  // namespace dcdp
