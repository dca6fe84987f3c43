/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/core.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <dcdp/random.hpp>

namespace dcdp {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_grid: return "invalid-grid";
    case ErrorKind::invalid_interval: return "invalid-interval";
    case ErrorKind::invalid_change_points: return "invalid-change-points";
    case ErrorKind::undefined_metric: return "undefined-metric";
    case ErrorKind::missing_response: return "missing-response";
    case ErrorKind::degenerate_design: return "degenerate-design";
    case ErrorKind::singular_covariance: return "singular-covariance";
    case ErrorKind::too_short: return "too-short";
    case ErrorKind::infeasible_config: return "infeasible-config";
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

Interval::Interval(Index start, Index end) : start_(start), end_(end)
{
    if (start < 0 || end <= start) {
        throw Error(ErrorKind::invalid_interval,
                    "interval (" + std::to_string(start) + ", " + std::to_string(end) + "] is empty or negative");
    }
}

ChangePointSet::ChangePointSet(std::vector<Index> points, Index n) : points_(std::move(points)), n_(n)
{
    if (n < 1) {
        throw Error(ErrorKind::invalid_change_points, "series length must be positive");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] <= 0 || points_[i] >= n) {
            throw Error(ErrorKind::invalid_change_points,
                        "change point " + std::to_string(points_[i]) + " outside (0, " + std::to_string(n) + ")");
        }
        if (i > 0 && points_[i] <= points_[i - 1]) {
            throw Error(ErrorKind::invalid_change_points, "change points must be strictly increasing");
        }
    }
}

Index ChangePointSet::min_spacing() const
{
    Index prev = 0;
    Index best = n_;
    for (Index p : points_) {
        best = std::min(best, p - prev);
        prev = p;
    }
    return std::min(best, n_ - prev);
}

std::vector<Index> resolve_grid(const GridSpec& spec, Index n)
{
    if (n < 2) {
        throw Error(ErrorKind::invalid_grid, "grid needs a series of length at least 2");
    }
    std::vector<Index> out;
    switch (spec.kind) {
    case GridKind::uniform: {
        if (spec.count < 0 || spec.count >= n) {
            throw Error(ErrorKind::invalid_grid, "grid size must lie in [0, n)");
        }
        out.reserve(static_cast<std::size_t>(spec.count));
        for (Index i = 1; i <= spec.count; ++i) {
            const Index s = (i * n) / (spec.count + 1);
            if (s > 0 && (out.empty() || out.back() != s)) {
                out.push_back(s);
            }
        }
        break;
    }
    case GridKind::random: {
        if (spec.count < 0 || spec.count >= n) {
            throw Error(ErrorKind::invalid_grid, "grid size must lie in [0, n)");
        }
        // Partial Fisher-Yates over {1..n-1}.
        std::vector<Index> pool(static_cast<std::size_t>(n - 1));
        std::iota(pool.begin(), pool.end(), Index{1});
        Rng rng = make_stream(spec.seed, 0);
        for (Index i = 0; i < spec.count; ++i) {
            std::uniform_int_distribution<Index> pick(i, n - 2);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
        }
        out.assign(pool.begin(), pool.begin() + spec.count);
        std::sort(out.begin(), out.end());
        break;
    }
    case GridKind::explicit_points: {
        for (Index s : spec.points) {
            if (s <= 0 || s >= n) {
                throw Error(ErrorKind::invalid_grid,
                            "grid point " + std::to_string(s) + " outside (0, " + std::to_string(n) + ")");
            }
        }
        out = spec.points;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        break;
    }
    }
    return out;
}

Index default_grid_size(Index n, Index delta_min_hint)
{
    if (n < 2 || delta_min_hint < 1 || delta_min_hint > n) {
        throw Error(ErrorKind::invalid_config, "default grid size needs n >= 2 and 1 <= delta_min_hint <= n");
    }
    const double ln = std::log(static_cast<double>(n));
    const double q = std::ceil(4.0 * static_cast<double>(n) / static_cast<double>(delta_min_hint) * ln * ln);
    if (q >= static_cast<double>(n - 1)) {
        return n - 1;
    }
    return static_cast<Index>(q);
}

namespace {

double directed(std::span<const Index> from, std::span<const Index> to)
{
    double worst = 0.0;
    for (Index x : from) {
        Index nearest = std::numeric_limits<Index>::max();
        for (Index y : to) {
            nearest = std::min(nearest, x > y ? x - y : y - x);
        }
        worst = std::max(worst, static_cast<double>(nearest));
    }
    return worst;
}

}  // namespace

double hausdorff(std::span<const Index> a, std::span<const Index> b)
{
    if (a.empty() || b.empty()) {
        throw Error(ErrorKind::undefined_metric, "Hausdorff distance needs two nonempty sets");
    }
    return std::max(directed(a, b), directed(b, a));
}

double hausdorff(const ChangePointSet& a, const ChangePointSet& b)
{
    return hausdorff(std::span<const Index>(a.points()), std::span<const Index>(b.points()));
}

std::vector<Interval> partition_of(const ChangePointSet& cps)
{
    std::vector<Interval> out;
    out.reserve(cps.size() + 1);
    Index prev = 0;
    for (Index p : cps.points()) {
        out.emplace_back(prev, p);
        prev = p;
    }
    out.emplace_back(prev, cps.n());
    return out;
}

}  // namespace dcdp
