/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_CORE_HPP
#define DCDP_CORE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <dcdp/error.hpp>

namespace dcdp {

using Index = std::int64_t;

/// Half-open index range (start, end] over the observation indices 1..n.
/// Row t of an n-row data matrix is observation t+1, so (s, e] covers rows
/// s..e-1.
class Interval {
public:
    Interval(Index start, Index end);

    Index start() const noexcept { return start_; }
    Index end() const noexcept { return end_; }
    Index length() const noexcept { return end_ - start_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Index start_;
    Index end_;
};

/// Sorted interior change points of a series of length n. A point eta is the
/// last index of its left segment, so the induced partition is
/// (0, eta_1], (eta_1, eta_2], ..., (eta_K, n].
class ChangePointSet {
public:
    ChangePointSet() = default;
    ChangePointSet(std::vector<Index> points, Index n);

    const std::vector<Index>& points() const noexcept { return points_; }
    Index n() const noexcept { return n_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    /// Smallest segment length of the induced partition.
    Index min_spacing() const;

    friend bool operator==(const ChangePointSet&, const ChangePointSet&) = default;

private:
    std::vector<Index> points_;
    Index n_ = 0;
};

enum class GridKind { uniform, random, explicit_points };

struct GridSpec {
    GridKind kind = GridKind::uniform;
    Index count = 0;
    std::uint64_t seed = 0;
    std::vector<Index> points;

    static GridSpec uniform(Index q) { return {GridKind::uniform, q, 0, {}}; }
    static GridSpec random(Index q, std::uint64_t seed) { return {GridKind::random, q, seed, {}}; }
    static GridSpec explicit_grid(std::vector<Index> pts)
    {
        return {GridKind::explicit_points, static_cast<Index>(pts.size()), 0, std::move(pts)};
    }
};

/// Interior grid nodes, strictly increasing, all inside (0, n).
std::vector<Index> resolve_grid(const GridSpec& spec, Index n);

/// min(n - 1, ceil(4 n / delta_min_hint * ln(n)^2)).
Index default_grid_size(Index n, Index delta_min_hint);

/// Symmetric Hausdorff distance between two nonempty point sets.
double hausdorff(std::span<const Index> a, std::span<const Index> b);
double hausdorff(const ChangePointSet& a, const ChangePointSet& b);

std::vector<Interval> partition_of(const ChangePointSet& cps);

}  // namespace dcdp

#endif  // DCDP_CORE_HPP
