/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_STATS_CACHE_HPP
#define DCDP_STATS_CACHE_HPP

#include <vector>

#include <Eigen/Dense>

#include <dcdp/core.hpp>
#include <dcdp/observations.hpp>

namespace dcdp {

/// Sufficient statistics of the observations in one interval. Which members
/// are populated depends on the model family of the cache that produced it:
/// mean fills sum_x and sum_x2, regression fills sum_x, sum_xx, sum_xy and
/// sum_yy, graphical fills sum_x and sum_xx.
struct IntervalStats {
    Index count = 0;
    Eigen::VectorXd sum_x;
    Eigen::VectorXd sum_x2;
    Eigen::MatrixXd sum_xx;
    Eigen::VectorXd sum_xy;
    double sum_yy = 0.0;

    void resize(ModelFamily family, Index p);
    void set_zero();
};

enum class CacheMode {
    prefix,     ///< cumulative tables for every statistic
    streaming,  ///< no cumulative second-moment table; sum_xx is recomputed
};

struct CacheOptions {
    /// Upper bound on (n + 1) * p * p for storing the cumulative
    /// second-moment table.
    double xx_budget = 2e8;
    /// Use the streaming update in the divide step even when the table fits.
    bool streaming = false;
};

/// Cumulative sums over the observations, so that the statistics of any
/// interval (s, e] are entry e minus entry s.
class PrefixCache {
public:
    PrefixCache(const ObservationSet& data, CacheOptions options = {});

    Index n() const noexcept { return n_; }
    Index p() const noexcept { return p_; }
    ModelFamily family() const noexcept { return family_; }
    CacheMode mode() const noexcept { return mode_; }

    IntervalStats interval_stats(const Interval& interval) const;
    void interval_stats(const Interval& interval, IntervalStats& out) const;

    /// Adds the statistic of the single observation at time index t
    /// (1-based) to out.
    void add_observation(Index t, IntervalStats& out) const;

    /// Cumulative entries, 0 <= t <= n.
    Eigen::VectorXd cum_x(Index t) const { return cum_x_.row(t).transpose(); }
    Eigen::VectorXd cum_x2(Index t) const;
    Eigen::MatrixXd cum_xx(Index t) const;
    Eigen::VectorXd cum_xy(Index t) const;
    double cum_yy(Index t) const;

    const Eigen::MatrixXd& x() const noexcept { return x_; }
    const Eigen::VectorXd& y() const noexcept { return y_; }

private:
    void check(const Interval& interval) const;

    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    Index n_;
    Index p_;
    ModelFamily family_;
    CacheMode mode_;
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
    RowMatrix cum_x_;
    RowMatrix cum_x2_;
    RowMatrix cum_xy_;
    Eigen::VectorXd cum_yy_;
    std::vector<double> cum_xx_;
};

PrefixCache build_cache(const ObservationSet& data, CacheOptions options = {});

}  // namespace dcdp

#endif  // DCDP_STATS_CACHE_HPP
