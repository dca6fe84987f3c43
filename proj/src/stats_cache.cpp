/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/stats_cache.hpp>

#include <string>

namespace dcdp {

void IntervalStats::resize(ModelFamily family, Index p)
{
    sum_x.resize(p);
    switch (family) {
    case ModelFamily::mean:
        sum_x2.resize(p);
        break;
    case ModelFamily::regression:
        sum_xx.resize(p, p);
        sum_xy.resize(p);
        break;
    case ModelFamily::graphical:
        sum_xx.resize(p, p);
        break;
    }
}

void IntervalStats::set_zero()
{
    count = 0;
    sum_x.setZero();
    sum_x2.setZero();
    sum_xx.setZero();
    sum_xy.setZero();
    sum_yy = 0.0;
}

PrefixCache::PrefixCache(const ObservationSet& data, CacheOptions options)
    : n_(data.n()), p_(data.p()), family_(data.family()), mode_(CacheMode::prefix), x_(data.x())
{
    if (family_ == ModelFamily::regression) {
        if (!data.has_response()) {
            throw Error(ErrorKind::missing_response, "regression cache requires a response");
        }
        y_ = data.y();
    }

    cum_x_.setZero(n_ + 1, p_);
    for (Index t = 0; t < n_; ++t) {
        cum_x_.row(t + 1) = cum_x_.row(t) + x_.row(t);
    }

    if (family_ == ModelFamily::mean) {
        cum_x2_.setZero(n_ + 1, p_);
        for (Index t = 0; t < n_; ++t) {
            cum_x2_.row(t + 1) = cum_x2_.row(t) + x_.row(t).array().square().matrix();
        }
        if (options.streaming) mode_ = CacheMode::streaming;
        return;
    }

    if (family_ == ModelFamily::regression) {
        cum_xy_.setZero(n_ + 1, p_);
        cum_yy_.setZero(n_ + 1);
        for (Index t = 0; t < n_; ++t) {
            cum_xy_.row(t + 1) = cum_xy_.row(t) + x_.row(t) * y_(t);
            cum_yy_(t + 1) = cum_yy_(t) + y_(t) * y_(t);
        }
    }

    const double entries = static_cast<double>(n_ + 1) * static_cast<double>(p_) * static_cast<double>(p_);
    if (options.streaming || entries > options.xx_budget) {
        mode_ = CacheMode::streaming;
        return;
    }
    const auto pp = static_cast<std::size_t>(p_ * p_);
    cum_xx_.assign(static_cast<std::size_t>(n_ + 1) * pp, 0.0);
    for (Index t = 0; t < n_; ++t) {
        Eigen::Map<const Eigen::MatrixXd> prev(cum_xx_.data() + static_cast<std::size_t>(t) * pp, p_, p_);
        Eigen::Map<Eigen::MatrixXd> next(cum_xx_.data() + static_cast<std::size_t>(t + 1) * pp, p_, p_);
        next.noalias() = prev + x_.row(t).transpose() * x_.row(t);
    }
}

void PrefixCache::check(const Interval& interval) const
{
    if (interval.end() > n_) {
        throw Error(ErrorKind::invalid_interval, "interval (" + std::to_string(interval.start()) + ", " +
                                                     std::to_string(interval.end()) + "] exceeds n = " +
                                                     std::to_string(n_));
    }
}

IntervalStats PrefixCache::interval_stats(const Interval& interval) const
{
    IntervalStats out;
    out.resize(family_, p_);
    interval_stats(interval, out);
    return out;
}

void PrefixCache::interval_stats(const Interval& interval, IntervalStats& out) const
{
    check(interval);
    const Index s = interval.start();
    const Index e = interval.end();
    out.count = e - s;
    out.sum_x = (cum_x_.row(e) - cum_x_.row(s)).transpose();
    switch (family_) {
    case ModelFamily::mean:
        out.sum_x2 = (cum_x2_.row(e) - cum_x2_.row(s)).transpose();
        return;
    case ModelFamily::regression:
        out.sum_xy = (cum_xy_.row(e) - cum_xy_.row(s)).transpose();
        out.sum_yy = cum_yy_(e) - cum_yy_(s);
        break;
    case ModelFamily::graphical:
        break;
    }
    if (mode_ == CacheMode::prefix) {
        const auto pp = static_cast<std::size_t>(p_ * p_);
        Eigen::Map<const Eigen::MatrixXd> hi(cum_xx_.data() + static_cast<std::size_t>(e) * pp, p_, p_);
        Eigen::Map<const Eigen::MatrixXd> lo(cum_xx_.data() + static_cast<std::size_t>(s) * pp, p_, p_);
        out.sum_xx = hi - lo;
    } else {
        const auto rows = x_.middleRows(s, e - s);
        out.sum_xx.noalias() = rows.transpose() * rows;
    }
}

void PrefixCache::add_observation(Index t, IntervalStats& out) const
{
    const auto row = x_.row(t - 1);
    out.count += 1;
    out.sum_x += row.transpose();
    switch (family_) {
    case ModelFamily::mean:
        out.sum_x2 += row.transpose().array().square().matrix();
        return;
    case ModelFamily::regression: {
        const double yt = y_(t - 1);
        out.sum_xy += row.transpose() * yt;
        out.sum_yy += yt * yt;
        out.sum_xx.noalias() += row.transpose() * row;
        return;
    }
    case ModelFamily::graphical:
        out.sum_xx.noalias() += row.transpose() * row;
        return;
    }
}

Eigen::VectorXd PrefixCache::cum_x2(Index t) const
{
    if (family_ != ModelFamily::mean) {
        throw Error(ErrorKind::invalid_config, "cum_x2 is only kept for the mean family");
    }
    return cum_x2_.row(t).transpose();
}

Eigen::MatrixXd PrefixCache::cum_xx(Index t) const
{
    if (cum_xx_.empty()) {
        throw Error(ErrorKind::invalid_config, "cumulative second moments are not stored in this cache");
    }
    const auto pp = static_cast<std::size_t>(p_ * p_);
    return Eigen::Map<const Eigen::MatrixXd>(cum_xx_.data() + static_cast<std::size_t>(t) * pp, p_, p_);
}

Eigen::VectorXd PrefixCache::cum_xy(Index t) const
{
    if (family_ != ModelFamily::regression) {
        throw Error(ErrorKind::missing_response, "cum_xy is only kept for the regression family");
    }
    return cum_xy_.row(t).transpose();
}

double PrefixCache::cum_yy(Index t) const
{
    if (family_ != ModelFamily::regression) {
        throw Error(ErrorKind::missing_response, "cum_yy is only kept for the regression family");
    }
    return cum_yy_(t);
}

PrefixCache build_cache(const ObservationSet& data, CacheOptions options)
{
    return PrefixCache(data, options);
}

}  // namespace dcdp
