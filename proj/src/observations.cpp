/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/observations.hpp>

#include <string>

namespace dcdp {

std::string_view to_string(ModelFamily family) noexcept
{
    switch (family) {
    case ModelFamily::mean: return "mean";
    case ModelFamily::regression: return "regression";
    case ModelFamily::graphical: return "graphical";
    }
    return "unknown";
}

ModelFamily parse_family(std::string_view name)
{
    if (name == "mean") return ModelFamily::mean;
    if (name == "regression" || name == "linear") return ModelFamily::regression;
    if (name == "graphical" || name == "ggm" || name == "covariance") return ModelFamily::graphical;
    throw Error(ErrorKind::invalid_config, "unknown model family '" + std::string(name) + "'");
}

ObservationSet::ObservationSet(Eigen::MatrixXd x, ModelFamily family) : x_(std::move(x)), family_(family)
{
    if (x_.rows() < 1 || x_.cols() < 1) {
        throw Error(ErrorKind::invalid_config, "observation matrix must be nonempty");
    }
    if (family_ == ModelFamily::regression) {
        throw Error(ErrorKind::missing_response, "regression family requires a response vector");
    }
}

ObservationSet::ObservationSet(Eigen::MatrixXd x, Eigen::VectorXd y, ModelFamily family)
    : x_(std::move(x)), y_(std::move(y)), family_(family)
{
    if (x_.rows() < 1 || x_.cols() < 1) {
        throw Error(ErrorKind::invalid_config, "observation matrix must be nonempty");
    }
    if (y_->size() != x_.rows()) {
        throw Error(ErrorKind::invalid_config, "response length " + std::to_string(y_->size()) +
                                                   " does not match " + std::to_string(x_.rows()) + " rows");
    }
}

const Eigen::VectorXd& ObservationSet::y() const
{
    if (!y_) {
        throw Error(ErrorKind::missing_response, "observation set has no response");
    }
    return *y_;
}

ObservationSet ObservationSet::strided(Index start, Index step) const
{
    const Index count = start < n() ? (n() - start + step - 1) / step : 0;
    Eigen::MatrixXd xs(count, p());
    Eigen::VectorXd ys(y_ ? count : 0);
    for (Index i = 0; i < count; ++i) {
        xs.row(i) = x_.row(start + i * step);
        if (y_) ys(i) = (*y_)(start + i * step);
    }
    if (y_) return ObservationSet(std::move(xs), std::move(ys), family_);
    return ObservationSet(std::move(xs), family_);
}

}  // namespace dcdp
