/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_OBSERVATIONS_HPP
#define DCDP_OBSERVATIONS_HPP

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include <dcdp/core.hpp>

namespace dcdp {

enum class ModelFamily { mean, regression, graphical };

std::string_view to_string(ModelFamily family) noexcept;
ModelFamily parse_family(std::string_view name);

/// n x p observations (row t is time index t+1) with an optional response for
/// the regression family.
class ObservationSet {
public:
    ObservationSet(Eigen::MatrixXd x, ModelFamily family);
    ObservationSet(Eigen::MatrixXd x, Eigen::VectorXd y, ModelFamily family);

    Index n() const noexcept { return x_.rows(); }
    Index p() const noexcept { return x_.cols(); }
    ModelFamily family() const noexcept { return family_; }
    const Eigen::MatrixXd& x() const noexcept { return x_; }
    bool has_response() const noexcept { return y_.has_value(); }
    const Eigen::VectorXd& y() const;

    /// Rows start, start + step, ... (0-based) as a new set.
    ObservationSet strided(Index start, Index step) const;

private:
    Eigen::MatrixXd x_;
    std::optional<Eigen::VectorXd> y_;
    ModelFamily family_;
};

}  // namespace dcdp

#endif  // DCDP_OBSERVATIONS_HPP
