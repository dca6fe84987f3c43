/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_PLR_HPP
#define DCDP_PLR_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include <dcdp/core.hpp>
#include <dcdp/estimators.hpp>
#include <dcdp/observations.hpp>
#include <dcdp/stats_cache.hpp>

namespace dcdp {

enum class CovarianceLoss {
    likelihood,  ///< Gaussian negative log-likelihood of the precision MLE
    frobenius,   ///< sum ||x x' - Sigma_hat||_F^2; experimental
};

struct RefineConfig {
    double zeta = 0.0;
    double zeta_scale = 1.0;
    Index edge_margin = 2;
    ModelSpec model;
    CovarianceLoss covariance_loss = CovarianceLoss::likelihood;

    void validate() const;
};

/// Joint fit of a single split at eta inside (s, e]. The left segment is
/// (s, eta], the right (eta, e]. Mean and regression carry coefficient
/// vectors, graphical carries precision (or covariance, for the Frobenius
/// loss) matrices in left_matrix / right_matrix.
struct TwoSegmentFit {
    Index eta = 0;
    Eigen::VectorXd theta_left;
    Eigen::VectorXd theta_right;
    Eigen::MatrixXd left_matrix;
    Eigen::MatrixXd right_matrix;
    double penalized_value = 0.0;
    double unpenalized_value = 0.0;
    bool converged = true;
};

/// Group penalty sum_i sqrt((eta - s) a_i^2 + (e - eta) b_i^2).
double group_penalty(const Eigen::VectorXd& left, const Eigen::VectorXd& right, Index s, Index e, Index eta);

/// Trimmed windows (s_k, e_k] around each estimate with
/// s_k = floor(2/3 eta_{k-1} + 1/3 eta_k), e_k = ceil(1/3 eta_k + 2/3 eta_{k+1}).
std::vector<Interval> refine_intervals(const ChangePointSet& cps);

TwoSegmentFit two_segment_mean(const PrefixCache& cache, Index s, Index e, Index eta, double zeta);
TwoSegmentFit two_segment_regression(const PrefixCache& cache, Index s, Index e, Index eta, double zeta,
                                     const ModelSpec& spec, const TwoSegmentFit* warm_start = nullptr);
TwoSegmentFit two_segment_graphical(const PrefixCache& cache, Index s, Index e, Index eta, const ModelSpec& spec,
                                    CovarianceLoss loss = CovarianceLoss::likelihood);

struct RefinedPoint {
    Interval window{0, 1};
    Index initial = 0;
    Index stage_one = 0;  ///< joint minimizer
    Index refined = 0;    ///< frozen-parameter re-scan minimizer
    double stage_two_at_refined = 0.0;
    double stage_two_at_stage_one = 0.0;
    bool kept = false;    ///< window too short, or reverted to keep ordering
};

struct RefineReport {
    ChangePointSet points;
    std::vector<RefinedPoint> details;
    std::vector<std::string> warnings;
};

RefineReport refine_detailed(const PrefixCache& cache, const ChangePointSet& cps, const RefineConfig& config);
ChangePointSet refine(const PrefixCache& cache, const ChangePointSet& cps, const RefineConfig& config);
ChangePointSet refine(const ObservationSet& data, const ChangePointSet& cps, const RefineConfig& config);

}  // namespace dcdp

#endif  // DCDP_PLR_HPP
