/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_ESTIMATORS_HPP
#define DCDP_ESTIMATORS_HPP

#include <optional>

#include <Eigen/Dense>

#include <dcdp/core.hpp>
#include <dcdp/observations.hpp>
#include <dcdp/stats_cache.hpp>

namespace dcdp {

/// Per-interval estimation settings.
///
/// lambda is the l1 level of the mean and regression estimators; the
/// penalty applied on an interval I is lambda * sqrt(|I|) * ||theta||_1.
/// Intervals shorter than min_span have goodness-of-fit zero and no
/// parameter estimate.
struct ModelSpec {
    ModelFamily family = ModelFamily::mean;
    double lambda = 0.0;
    double lambda_scale = 1.0;
    Index min_span = 1;
    double cd_tol = 1e-7;
    int cd_max_iter = 10000;
    double ridge_eps = 1e-8;

    void validate() const;
};

struct FitResult {
    std::optional<Eigen::VectorXd> coefficients;  ///< mean or regression
    std::optional<Eigen::MatrixXd> precision;     ///< graphical
    double gof = 0.0;
    bool gated = false;
    bool converged = true;
    int iterations = 0;
};

/// Knobs used to materialize a ModelSpec from data.
struct ModelDefaults {
    double lambda_scale = 1.0;
    double span_scale = 0.1;
    double sparsity_hint = 5.0;
};

double soft_threshold(double x, double t) noexcept;

/// Robust noise level: pooled median absolute first difference divided by
/// 0.6745 * sqrt(2). For regression, the median residual variance of least
/// squares fits on overlapping windows of p + 5 rows (first differences of
/// the response when the series is too short).
double estimate_noise_scale(const ObservationSet& data);

/// Materializes lambda and min_span for the given data.
ModelSpec default_model_spec(const ObservationSet& data, const ModelDefaults& defaults = {});

FitResult fit_mean(const IntervalStats& stats, const ModelSpec& spec, bool gate = true);
FitResult fit_lasso(const IntervalStats& stats, const ModelSpec& spec, bool gate = true,
                    const Eigen::VectorXd* warm_start = nullptr);
FitResult fit_precision(const IntervalStats& stats, const ModelSpec& spec, bool gate = true);
FitResult fit_interval(const IntervalStats& stats, const ModelSpec& spec, bool gate = true);

FitResult fit_mean(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec);
FitResult fit_lasso(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec);
FitResult fit_precision(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec);

double goodness_of_fit(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec);

/// Loss of fixed parameters on the observations summarized by stats.
double mean_loss(const IntervalStats& stats, const Eigen::VectorXd& mu);
double regression_loss(const IntervalStats& stats, const Eigen::VectorXd& beta);
double precision_loss(const IntervalStats& stats, const Eigen::MatrixXd& omega, double log_det_omega);
/// Dispatches on whichever parameter the fit carries. The fit must not be
/// gated.
double parameter_loss(const IntervalStats& stats, const FitResult& fit);

/// Allocation-free goodness-of-fit for the dynamic program's inner loop.
/// The regression evaluator warm-starts coordinate descent from the previous
/// call, which only changes results within cd_tol.
class GofEvaluator {
public:
    GofEvaluator(const ModelSpec& spec, Index p);

    double operator()(const IntervalStats& stats);
    void reset_warm_start();

private:
    double mean_gof(const IntervalStats& stats) const;
    double lasso_gof(const IntervalStats& stats);
    double precision_gof(const IntervalStats& stats);

    ModelSpec spec_;
    Eigen::VectorXd beta_;
    Eigen::VectorXd resid_;
    Eigen::MatrixXd cov_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_;
};

}  // namespace dcdp

#endif  // DCDP_ESTIMATORS_HPP
