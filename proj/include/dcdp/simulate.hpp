/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_SIMULATE_HPP
#define DCDP_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <dcdp/core.hpp>
#include <dcdp/detector.hpp>
#include <dcdp/observations.hpp>

namespace dcdp {

/// Synthetic piecewise-stationary series. Change point k sits at
/// k * spacing + round(U[-jitter * spacing, jitter * spacing]).
///
/// mean:       segment k has mean delta on coordinates 5k..5k+4 (mod p),
///             noise N(0, sigma_eps^2) per coordinate. For p <= 5 the
///             segment means alternate 0 and delta on every coordinate.
/// regression: same block pattern for the coefficients, X ~ N(0, I_p),
///             y = X beta + N(0, sigma_eps^2).
/// graphical:  covariance alternates I_p and tridiag(delta, delta2),
///             starting with I_p.
struct SimConfig {
    ModelFamily family = ModelFamily::mean;
    Index n = 0;              ///< 0: (K + 1) * spacing
    Index p = 1;
    Index k = 0;
    Index spacing = 0;        ///< 0: n / (K + 1)
    double delta = 5.0;
    double delta2 = 0.3;
    double sigma_eps = 1.0;
    std::uint64_t seed = 0;
    double jitter = 0.3;

    void validate() const;
    Index length() const;
    Index resolved_spacing() const;
};

struct SimData {
    ObservationSet data;
    ChangePointSet truth;
};

SimData gen_mean(const SimConfig& config);
SimData gen_regression(const SimConfig& config);
SimData gen_ggm(const SimConfig& config);
SimData generate(const SimConfig& config);

/// tridiag(d1, d2) covariance; throws infeasible-config unless d1 > 2 d2 >= 0.
Eigen::MatrixXd tridiagonal_covariance(Index p, double d1, double d2);

enum class CountComparison { less, equal, greater };

struct TrialOutcome {
    std::uint64_t seed = 0;
    std::optional<double> hausdorff;         ///< refined estimate vs truth
    std::optional<double> hausdorff_divide;  ///< divide-step estimate vs truth
    CountComparison k_compare = CountComparison::equal;
    double divide_seconds = 0.0;
    double refine_seconds = 0.0;
    double tune_seconds = 0.0;
    double gamma = 0.0;
    ChangePointSet estimated;
    ChangePointSet divide_points;
    ChangePointSet truth;

    double total_seconds() const { return divide_seconds + refine_seconds + tune_seconds; }
};

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  ///< sample standard deviation; 0 for a single value
    std::size_t count = 0;
};

MeanSd mean_sd(const std::vector<double>& values);
double median(std::vector<double> values);

struct TrialReport {
    std::vector<TrialOutcome> trials;
    MeanSd hausdorff;
    MeanSd seconds;
    std::size_t k_less = 0;
    std::size_t k_equal = 0;
    std::size_t k_greater = 0;
};

/// Seed of trial `index` under a base seed.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

TrialOutcome run_trial(const SimConfig& config, const DetectorConfig& detector);

/// Runs `trials` independent trials (config.seed is the base seed) on up to
/// `jobs` worker threads.
TrialReport run_trials(const SimConfig& config, int trials, const DetectorConfig& detector, int jobs = 1);

TrialReport aggregate(std::vector<TrialOutcome> trials);

/// "0.00 (0.00) & 0.7s (0.1) & 0 & 100 & 0" layout of the benchmark tables.
std::string format_table_row(const std::string& setting, const TrialReport& report);

struct ScalingPoint {
    Index n = 0;
    Index grid_size = 0;
    double divide_seconds = 0.0;   ///< median over repetitions
    double refine_seconds = 0.0;
    std::optional<double> hausdorff_divide;
    std::optional<double> hausdorff;
};

/// Times the divide and conquer steps on univariate mean data for each
/// (n, Q) pair with a fixed gamma. Reported times are medians over
/// `repetitions` runs on the same data.
std::vector<ScalingPoint> run_scaling(const SimConfig& base, const std::vector<std::pair<Index, Index>>& sizes,
                                      double gamma, int repetitions, CacheOptions cache = {});

/// Slope of the least-squares line through (log x, log y).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dcdp

#endif  // DCDP_SIMULATE_HPP
