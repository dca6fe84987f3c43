/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_DETECTOR_HPP
#define DCDP_DETECTOR_HPP

#include <optional>
#include <string>
#include <vector>

#include <dcdp/core.hpp>
#include <dcdp/ddp.hpp>
#include <dcdp/estimators.hpp>
#include <dcdp/observations.hpp>
#include <dcdp/plr.hpp>
#include <dcdp/stats_cache.hpp>
#include <dcdp/tuning.hpp>

namespace dcdp {

/// User-facing detector settings. Every optional left empty is resolved from
/// the data; the resolved values are reported in DetectionResult::params.
struct DetectorConfig {
    std::optional<double> gamma;          ///< empty: cross-validate
    std::optional<double> zeta;           ///< empty: zeta_scale * sigma * sqrt(log(p v n))
    std::optional<double> lambda;         ///< empty: lambda_scale * sigma * sqrt(log(p v n))
    std::optional<Index> min_span;
    std::optional<Index> grid_size;       ///< empty: default_grid_size(n, delta_min_hint)
    std::optional<Index> delta_min_hint;  ///< empty: n / (expected_k + 1)
    std::optional<Index> edge_margin;
    GridKind grid_kind = GridKind::uniform;
    std::uint64_t grid_seed = 0;
    ModelDefaults defaults;
    double zeta_scale = 1.0;
    Index expected_k = 3;
    bool refine = true;
    CovarianceLoss covariance_loss = CovarianceLoss::likelihood;
    CacheOptions cache;

    // Cross-validation ladders; empty means the default geometric ladder.
    std::vector<double> gamma_ladder;
    std::vector<double> zeta_ladder;
    Pairing pairing = Pairing::zipped;
    int ladder_points = 8;
    double ladder_low = 0.05;
    double ladder_high = 5.0;
};

struct ResolvedParameters {
    ModelSpec model;
    double gamma = 0.0;
    double zeta = 0.0;
    GridSpec grid;
    Index grid_size = 0;
    Index delta_min_hint = 0;
    Index edge_margin = 1;
    double noise_scale = 1.0;
    bool gamma_from_cv = false;
};

struct SegmentEstimate {
    Interval segment{0, 1};
    FitResult fit;
};

struct DetectionResult {
    ChangePointSet divide_points;
    ChangePointSet refined_points;
    std::vector<SegmentEstimate> segments;
    ResolvedParameters params;
    std::optional<CvReport> cv;
    double divide_seconds = 0.0;
    double refine_seconds = 0.0;
    double tune_seconds = 0.0;
    std::vector<std::string> warnings;
};

/// Everything in ResolvedParameters except gamma (and zeta when it comes from
/// cross-validation).
ResolvedParameters resolve_parameters(const ObservationSet& data, const DetectorConfig& config);

/// Builds the cross-validation plan and the templates for the training half.
struct CvSetup {
    CvPlan plan;
    DivideConfig divide_template;
    RefineConfig refine_template;
    double pivot = 0.0;
};
CvSetup make_cv_setup(const ObservationSet& data, const ResolvedParameters& params, const DetectorConfig& config);

/// Divide then (optionally) refine on the full series.
DetectionResult detect(const ObservationSet& data, const DetectorConfig& config);

}  // namespace dcdp

#endif  // DCDP_DETECTOR_HPP
