/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/detector.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dcdp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Grid cells shorter than min_span are gated to zero cost, so a finer grid
// only adds free micro-segments. Mean and graphical keep the spacing at least
// min_span. Regression is left alone: a cell that straddles a change is fit
// almost exactly by the Lasso, and a coarse grid turns it into a spurious
// extra segment.
Index capped_grid_size(Index n, Index hint, const ModelSpec& model)
{
    const Index q = default_grid_size(n, hint);
    if (model.family == ModelFamily::regression || model.min_span <= 1) return q;
    return std::clamp<Index>(n / model.min_span - 1, 0, q);
}

GridSpec make_grid(GridKind kind, Index q, std::uint64_t seed)
{
    if (kind == GridKind::random) return GridSpec::random(q, seed);
    return GridSpec::uniform(q);
}

}  // namespace

ResolvedParameters resolve_parameters(const ObservationSet& data, const DetectorConfig& config)
{
    const Index n = data.n();
    if (n < 2) throw Error(ErrorKind::too_short, "detection needs at least 2 observations");
    if (config.grid_kind == GridKind::explicit_points) {
        throw Error(ErrorKind::invalid_config, "the detector resolves uniform or random grids only");
    }
    ResolvedParameters out;
    out.model = default_model_spec(data, config.defaults);
    if (config.lambda) out.model.lambda = *config.lambda;
    if (config.min_span) out.model.min_span = *config.min_span;
    out.model.validate();
    out.noise_scale = estimate_noise_scale(data);

    const Index fallback_hint = std::max<Index>(2, n / (std::max<Index>(config.expected_k, 0) + 1));
    out.delta_min_hint = std::clamp<Index>(config.delta_min_hint.value_or(fallback_hint), 1, n);
    out.grid_size = config.grid_size ? *config.grid_size
                                      : capped_grid_size(n, out.delta_min_hint, out.model);
    if (out.grid_size < 0 || out.grid_size >= n) {
        throw Error(ErrorKind::invalid_grid, "grid size must lie in [0, n)");
    }
    out.grid = make_grid(config.grid_kind, out.grid_size, config.grid_seed);

    const double log_np = std::log(static_cast<double>(std::max(n, data.p())));
    if (config.zeta) {
        out.zeta = *config.zeta;
    } else if (data.family() == ModelFamily::graphical) {
        out.zeta = 0.0;
    } else {
        out.zeta = config.zeta_scale * out.noise_scale * std::sqrt(log_np);
    }

    if (config.edge_margin) {
        out.edge_margin = *config.edge_margin;
    } else if (data.family() == ModelFamily::graphical) {
        out.edge_margin = std::max<Index>(2, out.model.min_span);
    } else {
        out.edge_margin = std::max<Index>(2, (out.model.min_span + 3) / 4);
    }
    if (config.gamma) {
        out.gamma = *config.gamma;
        if (!(out.gamma > 0.0)) throw Error(ErrorKind::invalid_config, "gamma must be positive");
    }
    return out;
}

CvSetup make_cv_setup(const ObservationSet& data, const ResolvedParameters& params, const DetectorConfig& config)
{
    const Index n = data.n();
    const Index m = (n + 1) / 2;
    CvSetup setup;
    Index q_train = 0;
    if (config.grid_size) {
        q_train = std::min(m - 1, *config.grid_size);
    } else {
        q_train = capped_grid_size(m, std::clamp<Index>(params.delta_min_hint / 2, 1, m), params.model);
    }
    setup.divide_template.grid = make_grid(config.grid_kind, q_train, config.grid_seed);
    setup.divide_template.model = params.model;
    setup.refine_template.model = params.model;
    setup.refine_template.edge_margin = params.edge_margin;
    setup.refine_template.covariance_loss = config.covariance_loss;

    if (!config.gamma_ladder.empty()) {
        setup.plan.gamma_grid = config.gamma_ladder;
    } else {
        setup.plan.gamma_grid = default_gamma_ladder(data, params.model, config.expected_k,
                                                     config.ladder_points, config.ladder_low, config.ladder_high,
                                                     &setup.pivot);
    }
    if (!config.zeta_ladder.empty()) {
        setup.plan.zeta_grid = config.zeta_ladder;
    } else {
        const std::size_t len = config.pairing == Pairing::zipped ? setup.plan.gamma_grid.size() : 1;
        setup.plan.zeta_grid.assign(len, params.zeta);
    }
    setup.plan.pairing = config.pairing;
    setup.plan.validate();
    return setup;
}

DetectionResult detect(const ObservationSet& data, const DetectorConfig& config)
{
    DetectionResult result;
    result.params = resolve_parameters(data, config);
    ResolvedParameters& params = result.params;

    if (!config.gamma) {
        const auto start = Clock::now();
        const CvSetup setup = make_cv_setup(data, params, config);
        CvReport report = cv_select(data, setup.plan, setup.divide_template, setup.refine_template);
        report.pivot = setup.pivot;
        params.gamma = report.selected_gamma;
        params.zeta = report.selected_zeta;
        params.gamma_from_cv = true;
        result.cv = std::move(report);
        result.tune_seconds = seconds_since(start);
    }

    auto start = Clock::now();
    const PrefixCache cache = build_cache(data, config.cache);
    const auto grid = resolve_grid(params.grid, data.n());
    result.divide_points = divide_state(cache, grid, params.gamma, params.model).backtrack();
    result.divide_seconds = seconds_since(start);

    start = Clock::now();
    if (config.refine) {
        RefineConfig rc;
        rc.zeta = params.zeta;
        rc.zeta_scale = config.zeta_scale;
        rc.edge_margin = params.edge_margin;
        rc.model = params.model;
        rc.covariance_loss = config.covariance_loss;
        RefineReport report = refine_detailed(cache, result.divide_points, rc);
        result.refined_points = std::move(report.points);
        result.warnings = std::move(report.warnings);
    } else {
        result.refined_points = result.divide_points;
    }
    result.refine_seconds = seconds_since(start);

    for (const Interval& seg : partition_of(result.refined_points)) {
        SegmentEstimate est{seg, {}};
        try {
            est.fit = fit_interval(cache.interval_stats(seg), params.model, false);
        } catch (const Error& err) {
            est.fit.gated = true;
            result.warnings.push_back("segment (" + std::to_string(seg.start()) + ", " + std::to_string(seg.end()) +
                                      "]: " + err.what());
        }
        result.segments.push_back(std::move(est));
    }
    return result;
}

}  // namespace dcdp
