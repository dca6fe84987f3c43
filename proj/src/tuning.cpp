/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/tuning.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcdp {

void CvPlan::validate() const
{
    if (gamma_grid.empty() || zeta_grid.empty()) {
        throw Error(ErrorKind::invalid_config, "cross-validation ladders must be nonempty");
    }
    for (double g : gamma_grid) {
        if (!(g > 0.0) || !std::isfinite(g)) throw Error(ErrorKind::invalid_config, "gamma candidates must be positive");
    }
    for (double z : zeta_grid) {
        if (!(z >= 0.0) || !std::isfinite(z)) throw Error(ErrorKind::invalid_config, "zeta candidates must be non-negative");
    }
    if (pairing == Pairing::zipped && gamma_grid.size() != zeta_grid.size()) {
        throw Error(ErrorKind::invalid_config, "zipped pairing needs ladders of equal length");
    }
}

std::vector<std::pair<double, double>> CvPlan::candidates() const
{
    std::vector<std::pair<double, double>> out;
    if (pairing == Pairing::zipped) {
        for (std::size_t i = 0; i < gamma_grid.size(); ++i) out.emplace_back(gamma_grid[i], zeta_grid[i]);
    } else {
        for (double g : gamma_grid) {
            for (double z : zeta_grid) out.emplace_back(g, z);
        }
    }
    return out;
}

OddEvenSplit odd_even_split(const ObservationSet& data)
{
    if (data.n() < 4) {
        throw Error(ErrorKind::too_short, "cross-validation needs at least 4 observations");
    }
    return OddEvenSplit{data.strided(0, 2), data.strided(1, 2)};
}

namespace {

ModelSpec cv_model(ModelSpec model)
{
    // Held-out scoring must never fail on a short training segment.
    if (model.family == ModelFamily::graphical) model.ridge_eps = std::max(model.ridge_eps, 1e-8);
    return model;
}

}  // namespace

double held_out_risk(const PrefixCache& train, const PrefixCache& test, const ChangePointSet& train_points,
                     const ModelSpec& model)
{
    const ModelSpec spec = cv_model(model);
    double risk = 0.0;
    for (const Interval& seg : partition_of(train_points)) {
        const Index lo = std::min(seg.start(), test.n());
        const Index hi = std::min(seg.end(), test.n());
        if (hi <= lo) continue;
        const FitResult fit = fit_interval(train.interval_stats(seg), spec, false);
        risk += parameter_loss(test.interval_stats(Interval(lo, hi)), fit);
    }
    // Test rows past the last training boundary belong to the final segment;
    // with the odd/even split the test half is never longer than the
    // training half, so nothing is left over here.
    return risk;
}

CvReport cv_select(const ObservationSet& data, const CvPlan& plan, const DivideConfig& divide_template,
                   const RefineConfig& refine_template)
{
    plan.validate();
    divide_template.model.validate();
    const OddEvenSplit split = odd_even_split(data);
    const PrefixCache train = build_cache(split.train);
    const PrefixCache test = build_cache(split.test);
    const auto grid = resolve_grid(divide_template.grid, train.n());
    const auto pairs = plan.candidates();

    std::vector<double> gammas;
    for (const auto& [g, z] : pairs) {
        if (std::find(gammas.begin(), gammas.end(), g) == gammas.end()) gammas.push_back(g);
    }
    const auto states = divide_states(train, grid, gammas, divide_template.model);

    CvReport report;
    report.candidates.reserve(pairs.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [gamma, zeta] = pairs[i];
        const auto g = static_cast<std::size_t>(std::find(gammas.begin(), gammas.end(), gamma) - gammas.begin());
        const ChangePointSet proxy = states[g].backtrack();
        RefineConfig rc = refine_template;
        rc.zeta = zeta;
        rc.model = divide_template.model;
        const ChangePointSet refined = refine(train, proxy, rc);
        CvCandidate cand;
        cand.gamma = gamma;
        cand.zeta = zeta;
        cand.risk = held_out_risk(train, test, refined, divide_template.model);
        cand.train_points = refined;
        if (cand.risk < best) {
            best = cand.risk;
            report.selected = i;
        }
        report.candidates.push_back(std::move(cand));
    }
    report.selected_gamma = report.candidates[report.selected].gamma;
    report.selected_zeta = report.candidates[report.selected].zeta;
    return report;
}

std::vector<double> default_gamma_ladder(const ObservationSet& data, const ModelSpec& model, Index expected_k,
                                         int points, double low, double high, double* pivot_out)
{
    if (points < 1 || !(low > 0.0) || !(high >= low)) {
        throw Error(ErrorKind::invalid_config, "gamma ladder needs points >= 1 and 0 < low <= high");
    }
    const PrefixCache cache = build_cache(data);
    ModelSpec spec = cv_model(model);
    double total = std::abs(fit_interval(cache.interval_stats(Interval(0, cache.n())), spec, false).gof);
    if (model.family == ModelFamily::graphical) {
        // The likelihood is not scale free; keep the pivot at least at the
        // size of the trace term.
        total = std::max(total, static_cast<double>(cache.n() * cache.p()));
    }
    if (!(total > 0.0)) total = static_cast<double>(cache.n());
    const double pivot = total / static_cast<double>(std::max<Index>(expected_k, 0) + 1);
    if (pivot_out) *pivot_out = pivot;
    std::vector<double> ladder;
    ladder.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double frac = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        ladder.push_back(pivot * low * std::pow(high / low, frac));
    }
    return ladder;
}

}  // namespace dcdp
