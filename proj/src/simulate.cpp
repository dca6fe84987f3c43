/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/simulate.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <dcdp/random.hpp>

namespace dcdp {

void SimConfig::validate() const
{
    if (p < 1) throw Error(ErrorKind::infeasible_config, "p must be at least 1");
    if (k < 0) throw Error(ErrorKind::infeasible_config, "K must be non-negative");
    if (n < 0 || spacing < 0) throw Error(ErrorKind::infeasible_config, "n and spacing must be non-negative");
    if (n == 0 && spacing == 0) throw Error(ErrorKind::infeasible_config, "either n or spacing must be given");
    if (n > 0 && spacing > 0 && n != (k + 1) * spacing) {
        throw Error(ErrorKind::infeasible_config, "n must equal (K + 1) * spacing");
    }
    if (resolved_spacing() < 1) throw Error(ErrorKind::infeasible_config, "segments would be empty");
    if (!(jitter >= 0.0 && jitter < 0.5)) throw Error(ErrorKind::infeasible_config, "jitter must lie in [0, 0.5)");
    if (!(sigma_eps >= 0.0)) throw Error(ErrorKind::infeasible_config, "sigma_eps must be non-negative");
    if (family == ModelFamily::graphical && !(delta > 2.0 * delta2 && delta2 >= 0.0)) {
        throw Error(ErrorKind::infeasible_config, "graphical model needs delta1 > 2 * delta2 >= 0");
    }
}

Index SimConfig::length() const
{
    return n > 0 ? n : (k + 1) * spacing;
}

Index SimConfig::resolved_spacing() const
{
    return spacing > 0 ? spacing : n / (k + 1);
}

namespace {

ChangePointSet draw_change_points(const SimConfig& cfg, Rng& rng)
{
    const Index n = cfg.length();
    const Index spacing = cfg.resolved_spacing();
    const double half_width = cfg.jitter * static_cast<double>(spacing);
    std::uniform_real_distribution<double> unif(-half_width, half_width);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Index> pts;
        bool ok = true;
        for (Index k = 1; k <= cfg.k; ++k) {
            const Index eta = k * spacing + static_cast<Index>(std::llround(unif(rng)));
            if (eta <= 0 || eta >= n || (!pts.empty() && eta <= pts.back())) {
                ok = false;
                break;
            }
            pts.push_back(eta);
        }
        if (ok) return ChangePointSet(std::move(pts), n);
    }
    throw Error(ErrorKind::infeasible_config, "could not place strictly increasing change points");
}

// With p <= 5 every wrapped block would cover all coordinates, so segments
// alternate between 0 and value instead (the univariate 0, d, 0, d pattern).
Eigen::VectorXd block_vector(Index p, Index segment, double value)
{
    if (p <= 5) return Eigen::VectorXd::Constant(p, segment % 2 ? value : 0.0);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
    for (Index j = 0; j < 5; ++j) v((5 * segment + j) % p) = value;
    return v;
}

Index segment_of(const ChangePointSet& truth, Index row)
{
    // row is 0-based, time index row + 1.
    const auto& pts = truth.points();
    return static_cast<Index>(std::lower_bound(pts.begin(), pts.end(), row + 1) - pts.begin());
}

}  // namespace

SimData gen_mean(const SimConfig& config)
{
    SimConfig cfg = config;
    cfg.family = ModelFamily::mean;
    cfg.validate();
    Rng rng = make_stream(cfg.seed, 0);
    ChangePointSet truth = draw_change_points(cfg, rng);
    const Index n = cfg.length();
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd x(n, cfg.p);
    for (Index i = 0; i < n; ++i) {
        const Eigen::VectorXd mu = block_vector(cfg.p, segment_of(truth, i), cfg.delta);
        for (Index j = 0; j < cfg.p; ++j) x(i, j) = mu(j) + cfg.sigma_eps * noise(rng);
    }
    return SimData{ObservationSet(std::move(x), ModelFamily::mean), std::move(truth)};
}

SimData gen_regression(const SimConfig& config)
{
    SimConfig cfg = config;
    cfg.family = ModelFamily::regression;
    cfg.validate();
    Rng rng = make_stream(cfg.seed, 0);
    ChangePointSet truth = draw_change_points(cfg, rng);
    const Index n = cfg.length();
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(n, cfg.p);
    Eigen::VectorXd y(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < cfg.p; ++j) x(i, j) = normal(rng);
        const Eigen::VectorXd beta = block_vector(cfg.p, segment_of(truth, i), cfg.delta);
        y(i) = x.row(i).dot(beta) + cfg.sigma_eps * normal(rng);
    }
    return SimData{ObservationSet(std::move(x), std::move(y), ModelFamily::regression), std::move(truth)};
}

Eigen::MatrixXd tridiagonal_covariance(Index p, double d1, double d2)
{
    if (!(d1 > 2.0 * d2 && d2 >= 0.0)) {
        throw Error(ErrorKind::infeasible_config, "tridiagonal covariance needs delta1 > 2 * delta2 >= 0");
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
    for (Index i = 0; i < p; ++i) {
        s(i, i) = d1;
        if (i + 1 < p) s(i, i + 1) = s(i + 1, i) = d2;
    }
    return s;
}

SimData gen_ggm(const SimConfig& config)
{
    SimConfig cfg = config;
    cfg.family = ModelFamily::graphical;
    cfg.validate();
    Rng rng = make_stream(cfg.seed, 0);
    ChangePointSet truth = draw_change_points(cfg, rng);
    const Index n = cfg.length();
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(cfg.p, cfg.p);
    Eigen::LLT<Eigen::MatrixXd> llt(tridiagonal_covariance(cfg.p, cfg.delta, cfg.delta2));
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::infeasible_config, "segment covariance is not positive definite");
    }
    const Eigen::MatrixXd chol = llt.matrixL();
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(n, cfg.p);
    Eigen::VectorXd z(cfg.p);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < cfg.p; ++j) z(j) = normal(rng);
        if (segment_of(truth, i) % 2 == 0) {
            x.row(i) = z.transpose();
        } else {
            x.row(i) = (chol * z).transpose();
        }
    }
    return SimData{ObservationSet(std::move(x), ModelFamily::graphical), std::move(truth)};
}

SimData generate(const SimConfig& config)
{
    switch (config.family) {
    case ModelFamily::mean: return gen_mean(config);
    case ModelFamily::regression: return gen_regression(config);
    case ModelFamily::graphical: return gen_ggm(config);
    }
    throw Error(ErrorKind::invalid_config, "unknown family");
}

MeanSd mean_sd(const std::vector<double>& values)
{
    MeanSd out;
    out.count = values.size();
    if (values.empty()) return out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index) noexcept
{
    return splitmix64(base_seed ^ splitmix64(index + 1));
}

namespace {

std::optional<double> safe_hausdorff(const ChangePointSet& est, const ChangePointSet& truth)
{
    if (est.empty() || truth.empty()) return std::nullopt;
    return hausdorff(est, truth);
}

}  // namespace

TrialOutcome run_trial(const SimConfig& config, const DetectorConfig& detector)
{
    const SimData sim = generate(config);
    DetectorConfig dc = detector;
    dc.grid_seed = config.seed;
    const DetectionResult res = detect(sim.data, dc);
    TrialOutcome out;
    out.seed = config.seed;
    out.estimated = res.refined_points;
    out.divide_points = res.divide_points;
    out.truth = sim.truth;
    out.hausdorff = safe_hausdorff(res.refined_points, sim.truth);
    out.hausdorff_divide = safe_hausdorff(res.divide_points, sim.truth);
    const std::size_t khat = res.refined_points.size();
    out.k_compare = khat < sim.truth.size()    ? CountComparison::less
                    : khat == sim.truth.size() ? CountComparison::equal
                                               : CountComparison::greater;
    out.divide_seconds = res.divide_seconds;
    out.refine_seconds = res.refine_seconds;
    out.tune_seconds = res.tune_seconds;
    out.gamma = res.params.gamma;
    return out;
}

TrialReport aggregate(std::vector<TrialOutcome> trials)
{
    TrialReport report;
    std::vector<double> h;
    std::vector<double> t;
    for (const auto& tr : trials) {
        if (tr.hausdorff) h.push_back(*tr.hausdorff);
        t.push_back(tr.total_seconds());
        switch (tr.k_compare) {
        case CountComparison::less: ++report.k_less; break;
        case CountComparison::equal: ++report.k_equal; break;
        case CountComparison::greater: ++report.k_greater; break;
        }
    }
    report.hausdorff = mean_sd(h);
    report.seconds = mean_sd(t);
    report.trials = std::move(trials);
    return report;
}

TrialReport run_trials(const SimConfig& config, int trials, const DetectorConfig& detector, int jobs)
{
    if (trials < 1) throw Error(ErrorKind::invalid_config, "trials must be at least 1");
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int i = next++; i < trials; i = next++) {
            try {
                SimConfig cfg = config;
                cfg.seed = trial_seed(config.seed, static_cast<std::uint64_t>(i));
                outcomes[static_cast<std::size_t>(i)] = run_trial(cfg, detector);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int workers = std::clamp(jobs, 1, trials);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate(std::move(outcomes));
}

std::string format_table_row(const std::string& setting, const TrialReport& report)
{
    char buf[256];
    const std::string h = report.hausdorff.count == 0
                              ? std::string("n/a")
                              : [&] {
                                    char hb[64];
                                    std::snprintf(hb, sizeof hb, "%.2f (%.2f)", report.hausdorff.mean,
                                                  report.hausdorff.sd);
                                    return std::string(hb);
                                }();
    std::snprintf(buf, sizeof buf, "%s & DCDP & %s & %.1fs (%.1f) & %zu & %zu & %zu", setting.c_str(), h.c_str(),
                  report.seconds.mean, report.seconds.sd, report.k_less, report.k_equal, report.k_greater);
    return buf;
}

std::vector<ScalingPoint> run_scaling(const SimConfig& base, const std::vector<std::pair<Index, Index>>& sizes,
                                      double gamma, int repetitions, CacheOptions cache_options)
{
    using Clock = std::chrono::steady_clock;
    std::vector<ScalingPoint> out;
    for (const auto& [n, q] : sizes) {
        SimConfig cfg = base;
        cfg.n = n;
        cfg.spacing = 0;
        const SimData sim = generate(cfg);
        const ModelSpec model = default_model_spec(sim.data);
        RefineConfig rc;
        rc.model = model;
        rc.edge_margin = std::max<Index>(2, (model.min_span + 3) / 4);
        rc.zeta = estimate_noise_scale(sim.data) *
                  std::sqrt(std::log(static_cast<double>(std::max(sim.data.n(), sim.data.p()))));

        std::vector<double> divide_times;
        std::vector<double> refine_times;
        ScalingPoint pt;
        pt.n = n;
        pt.grid_size = q;
        for (int rep = 0; rep < std::max(1, repetitions); ++rep) {
            auto start = Clock::now();
            const PrefixCache cache = build_cache(sim.data, cache_options);
            const auto grid = resolve_grid(GridSpec::uniform(q), n);
            const ChangePointSet proxy = divide_state(cache, grid, gamma, model).backtrack();
            divide_times.push_back(std::chrono::duration<double>(Clock::now() - start).count());
            start = Clock::now();
            const ChangePointSet refined = refine(cache, proxy, rc);
            refine_times.push_back(std::chrono::duration<double>(Clock::now() - start).count());
            pt.hausdorff_divide = safe_hausdorff(proxy, sim.truth);
            pt.hausdorff = safe_hausdorff(refined, sim.truth);
        }
        pt.divide_seconds = median(divide_times);
        pt.refine_seconds = median(refine_times);
        out.push_back(pt);
    }
    return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorKind::invalid_config, "slope needs at least two paired points");
    }
    const std::size_t m = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace dcdp
