/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/plr.hpp>

#include <cmath>
#include <limits>
#include <optional>

namespace dcdp {

void RefineConfig::validate() const
{
    if (!(zeta >= 0.0)) throw Error(ErrorKind::invalid_config, "zeta must be non-negative");
    if (edge_margin < 1) throw Error(ErrorKind::invalid_config, "edge_margin must be at least 1");
    model.validate();
}

double group_penalty(const Eigen::VectorXd& left, const Eigen::VectorXd& right, Index s, Index e, Index eta)
{
    const double nl = static_cast<double>(eta - s);
    const double nr = static_cast<double>(e - eta);
    return (nl * left.array().square() + nr * right.array().square()).sqrt().sum();
}

std::vector<Interval> refine_intervals(const ChangePointSet& cps)
{
    std::vector<Interval> out;
    const auto& pts = cps.points();
    out.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Index prev = k == 0 ? 0 : pts[k - 1];
        const Index next = k + 1 == pts.size() ? cps.n() : pts[k + 1];
        const Index cur = pts[k];
        out.emplace_back((2 * prev + cur) / 3, (cur + 2 * next + 2) / 3);
    }
    return out;
}

TwoSegmentFit two_segment_mean(const PrefixCache& cache, Index s, Index e, Index eta, double zeta)
{
    if (!(s < eta && eta < e)) throw Error(ErrorKind::invalid_interval, "split must lie strictly inside (s, e)");
    const IntervalStats left = cache.interval_stats(Interval(s, eta));
    const IntervalStats right = cache.interval_stats(Interval(eta, e));
    const double nl = static_cast<double>(eta - s);
    const double nr = static_cast<double>(e - eta);
    const double wl = std::sqrt(nl);
    const double wr = std::sqrt(nr);
    const Index p = cache.p();

    TwoSegmentFit fit;
    fit.eta = eta;
    fit.theta_left.resize(p);
    fit.theta_right.resize(p);
    for (Index i = 0; i < p; ++i) {
        const double ul = wl * left.sum_x(i) / nl;
        const double ur = wr * right.sum_x(i) / nr;
        const double norm = std::hypot(ul, ur);
        const double shrink = norm > 0.0 ? std::max(0.0, 1.0 - zeta / (2.0 * norm)) : 0.0;
        fit.theta_left(i) = shrink * ul / wl;
        fit.theta_right(i) = shrink * ur / wr;
    }
    fit.unpenalized_value = mean_loss(left, fit.theta_left) + mean_loss(right, fit.theta_right);
    fit.penalized_value = fit.unpenalized_value + zeta * group_penalty(fit.theta_left, fit.theta_right, s, e, eta);
    return fit;
}

namespace {

double power_iteration(const Eigen::MatrixXd& m)
{
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows());
    double value = 0.0;
    for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd w = m * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        value = v.dot(w) / v.squaredNorm();
        v = w / norm;
    }
    return value;
}

}  // namespace

TwoSegmentFit two_segment_regression(const PrefixCache& cache, Index s, Index e, Index eta, double zeta,
                                     const ModelSpec& spec, const TwoSegmentFit* warm_start)
{
    if (!(s < eta && eta < e)) throw Error(ErrorKind::invalid_interval, "split must lie strictly inside (s, e)");
    if (cache.family() != ModelFamily::regression) {
        throw Error(ErrorKind::missing_response, "two-segment regression needs a regression cache");
    }
    const IntervalStats left = cache.interval_stats(Interval(s, eta));
    const IntervalStats right = cache.interval_stats(Interval(eta, e));
    const Index p = cache.p();
    const double wl = std::sqrt(static_cast<double>(eta - s));
    const double wr = std::sqrt(static_cast<double>(e - eta));

    // Work in v = (sqrt(n_L) beta_L, sqrt(n_R) beta_R), where the penalty is a
    // plain group lasso over the coordinate pairs.
    auto smooth = [&](const Eigen::VectorXd& vl, const Eigen::VectorXd& vr) {
        return regression_loss(left, vl / wl) + regression_loss(right, vr / wr);
    };
    auto penalty = [&](const Eigen::VectorXd& vl, const Eigen::VectorXd& vr) {
        return zeta * (vl.array().square() + vr.array().square()).sqrt().sum();
    };

    Eigen::VectorXd xl = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd xr = Eigen::VectorXd::Zero(p);
    if (warm_start && warm_start->theta_left.size() == p) {
        xl = warm_start->theta_left * wl;
        xr = warm_start->theta_right * wr;
    }

    double lipschitz = 2.0 * std::max(power_iteration(left.sum_xx) / (wl * wl), power_iteration(right.sum_xx) / (wr * wr));
    lipschitz = std::max(lipschitz, 1e-12);

    Eigen::VectorXd yl = xl, yr = xr, nl(p), nr(p), gl(p), gr(p);
    double momentum = 1.0;
    double objective = smooth(xl, xr) + penalty(xl, xr);
    bool converged = false;
    for (int iter = 0; iter < spec.cd_max_iter; ++iter) {
        const Eigen::VectorXd bl = yl / wl;
        const Eigen::VectorXd br = yr / wr;
        gl = 2.0 / wl * (left.sum_xx * bl - left.sum_xy);
        gr = 2.0 / wr * (right.sum_xx * br - right.sum_xy);
        const double fy = smooth(yl, yr);
        // Backtracking keeps the quadratic model an upper bound even when the
        // power-iteration estimate of the curvature is low.
        while (true) {
            const double step = 1.0 / lipschitz;
            for (Index i = 0; i < p; ++i) {
                const double zl = yl(i) - step * gl(i);
                const double zr = yr(i) - step * gr(i);
                const double norm = std::hypot(zl, zr);
                const double shrink = norm > 0.0 ? std::max(0.0, 1.0 - step * zeta / norm) : 0.0;
                nl(i) = shrink * zl;
                nr(i) = shrink * zr;
            }
            const double dl2 = (nl - yl).squaredNorm() + (nr - yr).squaredNorm();
            const double bound = fy + gl.dot(nl - yl) + gr.dot(nr - yr) + 0.5 * lipschitz * dl2;
            if (smooth(nl, nr) <= bound + 1e-12 * std::max(1.0, std::abs(bound))) break;
            lipschitz *= 2.0;
        }
        const double next_objective = smooth(nl, nr) + penalty(nl, nr);
        if (next_objective > objective) {
            // Adaptive restart: drop the momentum and retry from the last iterate.
            if (momentum == 1.0) {
                converged = true;
                break;
            }
            yl = xl;
            yr = xr;
            momentum = 1.0;
            continue;
        }
        const double change =
            std::max(((nl - xl) / wl).cwiseAbs().maxCoeff(), ((nr - xr) / wr).cwiseAbs().maxCoeff());
        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const double beta = (momentum - 1.0) / next_momentum;
        yl = nl + beta * (nl - xl);
        yr = nr + beta * (nr - xr);
        xl = nl;
        xr = nr;
        momentum = next_momentum;
        objective = next_objective;
        if (change < spec.cd_tol) {
            converged = true;
            break;
        }
    }

    TwoSegmentFit fit;
    fit.eta = eta;
    fit.theta_left = xl / wl;
    fit.theta_right = xr / wr;
    fit.unpenalized_value = regression_loss(left, fit.theta_left) + regression_loss(right, fit.theta_right);
    fit.penalized_value = fit.unpenalized_value + zeta * group_penalty(fit.theta_left, fit.theta_right, s, e, eta);
    fit.converged = converged;
    return fit;
}

namespace {

double log_det_spd(const Eigen::MatrixXd& m)
{
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::singular_covariance, "matrix is not positive definite");
    }
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// Sum of ||x_t||^4 over t in (s, e].
double fourth_moment(const PrefixCache& cache, Index s, Index e)
{
    return cache.x().middleRows(s, e - s).rowwise().squaredNorm().array().square().sum();
}

}  // namespace

TwoSegmentFit two_segment_graphical(const PrefixCache& cache, Index s, Index e, Index eta, const ModelSpec& spec,
                                    CovarianceLoss loss)
{
    if (!(s < eta && eta < e)) throw Error(ErrorKind::invalid_interval, "split must lie strictly inside (s, e)");
    if (cache.family() != ModelFamily::graphical) {
        throw Error(ErrorKind::invalid_config, "two-segment graphical fit needs a graphical cache");
    }
    const IntervalStats left = cache.interval_stats(Interval(s, eta));
    const IntervalStats right = cache.interval_stats(Interval(eta, e));
    TwoSegmentFit fit;
    fit.eta = eta;
    if (loss == CovarianceLoss::likelihood) {
        FitResult fl = fit_precision(left, spec, false);
        FitResult fr = fit_precision(right, spec, false);
        fit.left_matrix = std::move(*fl.precision);
        fit.right_matrix = std::move(*fr.precision);
        fit.unpenalized_value = fl.gof + fr.gof;
    } else {
        const double nl = static_cast<double>(left.count);
        const double nr = static_cast<double>(right.count);
        fit.left_matrix = left.sum_xx / nl;
        fit.right_matrix = right.sum_xx / nr;
        fit.unpenalized_value = fourth_moment(cache, s, eta) - left.sum_xx.squaredNorm() / nl +
                                fourth_moment(cache, eta, e) - right.sum_xx.squaredNorm() / nr;
    }
    fit.penalized_value = fit.unpenalized_value;
    return fit;
}

namespace {

// Loss of the frozen stage-one parameters with the split moved to eta.
class FrozenLoss {
public:
    FrozenLoss(const PrefixCache& cache, const TwoSegmentFit& fit, ModelFamily family, CovarianceLoss loss)
        : cache_(cache), fit_(fit), family_(family), loss_(loss)
    {
        if (family_ == ModelFamily::graphical) {
            if (loss_ == CovarianceLoss::likelihood) {
                log_det_left_ = log_det_spd(fit.left_matrix);
                log_det_right_ = log_det_spd(fit.right_matrix);
            } else {
                norm_left_ = fit.left_matrix.squaredNorm();
                norm_right_ = fit.right_matrix.squaredNorm();
            }
        }
    }

    double operator()(Index s, Index e, Index eta) const
    {
        const IntervalStats left = cache_.interval_stats(Interval(s, eta));
        const IntervalStats right = cache_.interval_stats(Interval(eta, e));
        switch (family_) {
        case ModelFamily::mean:
            return mean_loss(left, fit_.theta_left) + mean_loss(right, fit_.theta_right);
        case ModelFamily::regression:
            return regression_loss(left, fit_.theta_left) + regression_loss(right, fit_.theta_right);
        case ModelFamily::graphical:
            if (loss_ == CovarianceLoss::likelihood) {
                return precision_loss(left, fit_.left_matrix, log_det_left_) +
                       precision_loss(right, fit_.right_matrix, log_det_right_);
            }
            return fourth_moment(cache_, s, eta) - 2.0 * fit_.left_matrix.cwiseProduct(left.sum_xx).sum() +
                   static_cast<double>(left.count) * norm_left_ + fourth_moment(cache_, eta, e) -
                   2.0 * fit_.right_matrix.cwiseProduct(right.sum_xx).sum() +
                   static_cast<double>(right.count) * norm_right_;
        }
        return 0.0;
    }

private:
    const PrefixCache& cache_;
    const TwoSegmentFit& fit_;
    ModelFamily family_;
    CovarianceLoss loss_;
    double log_det_left_ = 0.0;
    double log_det_right_ = 0.0;
    double norm_left_ = 0.0;
    double norm_right_ = 0.0;
};

}  // namespace

RefineReport refine_detailed(const PrefixCache& cache, const ChangePointSet& cps, const RefineConfig& config)
{
    config.validate();
    if (cps.n() != cache.n()) {
        throw Error(ErrorKind::invalid_change_points, "change points were estimated on a series of different length");
    }
    const ModelFamily family = cache.family();
    const Index margin = config.edge_margin;
    const auto windows = refine_intervals(cps);

    RefineReport report;
    std::vector<Index> refined;
    refined.reserve(cps.size());
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const Interval& w = windows[k];
        const Index s = w.start();
        const Index e = w.end();
        RefinedPoint info;
        info.window = w;
        info.initial = cps.points()[k];
        info.stage_one = info.refined = info.initial;
        if (e - s <= 2 * margin) {
            info.kept = true;
            report.warnings.push_back("window (" + std::to_string(s) + ", " + std::to_string(e) +
                                      "] too short for edge margin " + std::to_string(margin) + "; kept " +
                                      std::to_string(info.initial));
            refined.push_back(info.initial);
            report.details.push_back(info);
            continue;
        }

        std::optional<TwoSegmentFit> best;
        std::optional<TwoSegmentFit> previous;
        bool all_converged = true;
        for (Index eta = s + margin; eta <= e - margin; ++eta) {
            TwoSegmentFit fit;
            try {
                switch (family) {
                case ModelFamily::mean:
                    fit = two_segment_mean(cache, s, e, eta, config.zeta);
                    break;
                case ModelFamily::regression:
                    fit = two_segment_regression(cache, s, e, eta, config.zeta, config.model,
                                                 previous ? &*previous : nullptr);
                    all_converged = all_converged && fit.converged;
                    break;
                case ModelFamily::graphical:
                    fit = two_segment_graphical(cache, s, e, eta, config.model, config.covariance_loss);
                    break;
                }
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::singular_covariance) throw;
                continue;
            }
            if (!best || fit.penalized_value < best->penalized_value) best = fit;
            previous = std::move(fit);
        }
        if (!all_converged) {
            report.warnings.push_back("two-segment solver hit the iteration cap in window (" + std::to_string(s) +
                                      ", " + std::to_string(e) + "]");
        }
        if (!best) {
            info.kept = true;
            report.warnings.push_back("no estimable split in window (" + std::to_string(s) + ", " +
                                      std::to_string(e) + "]; kept " + std::to_string(info.initial));
            refined.push_back(info.initial);
            report.details.push_back(info);
            continue;
        }

        info.stage_one = best->eta;
        const FrozenLoss frozen(cache, *best, family, config.covariance_loss);
        double best_value = std::numeric_limits<double>::infinity();
        for (Index eta = s + margin; eta <= e - margin; ++eta) {
            const double v = frozen(s, e, eta);
            if (v < best_value) {
                best_value = v;
                info.refined = eta;
            }
            if (eta == info.stage_one) info.stage_two_at_stage_one = v;
        }
        info.stage_two_at_refined = best_value;
        refined.push_back(info.refined);
        report.details.push_back(info);
    }

    // Neighbouring windows overlap in the middle third between estimates, so
    // two refined points can cross. A crossing pair falls back to its
    // divide-step estimates, which always sit strictly between the
    // neighbours' windows.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < refined.size(); ++k) {
            if (refined[k] >= refined[k + 1]) {
                for (std::size_t j : {k, k + 1}) {
                    if (refined[j] != cps.points()[j]) {
                        refined[j] = cps.points()[j];
                        report.details[j].refined = refined[j];
                        report.details[j].kept = true;
                    }
                }
                report.warnings.push_back("refined points " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                          " crossed; reverted to divide-step estimates");
                changed = true;
            }
        }
    }
    report.points = ChangePointSet(std::move(refined), cps.n());
    return report;
}

ChangePointSet refine(const PrefixCache& cache, const ChangePointSet& cps, const RefineConfig& config)
{
    return refine_detailed(cache, cps, config).points;
}

ChangePointSet refine(const ObservationSet& data, const ChangePointSet& cps, const RefineConfig& config)
{
    return refine(build_cache(data), cps, config);
}

}  // namespace dcdp
