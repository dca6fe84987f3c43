/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/estimators.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dcdp {

void ModelSpec::validate() const
{
    if (min_span < 1) throw Error(ErrorKind::invalid_config, "min_span must be at least 1");
    if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_config, "lambda must be non-negative");
    if (!(cd_tol > 0.0)) throw Error(ErrorKind::invalid_config, "cd_tol must be positive");
    if (cd_max_iter < 1) throw Error(ErrorKind::invalid_config, "cd_max_iter must be at least 1");
    if (!(ridge_eps >= 0.0)) throw Error(ErrorKind::invalid_config, "ridge_eps must be non-negative");
}

double soft_threshold(double x, double t) noexcept
{
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

namespace {

double median_abs(std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), mid));
    }
    return m;
}

// Cyclic coordinate descent on the Gram form of
//   sum (y - x'beta)^2 + 2 * thr * ||beta||_1,
// keeping resid = b - G beta current.
int lasso_cd(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b, double thr, const ModelSpec& spec,
             Eigen::VectorXd& beta, Eigen::VectorXd& resid, bool& converged)
{
    const Index p = b.size();
    resid.noalias() = b - gram * beta;
    converged = false;
    int iter = 0;
    while (iter < spec.cd_max_iter) {
        ++iter;
        double max_change = 0.0;
        for (Index j = 0; j < p; ++j) {
            const double gjj = gram(j, j);
            const double z = resid(j) + gjj * beta(j);
            double next = 0.0;
            if (gjj > 0.0) {
                next = soft_threshold(z, thr) / gjj;
            } else if (std::abs(z) > thr) {
                throw Error(ErrorKind::degenerate_design,
                            "design column " + std::to_string(j) + " has zero norm on the interval");
            }
            const double delta = next - beta(j);
            if (delta != 0.0) {
                resid.noalias() -= gram.col(j) * delta;
                beta(j) = next;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (max_change < spec.cd_tol) {
            converged = true;
            break;
        }
    }
    return iter;
}

struct PrecisionTerms {
    double ridge = 0.0;
    double trace = 0.0;       // Tr[Omega Sigma_hat]
    double log_det = 0.0;     // log det Omega
};

PrecisionTerms precision_terms(const Eigen::VectorXd& eigenvalues, double ridge_eps)
{
    const Index p = eigenvalues.size();
    const double lmin = eigenvalues.minCoeff();
    const double scale = eigenvalues.sum() / static_cast<double>(p);
    PrecisionTerms out;
    if (lmin < ridge_eps * scale) {
        out.ridge = ridge_eps * scale;
    }
    if (!(lmin + out.ridge > 0.0)) {
        throw Error(ErrorKind::singular_covariance, "interval covariance is singular");
    }
    for (Index j = 0; j < p; ++j) {
        const double shifted = eigenvalues(j) + out.ridge;
        out.trace += eigenvalues(j) / shifted;
        out.log_det -= std::log(shifted);
    }
    return out;
}

FitResult gated_result()
{
    FitResult r;
    r.gated = true;
    r.gof = 0.0;
    return r;
}

}  // namespace

double estimate_noise_scale(const ObservationSet& data)
{
    const Index n = data.n();
    if (n < 2) return 1.0;
    std::vector<double> diffs;
    if (data.family() == ModelFamily::regression) {
        const Index p = data.p();
        // Least squares on short overlapping windows with `dof` residual
        // degrees of freedom each; the median discards windows that straddle
        // a change and is rescaled by the chi-square median.
        const Index dof = 5;
        const Index block = p + dof;
        const Index stride = std::max<Index>(1, block / 2);
        if (n >= 2 * block) {
            std::vector<double> variances;
            for (Index s = 0; s + block <= n; s += stride) {
                const auto xb = data.x().middleRows(s, block);
                const auto yb = data.y().segment(s, block);
                const Eigen::VectorXd beta = xb.colPivHouseholderQr().solve(yb);
                variances.push_back((yb - xb * beta).squaredNorm() / static_cast<double>(dof));
            }
            const double chi2_median = std::pow(1.0 - 2.0 / (9.0 * dof), 3);
            const double sigma = std::sqrt(median_abs(variances) / chi2_median);
            if (sigma > 0.0) return sigma;
        }
        const auto& y = data.y();
        diffs.reserve(static_cast<std::size_t>(n - 1));
        for (Index i = 1; i < n; ++i) diffs.push_back(std::abs(y(i) - y(i - 1)));
    } else {
        const auto& x = data.x();
        diffs.reserve(static_cast<std::size_t>((n - 1) * data.p()));
        for (Index j = 0; j < data.p(); ++j) {
            for (Index i = 1; i < n; ++i) diffs.push_back(std::abs(x(i, j) - x(i - 1, j)));
        }
    }
    const double mad = median_abs(diffs);
    const double sigma = mad / (0.6744897501960817 * std::sqrt(2.0));
    return sigma > 0.0 ? sigma : 1.0;
}

ModelSpec default_model_spec(const ObservationSet& data, const ModelDefaults& defaults)
{
    ModelSpec spec;
    spec.family = data.family();
    spec.lambda_scale = defaults.lambda_scale;
    const double log_np = std::log(static_cast<double>(std::max(data.n(), data.p())));
    if (spec.family == ModelFamily::graphical) {
        spec.lambda = 0.0;
        const auto scaled = static_cast<Index>(std::ceil(defaults.span_scale * static_cast<double>(data.p()) * log_np));
        spec.min_span = std::max(data.p() + 1, scaled);
    } else {
        spec.lambda = defaults.lambda_scale * estimate_noise_scale(data) * std::sqrt(log_np);
        const auto scaled = static_cast<Index>(std::ceil(defaults.span_scale * defaults.sparsity_hint * log_np));
        spec.min_span = std::max<Index>(1, scaled);
    }
    return spec;
}

FitResult fit_mean(const IntervalStats& stats, const ModelSpec& spec, bool gate)
{
    if (gate && stats.count < spec.min_span) return gated_result();
    const double count = static_cast<double>(stats.count);
    const double thr = spec.lambda / (2.0 * std::sqrt(count));
    Eigen::VectorXd mu(stats.sum_x.size());
    for (Index j = 0; j < mu.size(); ++j) {
        mu(j) = soft_threshold(stats.sum_x(j) / count, thr);
    }
    FitResult r;
    r.gof = mean_loss(stats, mu);
    r.coefficients = std::move(mu);
    return r;
}

FitResult fit_lasso(const IntervalStats& stats, const ModelSpec& spec, bool gate, const Eigen::VectorXd* warm_start)
{
    if (gate && stats.count < spec.min_span) return gated_result();
    const Index p = stats.sum_xy.size();
    Eigen::VectorXd beta = warm_start ? *warm_start : Eigen::VectorXd::Zero(p);
    Eigen::VectorXd resid(p);
    const double thr = spec.lambda * std::sqrt(static_cast<double>(stats.count)) / 2.0;
    FitResult r;
    r.iterations = lasso_cd(stats.sum_xx, stats.sum_xy, thr, spec, beta, resid, r.converged);
    r.gof = regression_loss(stats, beta);
    r.coefficients = std::move(beta);
    return r;
}

FitResult fit_precision(const IntervalStats& stats, const ModelSpec& spec, bool gate)
{
    if (gate && stats.count < spec.min_span) return gated_result();
    const Index p = stats.sum_xx.rows();
    if (stats.count < p && spec.ridge_eps == 0.0) {
        throw Error(ErrorKind::singular_covariance,
                    "interval of length " + std::to_string(stats.count) + " cannot estimate a " +
                        std::to_string(p) + "-dimensional precision matrix without a ridge");
    }
    const double count = static_cast<double>(stats.count);
    const Eigen::MatrixXd cov = stats.sum_xx / count;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const PrecisionTerms terms = precision_terms(eig.eigenvalues(), spec.ridge_eps);
    const Eigen::VectorXd inv = (eig.eigenvalues().array() + terms.ridge).inverse().matrix();
    Eigen::MatrixXd omega = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    omega = 0.5 * (omega + omega.transpose());
    FitResult r;
    r.gof = count * (terms.trace - terms.log_det);
    r.precision = std::move(omega);
    return r;
}

FitResult fit_interval(const IntervalStats& stats, const ModelSpec& spec, bool gate)
{
    switch (spec.family) {
    case ModelFamily::mean: return fit_mean(stats, spec, gate);
    case ModelFamily::regression: return fit_lasso(stats, spec, gate);
    case ModelFamily::graphical: return fit_precision(stats, spec, gate);
    }
    return {};
}

FitResult fit_mean(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec)
{
    return fit_mean(cache.interval_stats(interval), spec);
}

FitResult fit_lasso(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec)
{
    if (cache.family() != ModelFamily::regression) {
        throw Error(ErrorKind::missing_response, "Lasso fit needs a regression cache");
    }
    return fit_lasso(cache.interval_stats(interval), spec);
}

FitResult fit_precision(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec)
{
    if (cache.family() == ModelFamily::mean) {
        throw Error(ErrorKind::invalid_config, "precision fit needs second moments; build the cache for graphical data");
    }
    return fit_precision(cache.interval_stats(interval), spec);
}

double goodness_of_fit(const PrefixCache& cache, const Interval& interval, const ModelSpec& spec)
{
    return fit_interval(cache.interval_stats(interval), spec).gof;
}

double mean_loss(const IntervalStats& stats, const Eigen::VectorXd& mu)
{
    return stats.sum_x2.sum() - 2.0 * mu.dot(stats.sum_x) + static_cast<double>(stats.count) * mu.squaredNorm();
}

double regression_loss(const IntervalStats& stats, const Eigen::VectorXd& beta)
{
    return stats.sum_yy - 2.0 * beta.dot(stats.sum_xy) + beta.dot(stats.sum_xx * beta);
}

double precision_loss(const IntervalStats& stats, const Eigen::MatrixXd& omega, double log_det_omega)
{
    return (omega.cwiseProduct(stats.sum_xx)).sum() - static_cast<double>(stats.count) * log_det_omega;
}

double parameter_loss(const IntervalStats& stats, const FitResult& fit)
{
    if (fit.precision) {
        Eigen::LLT<Eigen::MatrixXd> llt(*fit.precision);
        const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        return precision_loss(stats, *fit.precision, log_det);
    }
    if (!fit.coefficients) {
        throw Error(ErrorKind::invalid_config, "gated fit carries no parameter");
    }
    if (stats.sum_xy.size() > 0) return regression_loss(stats, *fit.coefficients);
    return mean_loss(stats, *fit.coefficients);
}

GofEvaluator::GofEvaluator(const ModelSpec& spec, Index p) : spec_(spec), beta_(Eigen::VectorXd::Zero(p)), resid_(p)
{
    spec_.validate();
    if (spec_.family == ModelFamily::graphical) {
        cov_.resize(p, p);
        eig_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p);
    }
}

void GofEvaluator::reset_warm_start()
{
    beta_.setZero();
}

double GofEvaluator::operator()(const IntervalStats& stats)
{
    if (stats.count < spec_.min_span) return 0.0;
    switch (spec_.family) {
    case ModelFamily::mean: return mean_gof(stats);
    case ModelFamily::regression: return lasso_gof(stats);
    case ModelFamily::graphical: return precision_gof(stats);
    }
    return 0.0;
}

double GofEvaluator::mean_gof(const IntervalStats& stats) const
{
    const double count = static_cast<double>(stats.count);
    const double thr = spec_.lambda / (2.0 * std::sqrt(count));
    double gof = 0.0;
    for (Index j = 0; j < stats.sum_x.size(); ++j) {
        const double sx = stats.sum_x(j);
        const double mu = soft_threshold(sx / count, thr);
        gof += stats.sum_x2(j) - 2.0 * mu * sx + count * mu * mu;
    }
    return gof;
}

double GofEvaluator::lasso_gof(const IntervalStats& stats)
{
    const double thr = spec_.lambda * std::sqrt(static_cast<double>(stats.count)) / 2.0;
    bool converged = false;
    lasso_cd(stats.sum_xx, stats.sum_xy, thr, spec_, beta_, resid_, converged);
    // resid = b - G beta, so beta'G beta - 2 beta'b = -beta'(b + resid).
    return stats.sum_yy - beta_.dot(stats.sum_xy + resid_);
}

double GofEvaluator::precision_gof(const IntervalStats& stats)
{
    const Index p = stats.sum_xx.rows();
    if (stats.count < p && spec_.ridge_eps == 0.0) {
        throw Error(ErrorKind::singular_covariance, "interval shorter than the dimension needs a ridge");
    }
    const double count = static_cast<double>(stats.count);
    cov_ = stats.sum_xx / count;
    eig_.compute(cov_, Eigen::EigenvaluesOnly);
    const PrecisionTerms terms = precision_terms(eig_.eigenvalues(), spec_.ridge_eps);
    return count * (terms.trace - terms.log_det);
}

}  // namespace dcdp
