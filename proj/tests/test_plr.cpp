/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <doctest.h>

#include <random>
#include <set>

#include <dcdp/plr.hpp>

#include "oracles.hpp"

using namespace dcdp;

namespace {

std::vector<std::pair<Index, Index>> ends(const std::vector<Interval>& parts)
{
    std::vector<std::pair<Index, Index>> out;
    for (const auto& p : parts) out.emplace_back(p.start(), p.end());
    return out;
}

RefineConfig mean_config(double zeta, Index margin = 2)
{
    RefineConfig c;
    c.zeta = zeta;
    c.edge_margin = margin;
    c.model.family = ModelFamily::mean;
    return c;
}

}  // namespace

TEST_CASE("refinement windows")
{
    using V = std::vector<std::pair<Index, Index>>;
    CHECK(ends(refine_intervals(ChangePointSet({30, 60}, 90))) == V{{10, 50}, {40, 80}});
    CHECK(ends(refine_intervals(ChangePointSet({30}, 60))) == V{{10, 50}});
    CHECK(refine_intervals(ChangePointSet({}, 60)).empty());
    // Floor on the left, ceiling on the right.
    CHECK(ends(refine_intervals(ChangePointSet({4}, 9))) == V{{1, 8}});
}

TEST_CASE("refinement windows contain their estimate strictly")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 10 + static_cast<Index>(rng() % 200);
        std::set<Index> pts;
        const int k = static_cast<int>(rng() % 6);
        while (static_cast<int>(pts.size()) < std::min<Index>(k, n - 1)) pts.insert(1 + static_cast<Index>(rng() % (n - 1)));
        const ChangePointSet cps(std::vector<Index>(pts.begin(), pts.end()), n);
        const auto w = refine_intervals(cps);
        REQUIRE(w.size() == cps.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(w[i].start() < cps.points()[i]);
            CHECK(cps.points()[i] < w[i].end());
            CHECK(w[i].end() <= n);
        }
    }
}

TEST_CASE("group penalty")
{
    const Eigen::Vector2d a(3, 0), b(0, 4);
    CHECK(group_penalty(a, b, 0, 2, 1) == doctest::Approx(3.0 + 4.0));
    CHECK(group_penalty(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1), 0, 4, 2) == doctest::Approx(2.0 * 2.0));
}

TEST_CASE("two-segment mean without penalty returns the segment means")
{
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd x = oracle::random_matrix(rng, 30, 3);
    const PrefixCache cache(ObservationSet(x, ModelFamily::mean));
    const auto fit = two_segment_mean(cache, 5, 25, 12, 0.0);
    CHECK((fit.theta_left - oracle::naive_sum(x, 5, 12) / 7.0).norm() <= 1e-12);
    CHECK((fit.theta_right - oracle::naive_sum(x, 12, 25) / 13.0).norm() <= 1e-12);
    CHECK(fit.penalized_value == doctest::Approx(fit.unpenalized_value));
    CHECK_THROWS_AS(two_segment_mean(cache, 5, 25, 5, 0.0), Error);
}

TEST_CASE("two-segment mean zeroes a coordinate on the shrinkage boundary")
{
    Eigen::MatrixXd x(4, 1);
    x << 3, 3, 4, 4;
    const PrefixCache cache(ObservationSet(x, ModelFamily::mean));
    // u = (sqrt(2) * 3, sqrt(2) * 4), ||u|| = 5 sqrt(2).
    const double zeta = 2.0 * 5.0 * std::sqrt(2.0);
    const auto fit = two_segment_mean(cache, 0, 4, 2, zeta);
    CHECK(std::abs(fit.theta_left(0)) <= 1e-12);
    CHECK(std::abs(fit.theta_right(0)) <= 1e-12);
    const auto inside = two_segment_mean(cache, 0, 4, 2, 0.9 * zeta);
    CHECK(inside.theta_left(0) > 0.0);
}

TEST_CASE("group soft-threshold matches a numeric minimizer")
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<Index> len(2, 12);
    std::uniform_real_distribution<double> zdist(0.0, 8.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Index nl = len(rng), nr = len(rng);
        Eigen::MatrixXd x = oracle::random_matrix(rng, nl + nr, 1, 2.0);
        x.bottomRows(nr).array() += 1.5;
        const PrefixCache cache(ObservationSet(x, ModelFamily::mean));
        const double zeta = zdist(rng);
        const auto fit = two_segment_mean(cache, 0, nl + nr, nl, zeta);
        const double c1 = std::sqrt(static_cast<double>(nl)) * x.col(0).head(nl).mean();
        const double c2 = std::sqrt(static_cast<double>(nr)) * x.col(0).tail(nr).mean();
        const auto [u, v] = oracle::group_threshold_numeric(c1, c2, zeta);
        worst = std::max(worst, std::abs(fit.theta_left(0) - u / std::sqrt(static_cast<double>(nl))));
        worst = std::max(worst, std::abs(fit.theta_right(0) - v / std::sqrt(static_cast<double>(nr))));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("two-segment regression limits")
{
    std::mt19937_64 rng(2);
    const Index n = 60, p = 3;
    const Eigen::MatrixXd x = oracle::random_matrix(rng, n, p);
    Eigen::VectorXd y = oracle::random_matrix(rng, n, 1).col(0);
    const PrefixCache cache(ObservationSet(x, y, ModelFamily::regression));
    ModelSpec spec;
    spec.family = ModelFamily::regression;
    spec.cd_tol = 1e-12;
    spec.cd_max_iter = 100000;

    const auto free_fit = two_segment_regression(cache, 0, n, 25, 0.0, spec);
    CHECK((free_fit.theta_left - oracle::least_squares(x.topRows(25), y.head(25))).norm() <= 1e-5);
    CHECK((free_fit.theta_right - oracle::least_squares(x.bottomRows(35), y.tail(35))).norm() <= 1e-5);

    const auto huge = two_segment_regression(cache, 0, n, 25, 1e9, spec);
    CHECK(huge.theta_left.norm() == 0.0);
    CHECK(huge.theta_right.norm() == 0.0);
    CHECK(huge.penalized_value == doctest::Approx(y.squaredNorm()));

    const PrefixCache zero(ObservationSet(x, Eigen::VectorXd::Zero(n), ModelFamily::regression));
    const auto flat = two_segment_regression(zero, 0, n, 25, 1.0, spec);
    CHECK(flat.theta_left.norm() == 0.0);
    CHECK(flat.theta_right.norm() == 0.0);
}

TEST_CASE("two-segment regression is a local minimum of its objective")
{
    std::mt19937_64 rng(9);
    const Index n = 50, p = 4;
    const Eigen::MatrixXd x = oracle::random_matrix(rng, n, p);
    Eigen::VectorXd y = x * Eigen::Vector4d(1, -1, 0, 0) + 0.5 * oracle::random_matrix(rng, n, 1).col(0);
    y.tail(20) = x.bottomRows(20) * Eigen::Vector4d(0, 2, 0, 0);
    const PrefixCache cache(ObservationSet(x, y, ModelFamily::regression));
    ModelSpec spec;
    spec.family = ModelFamily::regression;
    spec.cd_tol = 1e-12;
    spec.cd_max_iter = 100000;
    const double zeta = 3.0;
    const auto fit = two_segment_regression(cache, 0, n, 30, zeta, spec);
    CHECK(fit.penalized_value >= fit.unpenalized_value);
    const auto left = cache.interval_stats(Interval(0, 30));
    const auto right = cache.interval_stats(Interval(30, n));
    auto objective = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return regression_loss(left, a) + regression_loss(right, b) + zeta * group_penalty(a, b, 0, n, 30);
    };
    CHECK(objective(fit.theta_left, fit.theta_right) == doctest::Approx(fit.penalized_value));
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd da = 1e-3 * oracle::random_matrix(rng, p, 1).col(0);
        const Eigen::VectorXd db = 1e-3 * oracle::random_matrix(rng, p, 1).col(0);
        CHECK(objective(fit.theta_left + da, fit.theta_right + db) >= fit.penalized_value - 1e-9);
    }
}

TEST_CASE("noiseless jump is recovered exactly")
{
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(60, 1);
    x.bottomRows(30).setConstant(5.0);
    const ObservationSet data(x, ModelFamily::mean);
    CHECK(refine(data, ChangePointSet({35}, 60), mean_config(0.5)).points() == std::vector<Index>{30});
    CHECK(refine(data, ChangePointSet({30}, 60), mean_config(0.5)).points() == std::vector<Index>{30});
    CHECK(refine(data, ChangePointSet({}, 60), mean_config(0.5)).empty());
}

TEST_CASE("refinement keeps cardinality and order")
{
    std::mt19937_64 rng(13);
    for (auto family : {ModelFamily::mean, ModelFamily::regression, ModelFamily::graphical}) {
        for (int trial = 0; trial < 100; ++trial) {
            const Index n = 60 + static_cast<Index>(rng() % 100);
            const Index p = 2;
            Eigen::MatrixXd x = oracle::random_matrix(rng, n, p);
            std::set<Index> pts;
            const int k = 1 + static_cast<int>(rng() % 5);
            while (static_cast<int>(pts.size()) < k) pts.insert(1 + static_cast<Index>(rng() % (n - 1)));
            const ChangePointSet cps(std::vector<Index>(pts.begin(), pts.end()), n);
            const ObservationSet data = family == ModelFamily::regression
                                            ? ObservationSet(x, oracle::random_matrix(rng, n, 1).col(0), family)
                                            : ObservationSet(x, family);
            RefineConfig cfg = mean_config(family == ModelFamily::graphical ? 0.0 : 1.0, 1 + trial % 4);
            cfg.model.family = family;
            cfg.model.cd_max_iter = 2000;
            const auto report = refine_detailed(PrefixCache(data), cps, cfg);
            REQUIRE(report.points.size() == cps.size());
            CHECK(std::is_sorted(report.points.points().begin(), report.points.points().end()));
            for (std::size_t i = 0; i < cps.size(); ++i) {
                const auto& d = report.details[i];
                if (!d.kept) {
                    CHECK(d.window.start() + cfg.edge_margin <= report.points.points()[i]);
                    CHECK(report.points.points()[i] <= d.window.end() - cfg.edge_margin);
                    CHECK(d.stage_two_at_refined <= d.stage_two_at_stage_one + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("short windows keep the estimate")
{
    const ObservationSet data(Eigen::MatrixXd::Zero(10, 1), ModelFamily::mean);
    const auto report = refine_detailed(PrefixCache(data), ChangePointSet({4, 5, 6}, 10), mean_config(0.0, 3));
    CHECK(report.points.points() == std::vector<Index>{4, 5, 6});
    CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("graphical refinement finds a variance change")
{
    std::mt19937_64 rng(25);
    const Index n = 400, p = 3;
    Eigen::MatrixXd x = oracle::random_matrix(rng, n, p);
    x.bottomRows(200) *= 3.0;
    const ObservationSet data(x, ModelFamily::graphical);
    RefineConfig cfg;
    cfg.model.family = ModelFamily::graphical;
    cfg.edge_margin = 5;
    const auto pts = refine(data, ChangePointSet({230}, n), cfg);
    CHECK(std::abs(pts.points()[0] - 200) <= 5);
    cfg.covariance_loss = CovarianceLoss::frobenius;
    const auto fro = refine(data, ChangePointSet({230}, n), cfg);
    CHECK(std::abs(fro.points()[0] - 200) <= 10);
}

TEST_CASE("refine configuration errors")
{
    const ObservationSet data(Eigen::MatrixXd::Zero(10, 1), ModelFamily::mean);
    CHECK_THROWS_AS(refine(data, ChangePointSet({5}, 10), mean_config(-1.0)), Error);
    CHECK_THROWS_AS(refine(data, ChangePointSet({5}, 10), mean_config(1.0, 0)), Error);
    CHECK_THROWS_AS(refine(data, ChangePointSet({5}, 12), mean_config(1.0)), Error);
}
