/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <doctest.h>

#include <set>

#include <dcdp/simulate.hpp>

#include "oracles.hpp"

using namespace dcdp;

namespace {

SimConfig base(ModelFamily family)
{
    SimConfig s;
    s.family = family;
    s.n = 200;
    s.p = 20;
    s.k = 3;
    s.delta = 5.0;
    s.seed = 1;
    return s;
}

}  // namespace

TEST_CASE("mean blocks rotate through the coordinates")
{
    SimConfig s = base(ModelFamily::mean);
    s.sigma_eps = 0.0;
    const SimData sim = gen_mean(s);
    REQUIRE(sim.truth.size() == 3);
    const auto parts = partition_of(sim.truth);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto rows = sim.data.x().middleRows(parts[k].start(), parts[k].length());
        for (Index j = 0; j < 20; ++j) {
            const bool on = j >= static_cast<Index>(5 * k) && j < static_cast<Index>(5 * k + 5);
            CHECK((rows.col(j).array() == (on ? 5.0 : 0.0)).all());
        }
    }
}

TEST_CASE("short mean vectors alternate")
{
    SimConfig s = base(ModelFamily::mean);
    s.p = 1;
    s.sigma_eps = 0.0;
    const SimData sim = gen_mean(s);
    const auto parts = partition_of(sim.truth);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        CHECK(sim.data.x()(parts[k].start(), 0) == (k % 2 ? 5.0 : 0.0));
    }
}

TEST_CASE("change point locations and jitter")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SimConfig s = base(ModelFamily::mean);
        s.seed = seed;
        const SimData sim = generate(s);
        REQUIRE(sim.truth.size() == 3);
        for (Index k = 1; k <= 3; ++k) {
            CHECK(std::abs(sim.truth.points()[static_cast<std::size_t>(k - 1)] - 50 * k) <= 15);
        }
    }
    SimConfig s = base(ModelFamily::mean);
    s.jitter = 0.0;
    CHECK(generate(s).truth.points() == std::vector<Index>{50, 100, 150});
}

TEST_CASE("generators are deterministic in the seed")
{
    for (auto family : {ModelFamily::mean, ModelFamily::regression, ModelFamily::graphical}) {
        SimConfig s = base(family);
        s.p = 5;
        const SimData a = generate(s);
        const SimData b = generate(s);
        CHECK(a.data.x() == b.data.x());
        CHECK(a.truth == b.truth);
        s.seed = 2;
        CHECK(generate(s).data.x() != a.data.x());
    }
}

TEST_CASE("noiseless regression segments are exact linear models")
{
    SimConfig s = base(ModelFamily::regression);
    s.n = 400;
    s.p = 10;
    s.sigma_eps = 0.0;
    const SimData sim = gen_regression(s);
    REQUIRE(sim.data.has_response());
    const auto parts = partition_of(sim.truth);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& seg = parts[k];
        const Eigen::MatrixXd x = sim.data.x().middleRows(seg.start(), seg.length());
        const Eigen::VectorXd y = sim.data.y().segment(seg.start(), seg.length());
        const Eigen::VectorXd beta = oracle::least_squares(x, y);
        for (Index j = 0; j < 10; ++j) {
            const bool on = j >= static_cast<Index>((5 * k) % 10) && j < static_cast<Index>((5 * k) % 10 + 5);
            CHECK(std::abs(beta(j) - (on ? 5.0 : 0.0)) <= 1e-6);
        }
    }
}

TEST_CASE("no change points")
{
    SimConfig s = base(ModelFamily::regression);
    s.k = 0;
    s.n = 100;
    s.p = 8;
    s.sigma_eps = 0.0;
    const SimData sim = generate(s);
    CHECK(sim.truth.empty());
    const Eigen::VectorXd beta = oracle::least_squares(sim.data.x(), sim.data.y());
    for (Index j = 0; j < 8; ++j) CHECK(std::abs(beta(j) - (j < 5 ? 5.0 : 0.0)) <= 1e-6);
}

TEST_CASE("graphical covariance")
{
    const Eigen::MatrixXd c = tridiagonal_covariance(10, 5.0, 0.3);
    CHECK(c(0, 0) == 5.0);
    CHECK(c(0, 1) == 0.3);
    CHECK(c(0, 2) == 0.0);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(c).info() == Eigen::Success);
    CHECK_THROWS_AS(tridiagonal_covariance(4, 1.0, 0.5), Error);
    SimConfig s = base(ModelFamily::graphical);
    s.delta = 1.0;
    s.delta2 = 0.6;
    CHECK_THROWS_AS(generate(s), Error);
}

TEST_CASE("graphical sample variance on a diagonal covariance")
{
    SimConfig s = base(ModelFamily::graphical);
    s.n = 20000;
    s.k = 1;
    s.p = 3;
    s.delta = 4.0;
    s.delta2 = 0.0;
    s.jitter = 0.0;
    const SimData sim = gen_ggm(s);
    const auto rows = sim.data.x().bottomRows(10000);
    const Index m = rows.rows();
    for (Index j = 0; j < 3; ++j) {
        const double var = rows.col(j).squaredNorm() / static_cast<double>(m);
        CHECK(std::abs(var - 4.0) <= 3.0 * std::sqrt(2.0 / static_cast<double>(m)) * 4.0);
        const double first = sim.data.x().col(j).head(10000).squaredNorm() / 10000.0;
        CHECK(std::abs(first - 1.0) <= 3.0 * std::sqrt(2.0 / 10000.0));
    }
}

TEST_CASE("configuration errors")
{
    SimConfig s;
    CHECK_THROWS_AS(s.validate(), Error);
    s = base(ModelFamily::mean);
    s.spacing = 40;
    CHECK_THROWS_AS(s.validate(), Error);
    s = base(ModelFamily::mean);
    s.n = 0;
    s.spacing = 40;
    CHECK(s.length() == 160);
    s.jitter = 0.5;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("summary statistics")
{
    const MeanSd m = mean_sd({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(mean_sd({7.0}).sd == 0.0);
    CHECK(mean_sd({}).count == 0);
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(log_log_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
    CHECK(log_log_slope({10, 100}, {5, 50}) == doctest::Approx(1.0));
}

TEST_CASE("trial seeds differ and are stable")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 100; ++i) seen.insert(trial_seed(7, i));
    CHECK(seen.size() == 100);
    CHECK(trial_seed(7, 3) == trial_seed(7, 3));
    CHECK(trial_seed(7, 3) != trial_seed(8, 3));
}

TEST_CASE("one noiseless trial")
{
    SimConfig s = base(ModelFamily::mean);
    s.sigma_eps = 0.0;
    s.p = 5;
    DetectorConfig d;
    d.gamma = 1000.0;
    d.lambda = 0.0;
    d.zeta = 0.0;
    const TrialReport r = run_trials(s, 1, d);
    REQUIRE(r.trials.size() == 1);
    CHECK(r.k_equal == 1);
    REQUIRE(r.trials[0].hausdorff);
    CHECK(*r.trials[0].hausdorff == 0.0);
    CHECK(r.hausdorff.sd == 0.0);
}

TEST_CASE("aggregation of duplicated outcomes")
{
    TrialOutcome t;
    t.hausdorff = 2.0;
    t.divide_seconds = 0.5;
    t.k_compare = CountComparison::greater;
    const TrialReport r = aggregate({t, t, t});
    CHECK(r.hausdorff.mean == 2.0);
    CHECK(r.hausdorff.sd == 0.0);
    CHECK(r.seconds.sd == 0.0);
    CHECK(r.k_greater == 3);
    TrialOutcome none;
    none.hausdorff.reset();
    none.k_compare = CountComparison::less;
    const TrialReport q = aggregate({none});
    CHECK(q.hausdorff.count == 0);
    CHECK(format_table_row("x", q).find("n/a") != std::string::npos);
}

TEST_CASE("table row layout")
{
    TrialOutcome t;
    t.hausdorff = 0.0;
    t.divide_seconds = 0.7;
    const TrialReport r = aggregate({t, t});
    CHECK(format_table_row("mean-n200", r) == "mean-n200 & DCDP & 0.00 (0.00) & 0.7s (0.0) & 0 & 2 & 0");
}

TEST_CASE("trial results do not depend on the worker count")
{
    SimConfig s = base(ModelFamily::mean);
    s.p = 5;
    s.seed = 11;
    DetectorConfig d;
    d.gamma = 200.0;
    const TrialReport one = run_trials(s, 4, d, 1);
    const TrialReport two = run_trials(s, 4, d, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(one.trials[i].seed == two.trials[i].seed);
        CHECK(one.trials[i].estimated == two.trials[i].estimated);
        CHECK(one.trials[i].truth == two.trials[i].truth);
    }
    CHECK_THROWS_AS(run_trials(s, 0, d), Error);
}

TEST_CASE("scaling sweep reports one point per size")
{
    SimConfig s;
    s.family = ModelFamily::mean;
    s.p = 1;
    s.k = 3;
    s.jitter = 0.0;
    const auto pts = run_scaling(s, {{400, 20}, {800, 20}}, 2000.0, 1);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].n == 800);
    CHECK(pts[0].grid_size == 20);
    CHECK(pts[0].divide_seconds > 0.0);
}
