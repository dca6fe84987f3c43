/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include <dcdp/core.hpp>

using namespace dcdp;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::io_error;
}

}  // namespace

TEST_CASE("interval bounds")
{
    const Interval i(2, 5);
    CHECK(i.length() == 3);
    CHECK(kind_of([] { Interval(3, 3); }) == ErrorKind::invalid_interval);
    CHECK(kind_of([] { Interval(-1, 3); }) == ErrorKind::invalid_interval);
}

TEST_CASE("change point sets are validated")
{
    CHECK_NOTHROW(ChangePointSet({1, 5, 9}, 10));
    CHECK(kind_of([] { ChangePointSet({0, 5}, 10); }) == ErrorKind::invalid_change_points);
    CHECK(kind_of([] { ChangePointSet({5, 10}, 10); }) == ErrorKind::invalid_change_points);
    CHECK(kind_of([] { ChangePointSet({5, 5}, 10); }) == ErrorKind::invalid_change_points);
    CHECK(kind_of([] { ChangePointSet({6, 5}, 10); }) == ErrorKind::invalid_change_points);
    CHECK(ChangePointSet({3, 4}, 10).min_spacing() == 1);
    CHECK(ChangePointSet({}, 10).min_spacing() == 10);
}

TEST_CASE("uniform grid")
{
    CHECK(resolve_grid(GridSpec::uniform(4), 10) == std::vector<Index>{2, 4, 6, 8});
    CHECK(resolve_grid(GridSpec::uniform(3), 7) == std::vector<Index>{1, 3, 5});
    CHECK(resolve_grid(GridSpec::uniform(0), 5).empty());
    CHECK(resolve_grid(GridSpec::uniform(9), 10) == std::vector<Index>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(kind_of([] { resolve_grid(GridSpec::uniform(10), 10); }) == ErrorKind::invalid_grid);
    CHECK(kind_of([] { resolve_grid(GridSpec::uniform(0), 1); }) == ErrorKind::invalid_grid);
}

TEST_CASE("random grid is a seeded sorted sample without repeats")
{
    const auto a = resolve_grid(GridSpec::random(20, 11), 50);
    const auto b = resolve_grid(GridSpec::random(20, 11), 50);
    const auto c = resolve_grid(GridSpec::random(20, 12), 50);
    CHECK(a == b);
    CHECK(a != c);
    REQUIRE(a.size() == 20);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::set<Index>(a.begin(), a.end()).size() == 20);
    CHECK(a.front() >= 1);
    CHECK(a.back() <= 49);
    CHECK(resolve_grid(GridSpec::random(49, 3), 50).size() == 49);
}

TEST_CASE("explicit grid is sorted and deduplicated")
{
    CHECK(resolve_grid(GridSpec::explicit_grid({7, 3, 3, 5}), 10) == std::vector<Index>{3, 5, 7});
    CHECK(kind_of([] { resolve_grid(GridSpec::explicit_grid({0, 3}), 10); }) == ErrorKind::invalid_grid);
    CHECK(kind_of([] { resolve_grid(GridSpec::explicit_grid({10}), 10); }) == ErrorKind::invalid_grid);
}

TEST_CASE("default grid size")
{
    CHECK(default_grid_size(100, 100) == 85);
    CHECK(default_grid_size(2, 2) == 1);
    for (Index n : {5, 50, 500, 5000}) CHECK(default_grid_size(n, n) <= n - 1);
    CHECK(default_grid_size(200, 50) == 199);
    CHECK(kind_of([] { default_grid_size(10, 0); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { default_grid_size(10, 11); }) == ErrorKind::invalid_config);
}

TEST_CASE("hausdorff examples")
{
    const std::vector<Index> a{50}, b{50}, c{2}, d{5}, e{40}, f{50, 60};
    CHECK(hausdorff(a, b) == 0.0);
    CHECK(hausdorff(c, d) == 3.0);
    CHECK(hausdorff(e, f) == 20.0);
    CHECK(hausdorff(f, e) == 20.0);
    const std::vector<Index> empty;
    CHECK(kind_of([&] { hausdorff(empty, a); }) == ErrorKind::undefined_metric);
    CHECK(kind_of([&] { hausdorff(a, empty); }) == ErrorKind::undefined_metric);
}

TEST_CASE("hausdorff metric axioms on random sets")
{
    std::mt19937_64 rng(5);
    auto draw = [&] {
        std::uniform_int_distribution<int> size(1, 6);
        std::uniform_int_distribution<Index> pos(1, 199);
        std::set<Index> s;
        const int k = size(rng);
        while (static_cast<int>(s.size()) < k) s.insert(pos(rng));
        return std::vector<Index>(s.begin(), s.end());
    };
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = draw();
        const auto b = draw();
        const auto c = draw();
        const double ab = hausdorff(a, b);
        CHECK(ab >= 0.0);
        CHECK(hausdorff(a, a) == 0.0);
        CHECK(ab == hausdorff(b, a));
        CHECK(hausdorff(a, c) <= ab + hausdorff(b, c));
        if (a != b) CHECK(ab > 0.0);
    }
}

TEST_CASE("partition of change points")
{
    auto ends = [](const std::vector<Interval>& parts) {
        std::vector<std::pair<Index, Index>> out;
        for (const auto& p : parts) out.emplace_back(p.start(), p.end());
        return out;
    };
    using V = std::vector<std::pair<Index, Index>>;
    CHECK(ends(partition_of(ChangePointSet({3}, 6))) == V{{0, 3}, {3, 6}});
    CHECK(ends(partition_of(ChangePointSet({}, 6))) == V{{0, 6}});
    CHECK(ends(partition_of(ChangePointSet({2, 4}, 6))) == V{{0, 2}, {2, 4}, {4, 6}});
}

TEST_CASE("error kinds have stable names")
{
    CHECK(to_string(ErrorKind::invalid_grid) == "invalid-grid");
    CHECK(to_string(ErrorKind::undefined_metric) == "undefined-metric");
    CHECK(to_string(ErrorKind::parse_error) == "parse-error");
}
