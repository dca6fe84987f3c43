/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <dcdp/io.hpp>

#include "oracles.hpp"

using namespace dcdp;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("dcdp_test_io_" + name)).string();
}

ErrorKind parse_kind(const std::string& text, std::string* message = nullptr)
{
    std::istringstream in(text);
    try {
        parse_csv(in, "mem.csv");
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.kind();
    }
    FAIL("expected a parse error");
    return ErrorKind::io_error;
}

}  // namespace

TEST_CASE("parse a small table")
{
    std::istringstream in("1, 2.5\n\n-3,4e2\n  5 ,6\n");
    const Eigen::MatrixXd t = parse_csv(in);
    REQUIRE(t.rows() == 3);
    REQUIRE(t.cols() == 2);
    CHECK(t(1, 1) == 400.0);
    CHECK(t(2, 0) == 5.0);
}

TEST_CASE("malformed input names the line")
{
    std::string msg;
    CHECK(parse_kind("1,2\n3,x\n", &msg) == ErrorKind::parse_error);
    CHECK(msg.find("mem.csv:2") != std::string::npos);
    CHECK(parse_kind("1,2\n3\n") == ErrorKind::parse_error);
    CHECK(parse_kind("") == ErrorKind::parse_error);
    CHECK(parse_kind("1,nan\n") == ErrorKind::parse_error);
    CHECK(parse_kind("1,,2\n") == ErrorKind::parse_error);
}

TEST_CASE("write then read is exact")
{
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd m = oracle::random_matrix(rng, 25, 4, 1e3);
    const std::string path = temp_path("roundtrip.csv");
    write_csv(path, m);
    CHECK(read_csv(path) == m);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_csv(temp_path("missing.csv")), Error);
}

TEST_CASE("observations from a table")
{
    Eigen::MatrixXd t(3, 3);
    t << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const auto reg = to_observations(t, ModelFamily::regression);
    CHECK(reg.p() == 2);
    CHECK(reg.y() == Eigen::Vector3d(3, 6, 9));
    const auto first = to_observations(t, ModelFamily::regression, 0);
    CHECK(first.y() == Eigen::Vector3d(1, 4, 7));
    CHECK(first.x().col(0) == Eigen::Vector3d(2, 5, 8));
    CHECK(to_table(reg) == t);
    CHECK(to_observations(t, ModelFamily::mean).p() == 3);
    CHECK_THROWS_AS(to_observations(t, ModelFamily::regression, 3), Error);
    CHECK_THROWS_AS(to_observations(t, ModelFamily::mean, 1), Error);
    CHECK_THROWS_AS(to_observations(t.leftCols(1), ModelFamily::regression), Error);
}

TEST_CASE("truth files and digests")
{
    const std::string path = temp_path("truth.txt");
    write_truth(path, ChangePointSet({10, 20, 35}, 50));
    CHECK(read_truth(path) == std::vector<Index>{10, 20, 35});
    const std::string d = file_digest(path);
    CHECK(d.size() == 16);
    CHECK(d == file_digest(path));
    std::remove(path.c_str());
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
