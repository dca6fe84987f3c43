/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <dcdp/io.hpp>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dcdp {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, const std::string& source, std::size_t line, std::size_t column)
{
    cell = trim(cell);
    // strtod handles nan/inf spellings and exponents; from_chars for double is
    // not available everywhere yet.
    const std::string text(cell);
    char* end = nullptr;
    errno = 0;
    const double v = text.empty() ? 0.0 : std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line) + ": column " +
                                                std::to_string(column) + ": not a finite number: '" + text + "'");
    }
    return v;
}

}  // namespace

Eigen::MatrixXd parse_csv(std::istream& in, const std::string& source)
{
    std::vector<double> cells;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::size_t count = 0;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(parse_cell(rest.substr(0, comma), source, line_no, count + 1));
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            width = count;
        } else if (count != width) {
            throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line_no) + ": expected " +
                                                    std::to_string(width) + " columns, found " +
                                                    std::to_string(count));
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::parse_error, source + ": no data rows");
    Eigen::MatrixXd out(static_cast<Index>(rows), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < width; ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = cells[i * width + j];
    }
    return out;
}

Eigen::MatrixXd read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
    return parse_csv(in, path);
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& values)
{
    char buf[32];
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

void write_csv(const std::string& path, const Eigen::MatrixXd& values)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + path);
    write_csv(out, values);
    if (!out) throw Error(ErrorKind::io_error, "write failed: " + path);
}

ObservationSet to_observations(const Eigen::MatrixXd& table, ModelFamily family, std::optional<Index> response_col)
{
    if (family != ModelFamily::regression) {
        if (response_col) throw Error(ErrorKind::invalid_config, "response column only applies to regression");
        return ObservationSet(table, family);
    }
    const Index cols = table.cols();
    const Index r = response_col.value_or(cols - 1);
    if (cols < 2) throw Error(ErrorKind::invalid_config, "regression needs a response and at least one covariate");
    if (r < 0 || r >= cols) {
        throw Error(ErrorKind::invalid_config,
                    "response column " + std::to_string(r) + " outside 0.." + std::to_string(cols - 1));
    }
    Eigen::MatrixXd x(table.rows(), cols - 1);
    Index k = 0;
    for (Index j = 0; j < cols; ++j) {
        if (j != r) x.col(k++) = table.col(j);
    }
    Eigen::VectorXd y = table.col(r);
    return ObservationSet(std::move(x), std::move(y), family);
}

Eigen::MatrixXd to_table(const ObservationSet& data)
{
    if (!data.has_response()) return data.x();
    Eigen::MatrixXd out(data.n(), data.p() + 1);
    out.leftCols(data.p()) = data.x();
    out.col(data.p()) = data.y();
    return out;
}

std::vector<Index> read_truth(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
    std::vector<Index> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        Index v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            throw Error(ErrorKind::parse_error, path + ":" + std::to_string(line_no) + ": not an integer");
        }
        out.push_back(v);
    }
    return out;
}

void write_truth(const std::string& path, const ChangePointSet& cps)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + path);
    for (Index v : cps.points()) out << v << '\n';
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string file_digest(const std::string& path)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_file(path))));
    return buf;
}

}  // namespace dcdp
