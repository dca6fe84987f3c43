/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_IO_HPP
#define DCDP_IO_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <dcdp/core.hpp>
#include <dcdp/observations.hpp>

namespace dcdp {

/// Headerless numeric CSV, one row per time index. Blank lines are skipped.
/// Malformed cells raise parse-error naming the source and the line.
Eigen::MatrixXd parse_csv(std::istream& in, const std::string& source = "<stream>");
Eigen::MatrixXd read_csv(const std::string& path);

/// Writes with 17 significant digits so that reading back is exact.
void write_csv(const std::string& path, const Eigen::MatrixXd& values);
void write_csv(std::ostream& out, const Eigen::MatrixXd& values);

/// Splits a table into an ObservationSet. For regression the response is
/// column `response_col` (default: the last one) and the rest form X.
ObservationSet to_observations(const Eigen::MatrixXd& table, ModelFamily family,
                               std::optional<Index> response_col = std::nullopt);

/// Inverse of to_observations for writing simulated data; the response goes last.
Eigen::MatrixXd to_table(const ObservationSet& data);

/// Truth files: one change point per line.
std::vector<Index> read_truth(const std::string& path);
void write_truth(const std::string& path, const ChangePointSet& cps);

/// FNV-1a 64-bit hash of the file bytes, as 16 hex digits.
std::string file_digest(const std::string& path);
std::uint64_t fnv1a64(const std::string& bytes) noexcept;

std::string read_file(const std::string& path);

}  // namespace dcdp

#endif  // DCDP_IO_HPP
