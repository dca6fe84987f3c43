/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_ERROR_HPP
#define DCDP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcdp {

enum class ErrorKind {
    invalid_grid,
    invalid_interval,
    invalid_change_points,
    undefined_metric,
    missing_response,
    degenerate_design,
    singular_covariance,
    too_short,
    infeasible_config,
    invalid_config,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every recoverable failure in the library is reported through this type;
/// kind() is stable and is what the CLI serializes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace dcdp

#endif  // DCDP_ERROR_HPP
