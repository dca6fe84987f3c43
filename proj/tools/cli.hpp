/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_TOOLS_CLI_HPP
#define DCDP_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <dcdp/simulate.hpp>

namespace dcdp::cli {

/// Entry point of the command-line tool, minus the program name. Reports go
/// to `out` (or to files named by flags), errors to `err` as a JSON object.
/// Returns 0 on success, 1 on a runtime error and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Preset {
    std::string name;
    std::string description;
    SimConfig sim;
    /// Scaling presets sweep (n, Q) pairs instead of running trials.
    std::vector<std::pair<Index, Index>> sizes;
    double gamma = 0.0;

    bool scaling() const { return !sizes.empty(); }
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace dcdp::cli

#endif  // DCDP_TOOLS_CLI_HPP
