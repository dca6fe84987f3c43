/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_RANDOM_HPP
#define DCDP_RANDOM_HPP

#include <cstdint>
#include <random>

namespace dcdp {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent generator for (base seed, stream id). Stream ids are used for
/// trial indices so that trials can run in any order on any worker.
Rng make_stream(std::uint64_t base_seed, std::uint64_t stream);

}  // namespace dcdp

#endif  // DCDP_RANDOM_HPP
