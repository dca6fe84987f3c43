/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#ifndef DCDP_TUNING_HPP
#define DCDP_TUNING_HPP

#include <vector>

#include <dcdp/core.hpp>
#include <dcdp/ddp.hpp>
#include <dcdp/observations.hpp>
#include <dcdp/plr.hpp>

namespace dcdp {

enum class Pairing { zipped, cartesian };

struct CvPlan {
    std::vector<double> gamma_grid;
    std::vector<double> zeta_grid;
    Pairing pairing = Pairing::zipped;

    void validate() const;
    /// Candidate (gamma, zeta) pairs in evaluation order.
    std::vector<std::pair<double, double>> candidates() const;
};

struct CvCandidate {
    double gamma = 0.0;
    double zeta = 0.0;
    double risk = 0.0;
    ChangePointSet train_points;  ///< refined estimate on the training half
};

struct CvReport {
    std::vector<CvCandidate> candidates;
    std::size_t selected = 0;
    double selected_gamma = 0.0;
    double selected_zeta = 0.0;
    double pivot = 0.0;  ///< data-scale pivot of the default ladder, 0 if not used
};

struct OddEvenSplit {
    ObservationSet train;
    ObservationSet test;

    /// Maps an index of the training half to the full series.
    static Index to_full(Index train_index) noexcept { return 2 * train_index; }
};

/// Training half takes rows 1, 3, 5, ... (1-based); test half rows 2, 4, ....
OddEvenSplit odd_even_split(const ObservationSet& data);

/// Held-out risk of a training-half segmentation: parameters are fit on the
/// training rows of each segment and scored on the test rows with the same
/// index range.
double held_out_risk(const PrefixCache& train, const PrefixCache& test, const ChangePointSet& train_points,
                     const ModelSpec& model);

/// Odd/even cross-validation. divide_template.grid must be valid for the
/// training half; gamma and zeta in the templates are ignored.
CvReport cv_select(const ObservationSet& data, const CvPlan& plan, const DivideConfig& divide_template,
                   const RefineConfig& refine_template);

/// Geometric ladder of `points` values spanning [low, high] * pivot, where
/// pivot is the single-segment goodness-of-fit of the data divided by
/// (expected_k + 1).
std::vector<double> default_gamma_ladder(const ObservationSet& data, const ModelSpec& model, Index expected_k,
                                         int points = 8, double low = 0.05, double high = 5.0,
                                         double* pivot_out = nullptr);

}  // namespace dcdp

#endif  // DCDP_TUNING_HPP
