/* Copyright 2026 The sigsurv Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ========================================================================= */
// Right-censored survival estimators and evaluation metrics.

#ifndef SIGSURV_SURVIVAL_HPP
#define SIGSURV_SURVIVAL_HPP

#include "sigsurv/error.hpp"
#include "sigsurv/timeline.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sigsurv {

    // Right-continuous step function: value(t) = values[i] for the largest times[i] <= t,
    // `initial` before the first step.
    struct StepFunction {
        double initial = 0.0;
        std::vector<double> times;
        std::vector<double> values;

        double operator()(double t) const;
        // Limit from the left, value(t-).
        double left_limit(double t) const;
    };

    // Product-limit estimator of the survival function. Steps only at event times.
    StepFunction kaplan_meier(std::span<const SurvivalOutcome> outcomes);
    // Kaplan-Meier of the censoring distribution (censoring treated as the event).
    StepFunction censoring_kaplan_meier(std::span<const SurvivalOutcome> outcomes);
    // Nelson-Aalen cumulative hazard, sum of d_i / n_i over event times.
    StepFunction nelson_aalen(std::span<const SurvivalOutcome> outcomes);

    // Absolute standardized two-sample log-rank statistic. 0 when there are no events or the
    // variance vanishes.
    double logrank_split_score(std::span<const SurvivalOutcome> left, std::span<const SurvivalOutcome> right);

    // Raised when a C-index has no comparable pair, which is not the same thing as 0.5.
    struct NoComparablePairs : DataError {
        NoComparablePairs() : DataError("no comparable pairs") {}
    };

    struct ConcordanceCounts {
        // Twice the concordant count plus the risk ties, so everything stays integral.
        std::uint64_t doubled_concordant = 0;
        std::uint64_t comparable = 0;
        double value() const;
    };

    /* Harrell's C: pair (i, j) is comparable when time_i < time_j and i had the event; it is
     * concordant when risk_i > risk_j; risk ties count one half. OpenMP over i. */
    ConcordanceCounts concordance_counts(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes);
    double c_index(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes);

    struct AucPoint {
        double time = 0.0;
        double auc = 0.0;
    };

    /* Cumulative/dynamic AUC. At each t, cases are test subjects with an observed event at or
     * before t, weighted by 1 / G(T_i-) where G is the censoring survival function estimated on
     * the training outcomes; controls are subjects still at risk after t. Times with no cases,
     * no controls, or beyond the last observed test time are omitted with a warning. */
    std::vector<AucPoint> cumulative_dynamic_auc(std::span<const SurvivalOutcome> train,
                                                 std::span<const SurvivalOutcome> test,
                                                 std::span<const double> test_risks,
                                                 std::span<const double> eval_times);

    namespace serial {
        ConcordanceCounts concordance_counts(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes);
    }

}  // namespace sigsurv

#endif  // SIGSURV_SURVIVAL_HPP
