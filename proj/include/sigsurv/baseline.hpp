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
// Linear summary features: per-patient least-squares intercept and slope of MMSE over time,
// plus the median cumulative count of distinct medications.

#ifndef SIGSURV_BASELINE_HPP
#define SIGSURV_BASELINE_HPP

#include "sigsurv/event_paths.hpp"
#include "sigsurv/timeline.hpp"

#include <span>

namespace sigsurv {

    struct LinearFit {
        double intercept = 0.0;
        double slope = 0.0;
    };

    // Ordinary least squares of scores on times. With one observation, or all times equal,
    // the slope is 0 and the intercept is the mean score.
    LinearFit ols_fit(std::span<const double> times, std::span<const double> scores);

    struct BaselineFeatures {
        double intercept = 0.0;  // MMSE points
        double slope = 0.0;      // MMSE points per month
        double med_stat = 0.0;   // median over dates of the cumulative distinct-drug count
    };

    BaselineFeatures baseline_featurize(const PatientTimeline& tl);

    // (intercept, slope) for time_mmse; (intercept, slope, med_stat) for time_mmse_meds.
    FeatureVector featurize_baseline(const PatientTimeline& tl, FeatureSet fs);
    std::vector<std::string> baseline_feature_names(FeatureSet fs);
    std::string baseline_schema_id(FeatureSet fs);

    std::vector<FeatureVector> featurize_baselines(const std::vector<PatientTimeline>& cohort, FeatureSet fs);

}  // namespace sigsurv

#endif  // SIGSURV_BASELINE_HPP
