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
// Synthetic cohorts for the survival experiments.
//
// Each patient gets visits spread over a fixed feature window, an MMSE trajectory with a
// patient-specific change point (early decline rate, then a late decline rate), and a
// medication history (first-line drug, optional switch to a second-line drug, optional
// discontinuation). Latent death times follow a proportional-hazards model whose log-hazard
// depends on the trajectory and, after an onset month, on whether the switch to second-line
// treatment happened early. Observed times are then matched to the target moments: the died
// group receives gamma-distributed times assigned in latent-death-time order, the censored
// group gamma-distributed times drawn independently of risk.

#ifndef SIGSURV_COHORT_HPP
#define SIGSURV_COHORT_HPP

#include "sigsurv/timeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sigsurv {

    struct CohortSpec {
        std::uint64_t seed = 2021;
        int n_died = 1962;
        int n_censored = 1500;
        // Survival time targets in months.
        double died_mean = 52.2;
        double died_std = 22.8;
        double censored_mean = 28.4;
        double censored_std = 16.6;

        std::vector<std::string> drugs{"donepezil", "galantamine", "memantine", "rivastigmine"};

        // Visits
        double window_months = 24.0;
        int min_visits = 4;
        int max_visits = 7;

        // MMSE trajectory
        double mmse_start_mean = 24.0;
        double mmse_start_sd = 3.0;
        double slope_early_mean = -0.10;  // points per month
        double slope_early_sd = 0.10;
        double slope_late_mean = -0.30;
        double slope_late_sd = 0.30;
        double mmse_noise_sd = 0.5;
        // When false the trajectory is a single line with the early slope.
        bool change_point = true;

        // Log-hazard effects, per standard deviation of the driver.
        double effect_end_mmse = 0.3;     // lower true MMSE at the end of the window -> higher hazard
        double effect_late_slope = 2.5;   // steeper late decline -> higher hazard
        double effect_slope = 0.0;        // overall linear slope (used by slope-only cohorts)
        double effect_early_switch = 3.5; // memantine started before month 12, active from the onset month
        double med_effect_onset = 0.0;

        // Throws ConfigError for infeasible values.
        void validate() const;
    };

    struct Cohort {
        std::vector<PatientTimeline> patients;
    };

    Cohort generate_cohort(const CohortSpec& spec);

    // Shuffles each patient's MMSE values across its visit dates and the order of its
    // medication regimens, keeping dates and multisets fixed.
    Cohort scramble_event_order(const Cohort& cohort, std::uint64_t seed);

    std::vector<SurvivalOutcome> outcomes_of(const Cohort& cohort);

}  // namespace sigsurv

#endif  // SIGSURV_COHORT_HPP
