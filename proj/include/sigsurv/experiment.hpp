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

// Cross-validated comparison of signature and baseline featurisers on survival cohorts.

#ifndef SIGSURV_EXPERIMENT_HPP
#define SIGSURV_EXPERIMENT_HPP

#include "sigsurv/cohort.hpp"
#include "sigsurv/event_paths.hpp"
#include "sigsurv/forest.hpp"
#include "sigsurv/survival.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sigsurv {

    enum class Featuriser { sig, baseline };
    std::string_view to_string(Featuriser f);
    Featuriser parse_featuriser(std::string_view s);

    struct ExperimentConfig {
        std::uint64_t seed = 2021;
        int k = 5;
        std::vector<FeatureSet> feature_sets{FeatureSet::time_mmse, FeatureSet::time_mmse_meds};
        int level_time_mmse = 3;
        int level_time_mmse_meds = 2;
        double mmse_scale = 30.0;
        ForestParams forest;
        std::vector<double> eval_grid = default_grid();
        CohortSpec cohort;

        // Months 10, 12, ..., 40.
        static std::vector<double> default_grid();

        int level_for(FeatureSet fs) const;
        // Throws ConfigError naming the offending field.
        void validate() const;

        // Missing fields keep their defaults. Errors carry the field path, e.g. "forest.n_trees".
        static ExperimentConfig from_json_text(const std::string& text);
        static ExperimentConfig load(const std::filesystem::path& path);
        std::string to_json_text() const;
    };

    CohortSpec cohort_spec_from_json_text(const std::string& text);
    std::string cohort_spec_to_json_text(const CohortSpec& spec);

    /* Fold index in [0, k) per outcome. Each event class is sorted by time, shuffled with the
     * seed and dealt round robin, the second class continuing where the first stopped, so
     * per-fold class counts differ by at most one. Throws DomainError when k < 2 or k > n. */
    std::vector<int> stratified_kfold(std::span<const SurvivalOutcome> outcomes, int k, std::uint64_t seed);
    // FNV-1a over the assignment.
    std::uint64_t fold_hash(std::span<const int> folds);

    struct FoldResult {
        int fold = 0;
        std::size_t n_train = 0;
        std::size_t n_test = 0;
        double c_index = 0.0;
        std::vector<AucPoint> auc;
    };

    struct EvalReport {
        Featuriser featuriser = Featuriser::sig;
        FeatureSet feature_set = FeatureSet::time_mmse;
        std::string schema_id;
        std::size_t n_features = 0;
        std::uint64_t fold_hash = 0;
        std::vector<FoldResult> folds;
        double c_mean = 0.0;
        double c_std = 0.0;  // sample standard deviation over folds
        // Per grid time, mean over the folds that produced a value.
        std::vector<AucPoint> mean_auc;
        bool aborted = false;
        std::string diagnostic;

        // "sig_time_mmse", "baseline_time_mmse_meds", ...
        std::string cell_id() const;
        // "Sig {time,MMSE}", "Non-sig {time,MMSE,meds}", ...
        std::string label() const;
    };

    // Feature matrix of one cell, rows in cohort order.
    FeatureMatrix featurize_cell(const std::vector<PatientTimeline>& cohort, Featuriser f, FeatureSet fs,
                                 const ExperimentConfig& cfg, std::string* schema_id = nullptr);

    // One report per (featuriser, feature set), all sharing one fold assignment.
    std::vector<EvalReport> run_experiment(const std::vector<PatientTimeline>& cohort, const ExperimentConfig& cfg);

    // "0.626(0.012)"
    std::string format_mean_std(double mean, double sd);
    std::string format_cindex_table(const std::vector<EvalReport>& reports);

    // Table (text and CSV), AUC curves (CSV and SVG) and one fold CSV per report. Returns the
    // written paths. Throws DataError for an empty report list, Error on write failure.
    std::vector<std::filesystem::path> emit_outputs(const std::vector<EvalReport>& reports,
                                                    const std::filesystem::path& dir);

}  // namespace sigsurv

#endif  // SIGSURV_EXPERIMENT_HPP
