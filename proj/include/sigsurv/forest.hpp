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
// Random survival forest: bootstrap trees grown by log-rank splitting on random feature
// subsets and random threshold candidates, with Nelson-Aalen leaves.
//
// Per-tree seeds are derived from the master seed by a fixed rule, so training with OpenMP
// over trees gives the same model as the serial reference.

#ifndef SIGSURV_FOREST_HPP
#define SIGSURV_FOREST_HPP

#include "sigsurv/timeline.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sigsurv {

    // Dense row-major matrix of features.
    class FeatureMatrix {
    public:
        FeatureMatrix() = default;
        FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
        FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
        double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
        std::span<const double> row(std::size_t r) const {
            return std::span<const double>(data_).subspan(r * cols_, cols_);
        }
        FeatureMatrix select_rows(std::span<const std::size_t> idx) const;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<double> data_;
    };

    struct ForestParams {
        int n_trees = 200;
        int mtry = 0;  // 0: floor(sqrt(p)), at least 1
        int min_samples_leaf = 15;
        int min_events_leaf = 3;
        int n_split_candidates = 10;
        int max_depth = 0;  // 0: unlimited
        bool bootstrap = true;

        void validate() const;
    };

    struct SurvivalTree {
        struct Node {
            int feature = -1;  // -1 for a leaf
            double threshold = 0.0;
            std::int32_t left = -1;  // x[feature] <= threshold
            std::int32_t right = -1;
            std::int32_t leaf = -1;  // index into leaves for leaf nodes
        };
        struct Leaf {
            // Nelson-Aalen steps: (index into the model's time grid, cumulative hazard).
            std::vector<std::pair<std::uint32_t, double>> chf;
            // Sum of the step function over the whole time grid.
            double risk_mass = 0.0;
        };
        std::uint64_t seed = 0;
        std::vector<Node> nodes;
        std::vector<Leaf> leaves;

        const Leaf& leaf_for(std::span<const double> x) const;
    };

    struct SurvivalForestModel {
        static constexpr int kFormatVersion = 1;

        std::string schema_id;
        std::size_t n_features = 0;
        ForestParams params;
        std::uint64_t seed = 0;
        std::vector<double> time_grid;  // distinct training event times
        std::vector<SurvivalTree> trees;

        // Throws ShapeError unless x has n_features entries.
        void check_input(std::span<const double> x) const;

        void save(const std::filesystem::path& path) const;
        std::string to_json_text() const;
        static SurvivalForestModel load(const std::filesystem::path& path);
        static SurvivalForestModel from_json_text(const std::string& text);
    };

    // Seed of tree t under a master seed.
    std::uint64_t tree_seed(std::uint64_t master, std::size_t tree);

    SurvivalForestModel fit_survival_forest(const FeatureMatrix& x, std::span<const SurvivalOutcome> y,
                                            const ForestParams& params, std::uint64_t seed,
                                            std::string schema_id = {});

    // Ensemble cumulative hazard summed over the time grid; larger means higher risk.
    double predict_risk(const SurvivalForestModel& model, std::span<const double> x);
    std::vector<double> predict_risks(const SurvivalForestModel& model, const FeatureMatrix& x);
    // Ensemble cumulative hazard at each grid time.
    std::vector<double> predict_cumulative_hazard(const SurvivalForestModel& model, std::span<const double> x);

    namespace serial {
        SurvivalForestModel fit_survival_forest(const FeatureMatrix& x, std::span<const SurvivalOutcome> y,
                                                const ForestParams& params, std::uint64_t seed,
                                                std::string schema_id = {});
        std::vector<double> predict_risks(const SurvivalForestModel& model, const FeatureMatrix& x);
    }

    namespace detail {
        // Log-rank statistic of the split `goes_left` over samples already sorted by time.
        // Exposed for testing against logrank_split_score.
        double sorted_logrank(std::span<const double> times, std::span<const std::uint8_t> events,
                              std::span<const std::uint8_t> goes_left);
    }

}  // namespace sigsurv

#endif  // SIGSURV_FOREST_HPP
