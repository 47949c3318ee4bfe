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
// Encoding of patient timelines as paths, and the signature featuriser built on it.
//
// Channels: months since the index date, last observed MMSE / mmse_scale (carried forward),
// and, for the medication feature set, a one-hot of the active medication category. A
// basepoint equal to the first point with every non-time channel zeroed is prepended so the
// starting level survives the signature's translation invariance.

#ifndef SIGSURV_EVENT_PATHS_HPP
#define SIGSURV_EVENT_PATHS_HPP

#include "sigsurv/signature.hpp"
#include "sigsurv/timeline.hpp"

#include <string>
#include <vector>

namespace sigsurv {

    enum class FeatureSet { time_mmse, time_mmse_meds };

    std::string_view to_string(FeatureSet fs);
    FeatureSet parse_feature_set(std::string_view s);

    struct PathEncodingConfig {
        FeatureSet feature_set = FeatureSet::time_mmse;
        // Categories for the one-hot channels, including kNoMed and kDiscontinued.
        std::vector<std::string> medication_vocabulary;
        int truncation_level = 3;
        double mmse_scale = 30.0;

        // Throws ConfigError.
        void validate() const;
        // Path dimension: 2, or 2 + vocabulary size.
        int path_dim() const;
        // e.g. "sig:time_mmse:L3:s30" or "sig:time_mmse_meds:L2:s30:v1a2b3c4d"
        std::string schema_id() const;
    };

    // Vocabulary for a lexicon's normalised names: NoMed, Discontinued, then sorted drugs.
    std::vector<std::string> default_medication_vocabulary(const std::vector<std::string>& drugs);

    struct FeatureVector {
        std::string patient_id;
        std::vector<double> values;
        std::string schema_id;
    };

    PiecewisePath encode_path(const PatientTimeline& tl, const PathEncodingConfig& cfg);

    FeatureVector featurize_signature(const PatientTimeline& tl, const PathEncodingConfig& cfg);
    FeatureVector featurize_signature(const PatientTimeline& tl, const PathEncodingConfig& cfg,
                                      const LyndonBasis& basis);

    // Column names, one per Lyndon word: s_1, s_2, s_12, ...
    std::vector<std::string> signature_feature_names(const PathEncodingConfig& cfg);

    // OpenMP over patients, output in input order.
    std::vector<FeatureVector> featurize_signatures(const std::vector<PatientTimeline>& cohort,
                                                    const PathEncodingConfig& cfg);

}  // namespace sigsurv

#endif  // SIGSURV_EVENT_PATHS_HPP
