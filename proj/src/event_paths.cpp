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

#include "sigsurv/event_paths.hpp"

#include "sigsurv/error.hpp"

#include <algorithm>
#include <exception>
#include <fmt/format.h>

namespace sigsurv {

    std::string_view to_string(FeatureSet fs) {
        return fs == FeatureSet::time_mmse ? "time_mmse" : "time_mmse_meds";
    }

    FeatureSet parse_feature_set(std::string_view s) {
        if (s == "time_mmse") return FeatureSet::time_mmse;
        if (s == "time_mmse_meds") return FeatureSet::time_mmse_meds;
        throw ConfigError("unknown feature set '" + std::string(s) + "' (expected time_mmse or time_mmse_meds)");
    }

    void PathEncodingConfig::validate() const {
        if (truncation_level < 1) throw ConfigError("truncation_level must be >= 1");
        if (!(mmse_scale > 0.0)) throw ConfigError("mmse_scale must be > 0");
        if (feature_set == FeatureSet::time_mmse_meds && medication_vocabulary.empty()) {
            throw ConfigError("medication_vocabulary must be nonempty for time_mmse_meds");
        }
        auto sorted = medication_vocabulary;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ConfigError("medication_vocabulary has duplicate entries");
        }
    }

    int PathEncodingConfig::path_dim() const {
        return feature_set == FeatureSet::time_mmse ? 2 : 2 + static_cast<int>(medication_vocabulary.size());
    }

    std::string PathEncodingConfig::schema_id() const {
        std::string id = fmt::format("sig:{}:L{}:s{}", to_string(feature_set), truncation_level, mmse_scale);
        if (feature_set == FeatureSet::time_mmse_meds) {
            // FNV-1a over the ordered vocabulary
            std::uint32_t h = 2166136261u;
            for (const auto& v : medication_vocabulary) {
                for (char c : v + '\x1f') {
                    h ^= static_cast<unsigned char>(c);
                    h *= 16777619u;
                }
            }
            id += fmt::format(":v{:08x}", h);
        }
        return id;
    }

    std::vector<std::string> default_medication_vocabulary(const std::vector<std::string>& drugs) {
        std::vector<std::string> out{std::string(kNoMed), std::string(kDiscontinued)};
        auto sorted = drugs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        out.insert(out.end(), sorted.begin(), sorted.end());
        return out;
    }

    PiecewisePath encode_path(const PatientTimeline& tl, const PathEncodingConfig& cfg) {
        cfg.validate();
        const auto rows = tl.rows();
        if (rows.empty()) throw DataError("cannot encode '" + tl.patient_id + "': no MMSE or medication events");

        const bool meds = cfg.feature_set == FeatureSet::time_mmse_meds;
        const int dim = cfg.path_dim();
        const Date index = tl.index_date();

        // Before the first observation the MMSE channel takes the first observed value.
        std::optional<int> carried;
        for (const auto& r : rows) {
            if (r.mmse) {
                carried = r.mmse;
                break;
            }
        }

        PiecewisePath path(dim);
        std::vector<double> point(static_cast<std::size_t>(dim), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.mmse) carried = r.mmse;
            std::fill(point.begin(), point.end(), 0.0);
            point[0] = months_between(index, r.date);
            point[1] = carried ? *carried / cfg.mmse_scale : 0.0;
            if (meds) {
                auto it = std::find(cfg.medication_vocabulary.begin(), cfg.medication_vocabulary.end(), r.medication);
                if (it == cfg.medication_vocabulary.end()) {
                    throw DataError("medication category '" + r.medication + "' of patient '" + tl.patient_id +
                                    "' is not in the vocabulary");
                }
                point[static_cast<std::size_t>(2 + (it - cfg.medication_vocabulary.begin()))] = 1.0;
            }
            if (i == 0) {
                std::vector<double> base(static_cast<std::size_t>(dim), 0.0);
                base[0] = point[0];
                path.push_back(base);
            }
            path.push_back(point);
        }
        return path;
    }

    FeatureVector featurize_signature(const PatientTimeline& tl, const PathEncodingConfig& cfg,
                                      const LyndonBasis& basis) {
        if (basis.dim() != cfg.path_dim() || basis.level() != cfg.truncation_level) {
            throw ShapeError("Lyndon basis does not match the encoding config");
        }
        FeatureVector fv;
        fv.patient_id = tl.patient_id;
        fv.schema_id = cfg.schema_id();
        fv.values = log_signature(encode_path(tl, cfg), basis).coords;
        return fv;
    }

    FeatureVector featurize_signature(const PatientTimeline& tl, const PathEncodingConfig& cfg) {
        cfg.validate();
        return featurize_signature(tl, cfg, LyndonBasis(cfg.path_dim(), cfg.truncation_level));
    }

    std::vector<std::string> signature_feature_names(const PathEncodingConfig& cfg) {
        cfg.validate();
        std::vector<std::string> out;
        for (const auto& w : lyndon_words(cfg.path_dim(), cfg.truncation_level)) {
            out.push_back("s_" + w.label(cfg.path_dim()));
        }
        return out;
    }

    std::vector<FeatureVector> featurize_signatures(const std::vector<PatientTimeline>& cohort,
                                                    const PathEncodingConfig& cfg) {
        cfg.validate();
        const LyndonBasis basis(cfg.path_dim(), cfg.truncation_level);
        std::vector<FeatureVector> out(cohort.size());
        std::exception_ptr failure;
        const auto n = static_cast<std::ptrdiff_t>(cohort.size());
        #pragma omp parallel for schedule(dynamic, 32)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = featurize_signature(cohort[static_cast<std::size_t>(i)], cfg, basis);
            } catch (...) {
                #pragma omp critical(sigsurv_featurize_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return out;
    }

}  // namespace sigsurv
