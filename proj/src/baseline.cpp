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

#include "sigsurv/baseline.hpp"

#include "sigsurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace sigsurv {

    LinearFit ols_fit(std::span<const double> times, std::span<const double> scores) {
        if (times.size() != scores.size()) throw ShapeError("ols_fit: times and scores differ in length");
        if (times.empty()) throw DataError("ols_fit needs at least one observation");
        const double n = static_cast<double>(times.size());
        double mt = 0.0;
        double ms = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(times[i])) throw DomainError("ols_fit: non-finite time");
            mt += times[i];
            ms += scores[i];
        }
        mt /= n;
        ms /= n;
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            sxx += (times[i] - mt) * (times[i] - mt);
            sxy += (times[i] - mt) * (scores[i] - ms);
        }
        if (sxx == 0.0) return {ms, 0.0};
        const double slope = sxy / sxx;
        return {ms - slope * mt, slope};
    }

    BaselineFeatures baseline_featurize(const PatientTimeline& tl) {
        const auto rows = tl.rows();
        std::vector<double> times;
        std::vector<double> scores;
        std::vector<double> counts;
        const Date index = rows.empty() ? Date{} : tl.index_date();
        for (const auto& r : rows) {
            counts.push_back(r.cumulative_drugs);
            if (r.mmse) {
                times.push_back(months_between(index, r.date));
                scores.push_back(*r.mmse);
            }
        }
        if (scores.empty()) throw DataError("patient '" + tl.patient_id + "' has no MMSE observations");
        const auto fit = ols_fit(times, scores);

        std::sort(counts.begin(), counts.end());
        const std::size_t m = counts.size();
        const double median = m % 2 ? counts[m / 2] : 0.5 * (counts[m / 2 - 1] + counts[m / 2]);
        return {fit.intercept, fit.slope, median};
    }

    std::string baseline_schema_id(FeatureSet fs) { return "baseline:" + std::string(to_string(fs)); }

    std::vector<std::string> baseline_feature_names(FeatureSet fs) {
        if (fs == FeatureSet::time_mmse) return {"intercept", "slope"};
        return {"intercept", "slope", "med_stat"};
    }

    FeatureVector featurize_baseline(const PatientTimeline& tl, FeatureSet fs) {
        const auto b = baseline_featurize(tl);
        FeatureVector fv;
        fv.patient_id = tl.patient_id;
        fv.schema_id = baseline_schema_id(fs);
        fv.values = {b.intercept, b.slope};
        if (fs == FeatureSet::time_mmse_meds) fv.values.push_back(b.med_stat);
        return fv;
    }

    std::vector<FeatureVector> featurize_baselines(const std::vector<PatientTimeline>& cohort, FeatureSet fs) {
        std::vector<FeatureVector> out(cohort.size());
        std::exception_ptr failure;
        const auto n = static_cast<std::ptrdiff_t>(cohort.size());
        #pragma omp parallel for schedule(dynamic, 64)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = featurize_baseline(cohort[static_cast<std::size_t>(i)], fs);
            } catch (...) {
                #pragma omp critical(sigsurv_baseline_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return out;
    }

}  // namespace sigsurv
