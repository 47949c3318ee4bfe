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

// Serial reference kernels against their OpenMP counterparts.
//
//   bench_kernels --benchmark_filter=Forest
//
// Thread count follows OMP_NUM_THREADS.

#include "sigsurv/baseline.hpp"
#include "sigsurv/cohort.hpp"
#include "sigsurv/event_paths.hpp"
#include "sigsurv/forest.hpp"
#include "sigsurv/signature.hpp"
#include "sigsurv/survival.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace sigsurv;

namespace {

    std::vector<PiecewisePath> random_paths(std::size_t n, int dim, int points) {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g;
        std::vector<PiecewisePath> out;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> pts(static_cast<std::size_t>(dim * points));
            double acc = 0.0;
            for (auto& v : pts) v = (acc += g(rng) * 0.1);
            out.emplace_back(dim, std::move(pts));
        }
        return out;
    }

    struct SurvData {
        FeatureMatrix x;
        std::vector<SurvivalOutcome> y;
    };

    SurvData surv_data(std::size_t n, std::size_t p) {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> u;
        SurvData d{FeatureMatrix(n, p), {}};
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) d.x(i, j) = g(rng);
            d.y.push_back({u(rng) < 0.6, 1.0 + 50.0 * u(rng) * std::exp(-0.5 * d.x(i, 0))});
        }
        return d;
    }

    ForestParams bench_params() {
        ForestParams p;
        p.n_trees = 50;
        return p;
    }

    const std::vector<PatientTimeline>& bench_cohort() {
        static const auto cohort = [] {
            CohortSpec spec;
            spec.n_died = 600;
            spec.n_censored = 400;
            return generate_cohort(spec).patients;
        }();
        return cohort;
    }

    void BM_SignatureBatchSerial(benchmark::State& st) {
        const auto paths = random_paths(512, 4, 50);
        for (auto _ : st) benchmark::DoNotOptimize(serial::batch_log_signatures(paths, static_cast<int>(st.range(0))));
    }
    void BM_SignatureBatchParallel(benchmark::State& st) {
        const auto paths = random_paths(512, 4, 50);
        for (auto _ : st) benchmark::DoNotOptimize(batch_log_signatures(paths, static_cast<int>(st.range(0))));
    }
    BENCHMARK(BM_SignatureBatchSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
    BENCHMARK(BM_SignatureBatchParallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

    void BM_ForestFitSerial(benchmark::State& st) {
        const auto d = surv_data(static_cast<std::size_t>(st.range(0)), 8);
        for (auto _ : st) benchmark::DoNotOptimize(serial::fit_survival_forest(d.x, d.y, bench_params(), 1));
    }
    void BM_ForestFitParallel(benchmark::State& st) {
        const auto d = surv_data(static_cast<std::size_t>(st.range(0)), 8);
        for (auto _ : st) benchmark::DoNotOptimize(fit_survival_forest(d.x, d.y, bench_params(), 1));
    }
    BENCHMARK(BM_ForestFitSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
    BENCHMARK(BM_ForestFitParallel)->Arg(1000)->Unit(benchmark::kMillisecond);

    void BM_ForestPredictSerial(benchmark::State& st) {
        const auto d = surv_data(2000, 8);
        const auto model = fit_survival_forest(d.x, d.y, bench_params(), 1);
        for (auto _ : st) benchmark::DoNotOptimize(serial::predict_risks(model, d.x));
    }
    void BM_ForestPredictParallel(benchmark::State& st) {
        const auto d = surv_data(2000, 8);
        const auto model = fit_survival_forest(d.x, d.y, bench_params(), 1);
        for (auto _ : st) benchmark::DoNotOptimize(predict_risks(model, d.x));
    }
    BENCHMARK(BM_ForestPredictSerial)->Unit(benchmark::kMillisecond);
    BENCHMARK(BM_ForestPredictParallel)->Unit(benchmark::kMillisecond);

    void BM_ConcordanceSerial(benchmark::State& st) {
        const auto d = surv_data(static_cast<std::size_t>(st.range(0)), 1);
        std::vector<double> r(d.y.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = d.x(i, 0);
        for (auto _ : st) benchmark::DoNotOptimize(serial::concordance_counts(r, d.y));
    }
    void BM_ConcordanceParallel(benchmark::State& st) {
        const auto d = surv_data(static_cast<std::size_t>(st.range(0)), 1);
        std::vector<double> r(d.y.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = d.x(i, 0);
        for (auto _ : st) benchmark::DoNotOptimize(concordance_counts(r, d.y));
    }
    BENCHMARK(BM_ConcordanceSerial)->Arg(3462)->Unit(benchmark::kMillisecond);
    BENCHMARK(BM_ConcordanceParallel)->Arg(3462)->Unit(benchmark::kMillisecond);

    void BM_FeaturizeSignatures(benchmark::State& st) {
        PathEncodingConfig cfg;
        cfg.feature_set = FeatureSet::time_mmse_meds;
        cfg.truncation_level = 2;
        cfg.medication_vocabulary = default_medication_vocabulary(CohortSpec{}.drugs);
        const auto& cohort = bench_cohort();
        for (auto _ : st) benchmark::DoNotOptimize(featurize_signatures(cohort, cfg));
    }
    void BM_FeaturizeBaselines(benchmark::State& st) {
        const auto& cohort = bench_cohort();
        for (auto _ : st) benchmark::DoNotOptimize(featurize_baselines(cohort, FeatureSet::time_mmse_meds));
    }
    BENCHMARK(BM_FeaturizeSignatures)->Unit(benchmark::kMillisecond);
    BENCHMARK(BM_FeaturizeBaselines)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
