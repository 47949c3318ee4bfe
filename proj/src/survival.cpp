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

#include "sigsurv/survival.hpp"

#include "sigsurv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <numeric>

namespace sigsurv {

    namespace {
        struct TimeGroup {
            double time;
            std::size_t events = 0;
            std::size_t total = 0;
        };

        std::vector<TimeGroup> group_by_time(std::span<const SurvivalOutcome> outcomes, bool flip) {
            std::map<double, TimeGroup> groups;
            for (const auto& o : outcomes) {
                auto& g = groups.try_emplace(o.time, TimeGroup{o.time}).first->second;
                g.total += 1;
                if (o.event != flip) g.events += 1;
            }
            std::vector<TimeGroup> out;
            out.reserve(groups.size());
            for (auto& [t, g] : groups) out.push_back(g);
            return out;
        }

        StepFunction product_limit(std::span<const SurvivalOutcome> outcomes, bool flip) {
            if (outcomes.empty()) throw DataError("survival estimator needs at least one outcome");
            StepFunction s;
            s.initial = 1.0;
            double surv = 1.0;
            std::size_t at_risk = outcomes.size();
            for (const auto& g : group_by_time(outcomes, flip)) {
                if (g.events > 0) {
                    surv *= 1.0 - static_cast<double>(g.events) / static_cast<double>(at_risk);
                    s.times.push_back(g.time);
                    s.values.push_back(surv);
                }
                at_risk -= g.total;
            }
            return s;
        }

        void check_lengths(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes) {
            if (risks.size() != outcomes.size()) {
                throw ShapeError(fmt::format("{} risk scores for {} outcomes", risks.size(), outcomes.size()));
            }
        }
    }

    double StepFunction::operator()(double t) const {
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return initial;
        return values[static_cast<std::size_t>(it - times.begin()) - 1];
    }

    double StepFunction::left_limit(double t) const {
        auto it = std::lower_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return initial;
        return values[static_cast<std::size_t>(it - times.begin()) - 1];
    }

    StepFunction kaplan_meier(std::span<const SurvivalOutcome> outcomes) { return product_limit(outcomes, false); }

    StepFunction censoring_kaplan_meier(std::span<const SurvivalOutcome> outcomes) {
        return product_limit(outcomes, true);
    }

    StepFunction nelson_aalen(std::span<const SurvivalOutcome> outcomes) {
        if (outcomes.empty()) throw DataError("survival estimator needs at least one outcome");
        StepFunction h;
        double cum = 0.0;
        std::size_t at_risk = outcomes.size();
        for (const auto& g : group_by_time(outcomes, false)) {
            if (g.events > 0) {
                cum += static_cast<double>(g.events) / static_cast<double>(at_risk);
                h.times.push_back(g.time);
                h.values.push_back(cum);
            }
            at_risk -= g.total;
        }
        return h;
    }

    double logrank_split_score(std::span<const SurvivalOutcome> left, std::span<const SurvivalOutcome> right) {
        std::vector<std::pair<SurvivalOutcome, bool>> all;  // outcome, is_left
        all.reserve(left.size() + right.size());
        for (const auto& o : left) all.emplace_back(o, true);
        for (const auto& o : right) all.emplace_back(o, false);
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first.time < b.first.time; });

        double n = static_cast<double>(all.size());
        double n_left = static_cast<double>(left.size());
        double observed_minus_expected = 0.0;
        double variance = 0.0;
        std::size_t i = 0;
        while (i < all.size()) {
            std::size_t j = i;
            double d = 0.0;
            double d_left = 0.0;
            double removed_left = 0.0;
            while (j < all.size() && all[j].first.time == all[i].first.time) {
                if (all[j].first.event) {
                    d += 1.0;
                    if (all[j].second) d_left += 1.0;
                }
                if (all[j].second) removed_left += 1.0;
                ++j;
            }
            if (d > 0.0) {
                observed_minus_expected += d_left - d * n_left / n;
                if (n > 1.0) variance += d * (n_left / n) * (1.0 - n_left / n) * (n - d) / (n - 1.0);
            }
            n -= static_cast<double>(j - i);
            n_left -= removed_left;
            i = j;
        }
        if (variance <= 0.0) return 0.0;
        return std::abs(observed_minus_expected) / std::sqrt(variance);
    }

    double ConcordanceCounts::value() const {
        if (comparable == 0) throw NoComparablePairs();
        return static_cast<double>(doubled_concordant) / (2.0 * static_cast<double>(comparable));
    }

    ConcordanceCounts concordance_counts(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes) {
        check_lengths(risks, outcomes);
        const auto n = static_cast<std::ptrdiff_t>(outcomes.size());
        std::uint64_t doubled = 0;
        std::uint64_t comparable = 0;
        #pragma omp parallel for schedule(dynamic, 64) reduction(+ : doubled, comparable)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto& oi = outcomes[static_cast<std::size_t>(i)];
            if (!oi.event) continue;
            const double ri = risks[static_cast<std::size_t>(i)];
            for (std::ptrdiff_t j = 0; j < n; ++j) {
                const auto& oj = outcomes[static_cast<std::size_t>(j)];
                if (!(oi.time < oj.time)) continue;
                ++comparable;
                const double rj = risks[static_cast<std::size_t>(j)];
                if (ri > rj) {
                    doubled += 2;
                } else if (ri == rj) {
                    doubled += 1;
                }
            }
        }
        return {doubled, comparable};
    }

    namespace serial {
        ConcordanceCounts concordance_counts(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes) {
            check_lengths(risks, outcomes);
            ConcordanceCounts c;
            for (std::size_t i = 0; i < outcomes.size(); ++i) {
                if (!outcomes[i].event) continue;
                for (std::size_t j = 0; j < outcomes.size(); ++j) {
                    if (!(outcomes[i].time < outcomes[j].time)) continue;
                    ++c.comparable;
                    if (risks[i] > risks[j]) {
                        c.doubled_concordant += 2;
                    } else if (risks[i] == risks[j]) {
                        c.doubled_concordant += 1;
                    }
                }
            }
            return c;
        }
    }

    double c_index(std::span<const double> risks, std::span<const SurvivalOutcome> outcomes) {
        return concordance_counts(risks, outcomes).value();
    }

    std::vector<AucPoint> cumulative_dynamic_auc(std::span<const SurvivalOutcome> train,
                                                 std::span<const SurvivalOutcome> test,
                                                 std::span<const double> test_risks,
                                                 std::span<const double> eval_times) {
        check_lengths(test_risks, test);
        if (test.empty()) throw DataError("cumulative_dynamic_auc: empty test set");
        const StepFunction censoring = censoring_kaplan_meier(train);

        double last_time = 0.0;
        for (const auto& o : test) last_time = std::max(last_time, o.time);

        std::vector<AucPoint> out;
        for (double t : eval_times) {
            if (t > last_time) {
                diag::warn(fmt::format("AUC at t={} omitted: beyond last observed time {}", t, last_time));
                continue;
            }
            std::vector<double> controls;
            std::vector<std::pair<double, double>> cases;  // risk, weight
            bool bad_weight = false;
            for (std::size_t i = 0; i < test.size(); ++i) {
                if (test[i].time > t) {
                    controls.push_back(test_risks[i]);
                } else if (test[i].event) {
                    const double g = censoring.left_limit(test[i].time);
                    if (!(g > 0.0)) {
                        bad_weight = true;
                        break;
                    }
                    cases.emplace_back(test_risks[i], 1.0 / g);
                }
            }
            if (bad_weight) {
                diag::warn(fmt::format("AUC at t={} omitted: censoring survival reaches zero", t));
                continue;
            }
            if (cases.empty() || controls.empty()) {
                diag::warn(fmt::format("AUC at t={} omitted: {} cases, {} controls", t, cases.size(), controls.size()));
                continue;
            }
            std::sort(controls.begin(), controls.end());
            double num = 0.0;
            double den = 0.0;
            for (const auto& [r, w] : cases) {
                const auto lo = std::lower_bound(controls.begin(), controls.end(), r);
                const auto hi = std::upper_bound(lo, controls.end(), r);
                const double below = static_cast<double>(lo - controls.begin());
                const double ties = static_cast<double>(hi - lo);
                num += w * (below + 0.5 * ties);
                den += w * static_cast<double>(controls.size());
            }
            out.push_back({t, num / den});
        }
        return out;
    }

}  // namespace sigsurv
