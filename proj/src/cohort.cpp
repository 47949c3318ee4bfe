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

#include "sigsurv/cohort.hpp"

#include "sigsurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <random>
#include <set>

namespace sigsurv {

    namespace {
        constexpr double kWeibullShape = 2.0;
        constexpr double kWeibullScale = 60.0;
        constexpr double kEarlySwitchMonths = 12.0;

        struct Latent {
            double end_mmse = 0.0;
            double late_slope = 0.0;
            double slope = 0.0;
            bool early_switch = false;
        };

        std::vector<double> standardise(const std::vector<double>& v) {
            const double n = static_cast<double>(v.size());
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            std::vector<double> out(v.size(), 0.0);
            if (sd > 0.0) {
                for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
            }
            return out;
        }

        std::vector<double> gamma_times(std::mt19937_64& rng, int n, double mean, double sd) {
            std::gamma_distribution<double> g((mean / sd) * (mean / sd), sd * sd / mean);
            std::vector<double> out(static_cast<std::size_t>(n));
            for (auto& t : out) t = std::max(0.01, std::round(g(rng) * 100.0) / 100.0);
            return out;
        }

        bool is_second_line_only(const std::string& drug) { return drug == "memantine"; }
    }

    void CohortSpec::validate() const {
        if (n_died < 0) throw ConfigError("cohort.n_died: must be >= 0");
        if (n_censored < 0) throw ConfigError("cohort.n_censored: must be >= 0");
        if (n_died + n_censored == 0) throw ConfigError("cohort.n_died: cohort must contain at least one patient");
        if (!(died_mean > 0.0)) throw ConfigError("cohort.died_mean: must be > 0 (negative implied times)");
        if (!(censored_mean > 0.0)) throw ConfigError("cohort.censored_mean: must be > 0 (negative implied times)");
        if (!(died_std > 0.0)) throw ConfigError("cohort.died_std: must be > 0");
        if (!(censored_std > 0.0)) throw ConfigError("cohort.censored_std: must be > 0");
        if (!(window_months > 0.0)) throw ConfigError("cohort.window_months: must be > 0");
        if (min_visits < 1) throw ConfigError("cohort.min_visits: must be >= 1");
        if (max_visits < min_visits) throw ConfigError("cohort.max_visits: must be >= min_visits");
        if (drugs.size() < 2) throw ConfigError("cohort.drugs: needs at least two drugs");
        if (mmse_noise_sd < 0.0) throw ConfigError("cohort.mmse_noise_sd: must be >= 0");
        if (mmse_start_sd < 0.0) throw ConfigError("cohort.mmse_start_sd: must be >= 0");
        if (slope_early_sd < 0.0) throw ConfigError("cohort.slope_early_sd: must be >= 0");
        if (slope_late_sd < 0.0) throw ConfigError("cohort.slope_late_sd: must be >= 0");
    }

    std::vector<SurvivalOutcome> outcomes_of(const Cohort& cohort) {
        std::vector<SurvivalOutcome> out;
        out.reserve(cohort.patients.size());
        for (const auto& p : cohort.patients) {
            if (!p.outcome) throw DataError("patient '" + p.patient_id + "' has no outcome");
            out.push_back(*p.outcome);
        }
        return out;
    }

    Cohort generate_cohort(const CohortSpec& spec) {
        spec.validate();
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        std::vector<std::string> first_line;
        for (const auto& d : spec.drugs) {
            if (!is_second_line_only(d)) first_line.push_back(d);
        }
        if (first_line.empty()) first_line = spec.drugs;

        const std::size_t n = static_cast<std::size_t>(spec.n_died + spec.n_censored);
        const long window_days = std::lround(spec.window_months * kDaysPerMonth);
        const Date epoch(2012, 1, 1);

        Cohort cohort;
        cohort.patients.resize(n);
        std::vector<Latent> latent(n);

        for (std::size_t i = 0; i < n; ++i) {
            auto& p = cohort.patients[i];
            p.patient_id = fmt::format("P{:05d}", i + 1);
            const Date index = Date::from_days(epoch.days() + static_cast<long>(unif(rng) * 1461.0));

            const int nv = spec.min_visits + static_cast<int>(unif(rng) * (spec.max_visits - spec.min_visits + 1));
            std::set<long> offsets{0};
            while (static_cast<int>(offsets.size()) < std::min<long>(nv, window_days + 1)) {
                offsets.insert(1 + static_cast<long>(unif(rng) * static_cast<double>(window_days)));
            }
            std::vector<long> visit_days(offsets.begin(), offsets.end());

            const double m0 = std::clamp(spec.mmse_start_mean + spec.mmse_start_sd * normal(rng), 10.0, 30.0);
            const double s_early = spec.slope_early_mean + spec.slope_early_sd * normal(rng);
            const double s_late =
                spec.change_point ? spec.slope_late_mean + spec.slope_late_sd * normal(rng) : s_early;
            const double tau = spec.window_months * (0.25 + 0.5 * unif(rng));
            auto truth = [&](double t) {
                return m0 + s_early * std::min(t, tau) + s_late * std::max(0.0, t - tau);
            };

            for (long d : visit_days) {
                const double t = static_cast<double>(d) / kDaysPerMonth;
                const double obs = std::clamp(std::round(truth(t) + spec.mmse_noise_sd * normal(rng)), 0.0, 30.0);
                p.events.push_back({Date::from_days(index.days() + d), EventKind::mmse, static_cast<int>(obs),
                                    Experiencer::patient, false});
            }

            // Medication history
            const std::size_t nvis = visit_days.size();
            const bool treated = unif(rng) < 0.9 && nvis >= 2;
            bool early_switch = false;
            if (treated) {
                const std::size_t start = 1 + static_cast<std::size_t>(unif(rng) * std::min<double>(2.0, nvis - 1.0));
                const std::string first = first_line[static_cast<std::size_t>(unif(rng) * first_line.size())];
                auto at = [&](std::size_t v) { return Date::from_days(index.days() + visit_days[v]); };
                p.events.push_back({at(start), EventKind::medication_start, first, Experiencer::patient, false});
                std::string current = first;
                std::size_t last_change = start;
                if (unif(rng) < 0.75 && start + 1 < nvis) {
                    const std::size_t sw = start + 1 + static_cast<std::size_t>(unif(rng) * (nvis - start - 1));
                    std::string second;
                    if (unif(rng) < 0.85) {
                        second = "memantine";
                    } else {
                        do {
                            second = first_line[static_cast<std::size_t>(unif(rng) * first_line.size())];
                        } while (second == first && first_line.size() > 1);
                    }
                    if (std::find(spec.drugs.begin(), spec.drugs.end(), second) == spec.drugs.end()) {
                        second = spec.drugs.back() == first ? spec.drugs.front() : spec.drugs.back();
                    }
                    p.events.push_back({at(sw), EventKind::medication_stop, current, Experiencer::patient, true});
                    p.events.push_back({at(sw), EventKind::medication_start, second, Experiencer::patient, false});
                    current = second;
                    last_change = sw;
                    early_switch = is_second_line_only(second) &&
                                   static_cast<double>(visit_days[sw]) / kDaysPerMonth < kEarlySwitchMonths;
                }
                if (unif(rng) < 0.25 && last_change + 1 < nvis) {
                    p.events.push_back({at(nvis - 1), EventKind::medication_stop, current, Experiencer::patient, true});
                }
            }
            p.normalise();

            const double end = truth(spec.window_months);
            latent[i] = {end, s_late, (end - m0) / spec.window_months, early_switch};
        }

        // Latent death times from the proportional-hazards model.
        std::vector<double> z_end, z_late, z_slope;
        for (const auto& l : latent) {
            z_end.push_back(l.end_mmse);
            z_late.push_back(l.late_slope);
            z_slope.push_back(l.slope);
        }
        z_end = standardise(z_end);
        z_late = standardise(z_late);
        z_slope = standardise(z_slope);

        std::exponential_distribution<double> unit_exp(1.0);
        const double onset_cum = std::pow(spec.med_effect_onset / kWeibullScale, kWeibullShape);
        std::vector<double> death(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r0 = -spec.effect_end_mmse * z_end[i] - spec.effect_late_slope * z_late[i] -
                              spec.effect_slope * z_slope[i];
            const double r1 = latent[i].early_switch ? spec.effect_early_switch : 0.0;
            const double e = unit_exp(rng);
            double cum;  // baseline cumulative hazard at the death time
            if (e <= onset_cum * std::exp(r0)) {
                cum = e * std::exp(-r0);
            } else {
                cum = onset_cum + (e - onset_cum * std::exp(r0)) * std::exp(-(r0 + r1));
            }
            death[i] = kWeibullScale * std::pow(cum, 1.0 / kWeibullShape);
        }

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> died(order.begin(), order.begin() + spec.n_died);
        std::vector<std::size_t> censored(order.begin() + spec.n_died, order.end());

        auto died_times = gamma_times(rng, spec.n_died, spec.died_mean, spec.died_std);
        auto cens_times = gamma_times(rng, spec.n_censored, spec.censored_mean, spec.censored_std);
        std::sort(died_times.begin(), died_times.end());
        std::sort(died.begin(), died.end(), [&](std::size_t a, std::size_t b) {
            return death[a] < death[b] || (death[a] == death[b] && a < b);
        });
        for (std::size_t k = 0; k < died.size(); ++k) cohort.patients[died[k]].outcome = SurvivalOutcome{true, died_times[k]};
        for (std::size_t k = 0; k < censored.size(); ++k) {
            cohort.patients[censored[k]].outcome = SurvivalOutcome{false, cens_times[k]};
        }
        return cohort;
    }

    Cohort scramble_event_order(const Cohort& cohort, std::uint64_t seed) {
        Cohort out = cohort;
        std::mt19937_64 rng(seed);
        for (auto& p : out.patients) {
            std::vector<std::size_t> mmse_idx;
            std::vector<int> scores;
            std::vector<std::pair<Date, std::string>> starts;
            std::vector<Date> stops;
            std::vector<ExtractedEvent> others;
            for (std::size_t i = 0; i < p.events.size(); ++i) {
                const auto& e = p.events[i];
                switch (e.kind) {
                    case EventKind::mmse:
                        mmse_idx.push_back(i);
                        scores.push_back(e.score());
                        break;
                    case EventKind::medication_start: starts.emplace_back(e.date, e.name()); break;
                    case EventKind::medication_stop: stops.push_back(e.date); break;
                    case EventKind::diagnosis: others.push_back(e); break;
                }
            }
            std::shuffle(scores.begin(), scores.end(), rng);
            std::vector<std::string> drugs;
            for (const auto& s : starts) drugs.push_back(s.second);
            std::shuffle(drugs.begin(), drugs.end(), rng);

            std::vector<ExtractedEvent> events = others;
            for (std::size_t k = 0; k < mmse_idx.size(); ++k) {
                auto e = p.events[mmse_idx[k]];
                e.value = scores[k];
                events.push_back(e);
            }
            for (std::size_t k = 0; k < starts.size(); ++k) {
                events.push_back({starts[k].first, EventKind::medication_start, drugs[k], Experiencer::patient, false});
            }
            // A stop ends whichever drug was started most recently before (or on) its date.
            for (const Date& d : stops) {
                std::string active;
                for (std::size_t k = 0; k < starts.size(); ++k) {
                    if (starts[k].first < d) active = drugs[k];
                }
                if (!active.empty()) {
                    events.push_back({d, EventKind::medication_stop, active, Experiencer::patient, true});
                }
            }
            p.events = std::move(events);
            p.normalise();
        }
        return out;
    }

}  // namespace sigsurv
