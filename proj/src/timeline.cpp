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

#include "sigsurv/timeline.hpp"

#include "sigsurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace sigsurv {

    SurvivalOutcome SurvivalOutcome::make(bool event, double time) {
        if (!std::isfinite(time) || time <= 0.0) {
            throw DomainError("survival time must be finite and > 0, got " + std::to_string(time));
        }
        return SurvivalOutcome{event, time};
    }

    std::string_view to_string(EventKind kind) {
        switch (kind) {
            case EventKind::mmse: return "MMSE";
            case EventKind::medication_start: return "MedicationStart";
            case EventKind::medication_stop: return "MedicationStop";
            case EventKind::diagnosis: return "Diagnosis";
        }
        throw InvariantError("unknown event kind");
    }

    std::string_view to_string(Experiencer e) { return e == Experiencer::patient ? "patient" : "other"; }

    EventKind parse_event_kind(std::string_view s) {
        if (s == "MMSE") return EventKind::mmse;
        if (s == "MedicationStart") return EventKind::medication_start;
        if (s == "MedicationStop") return EventKind::medication_stop;
        if (s == "Diagnosis") return EventKind::diagnosis;
        throw ParseError("unknown event kind '" + std::string(s) + "'");
    }

    Experiencer parse_experiencer(std::string_view s) {
        if (s == "patient") return Experiencer::patient;
        if (s == "other") return Experiencer::other;
        throw ParseError("unknown experiencer '" + std::string(s) + "'");
    }

    std::string ExtractedEvent::value_string() const {
        return kind == EventKind::mmse ? std::to_string(score()) : name();
    }

    bool event_less(const ExtractedEvent& a, const ExtractedEvent& b) {
        return std::tuple(a.date.days(), static_cast<int>(a.kind), a.value, static_cast<int>(a.experiencer), a.negated) <
               std::tuple(b.date.days(), static_cast<int>(b.kind), b.value, static_cast<int>(b.experiencer), b.negated);
    }

    Date PatientTimeline::index_date() const {
        if (events.empty()) throw DataError("timeline for '" + patient_id + "' has no events");
        Date first = events.front().date;
        for (const auto& e : events) first = std::min(first, e.date);
        return first;
    }

    void PatientTimeline::normalise() {
        std::erase_if(events, [](const ExtractedEvent& e) { return e.experiencer == Experiencer::other; });
        std::sort(events.begin(), events.end(), event_less);
        auto same = [](const ExtractedEvent& a, const ExtractedEvent& b) {
            return a.date == b.date && a.kind == b.kind && a.value == b.value;
        };
        events.erase(std::unique(events.begin(), events.end(), same), events.end());
    }

    std::vector<TimelineRow> PatientTimeline::rows() const {
        std::vector<TimelineRow> out;
        std::vector<std::pair<std::string, long>> active;  // drug, start order
        std::set<std::string> ever;
        long order = 0;

        std::size_t i = 0;
        while (i < events.size()) {
            const Date date = events[i].date;
            std::size_t j = i;
            while (j < events.size() && events[j].date == date) ++j;

            std::optional<int> mmse;
            bool relevant = false;
            std::vector<std::string> stops;
            for (std::size_t k = i; k < j; ++k) {
                const auto& e = events[k];
                if (e.experiencer == Experiencer::other) continue;
                switch (e.kind) {
                    case EventKind::mmse:
                        mmse = e.score();
                        relevant = true;
                        break;
                    case EventKind::medication_start: {
                        relevant = true;
                        std::erase_if(active, [&](const auto& a) { return a.first == e.name(); });
                        active.emplace_back(e.name(), order++);
                        ever.insert(e.name());
                        break;
                    }
                    case EventKind::medication_stop:
                        relevant = true;
                        stops.push_back(e.name());
                        break;
                    case EventKind::diagnosis: break;
                }
            }
            for (const auto& s : stops) {
                std::erase_if(active, [&](const auto& a) { return a.first == s; });
            }
            if (relevant) {
                TimelineRow row;
                row.date = date;
                row.mmse = mmse;
                row.cumulative_drugs = static_cast<int>(ever.size());
                if (!active.empty()) {
                    row.medication = std::max_element(active.begin(), active.end(), [](const auto& a, const auto& b) {
                                         return a.second < b.second;
                                     })->first;
                } else {
                    row.medication = ever.empty() ? std::string(kNoMed) : std::string(kDiscontinued);
                }
                out.push_back(std::move(row));
            }
            i = j;
        }
        return out;
    }

}  // namespace sigsurv
