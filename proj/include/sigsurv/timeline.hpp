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
// Per-patient event records: what the extractor emits and what the featurisers consume.

#ifndef SIGSURV_TIMELINE_HPP
#define SIGSURV_TIMELINE_HPP

#include "sigsurv/date.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sigsurv {

    // Right-censored outcome. `time` is in months since the index date.
    struct SurvivalOutcome {
        bool event = false;
        double time = 0.0;

        // Throws DomainError unless time is finite and > 0.
        static SurvivalOutcome make(bool event, double time);

        friend bool operator==(const SurvivalOutcome&, const SurvivalOutcome&) = default;
    };

    enum class EventKind { mmse, medication_start, medication_stop, diagnosis };
    enum class Experiencer { patient, other };

    std::string_view to_string(EventKind kind);
    std::string_view to_string(Experiencer e);
    EventKind parse_event_kind(std::string_view s);
    Experiencer parse_experiencer(std::string_view s);

    struct ExtractedEvent {
        Date date;
        EventKind kind = EventKind::mmse;
        // MMSE score for EventKind::mmse, normalised name/label otherwise.
        std::variant<int, std::string> value;
        Experiencer experiencer = Experiencer::patient;
        bool negated = false;

        int score() const { return std::get<int>(value); }
        const std::string& name() const { return std::get<std::string>(value); }
        std::string value_string() const;

        friend bool operator==(const ExtractedEvent&, const ExtractedEvent&) = default;
    };

    // Canonical (date, kind, value, experiencer, negated) order.
    bool event_less(const ExtractedEvent& a, const ExtractedEvent& b);

    inline constexpr std::string_view kNoMed = "NoMed";
    inline constexpr std::string_view kDiscontinued = "Discontinued";

    // One row of the chronologically structured view: date, medication state, MMSE.
    struct TimelineRow {
        Date date;
        std::string medication;  // normalised drug name, kNoMed or kDiscontinued
        std::optional<int> mmse;
        // Distinct drugs ever started up to and including this date.
        int cumulative_drugs = 0;

        friend bool operator==(const TimelineRow&, const TimelineRow&) = default;
    };

    struct PatientTimeline {
        std::string patient_id;
        std::vector<ExtractedEvent> events;  // sorted by event_less
        std::optional<SurvivalOutcome> outcome;

        bool empty() const noexcept { return events.empty(); }
        // Earliest event date. Throws DataError on an empty timeline.
        Date index_date() const;

        // Sorts, drops experiencer=other events and (date, kind, value) duplicates.
        void normalise();

        /* One row per date carrying an MMSE or medication event. The medication state applies
         * the date's starts before its stops, so a drug stopped on a date is never active on it.
         * With several drugs active, the most recently started one is reported. */
        std::vector<TimelineRow> rows() const;
    };

}  // namespace sigsurv

#endif  // SIGSURV_TIMELINE_HPP
