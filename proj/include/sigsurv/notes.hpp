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
// Rule-based extraction of dated MMSE scores, medication starts/stops and diagnoses from
// free-text clinical notes.
//
// Medications are matched against a lexicon of generic and brand names (exact match for
// short forms, Damerau-Levenshtein distance <= 1 for forms of 6+ characters). Context is
// decided by the nearest trigger phrase within a 6-token window in the same sentence:
// stop triggers ("stop", "discontinued", "didn't respond to", ...) give MedicationStop,
// start/continue triggers or a bare mention give MedicationStart. Mentions governed by a
// family-member token in the window are attributed to someone other than the patient.

#ifndef SIGSURV_NOTES_HPP
#define SIGSURV_NOTES_HPP

#include "sigsurv/timeline.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sigsurv {

    struct Note {
        std::string patient_id;
        Date doc_date;
        std::string text;
    };

    class Lexicon {
    public:
        Lexicon() = default;
        // Surface forms are matched case-insensitively; normalised names are stored lowercase.
        void add(const std::string& surface, const std::string& normalised);

        static Lexicon from_csv(const std::filesystem::path& path);
        static Lexicon from_csv_text(const std::string& text);
        // Cholinesterase inhibitors and memantine, generic and UK brand names.
        static Lexicon dementia_drugs();

        bool empty() const noexcept { return entries_.empty(); }
        std::size_t size() const noexcept { return entries_.size(); }
        const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

        // Normalised name for a single token or phrase, applying the fuzzy rule.
        std::optional<std::string> lookup(const std::string& surface) const;

        // Sorted distinct normalised names.
        std::vector<std::string> normalised_names() const;

    private:
        std::map<std::string, std::string> entries_;
    };

    // Optimal string alignment distance (adjacent transpositions count as one edit).
    std::size_t damerau_levenshtein(std::string_view a, std::string_view b);

    std::vector<ExtractedEvent> extract_mmse(const Note& note);
    std::vector<ExtractedEvent> extract_medications(const Note& note, const Lexicon& lex);
    std::vector<ExtractedEvent> extract_diagnoses(const Note& note);
    // All of the above, canonical order.
    std::vector<ExtractedEvent> extract_events(const Note& note, const Lexicon& lex);

    // Notes must belong to one patient. An empty result is valid and reported via diag::warn.
    PatientTimeline build_timeline(const std::vector<Note>& notes, const Lexicon& lex);

    // Groups notes by patient_id (sorted by id) and builds each timeline; notes are processed
    // in parallel.
    std::vector<PatientTimeline> build_timelines(const std::vector<Note>& notes, const Lexicon& lex);

}  // namespace sigsurv

#endif  // SIGSURV_NOTES_HPP
