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

// File formats: path CSV, notes and event JSON-lines, cohort JSON-lines, feature CSV and
// run manifests.

#ifndef SIGSURV_IO_HPP
#define SIGSURV_IO_HPP

#include "sigsurv/forest.hpp"
#include "sigsurv/notes.hpp"
#include "sigsurv/signature.hpp"
#include "sigsurv/timeline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sigsurv {

    // One point per row, every row with the same number of numeric columns. A non-numeric
    // first row is taken as a header. Throws ParseError with the 1-based line number.
    PiecewisePath read_path_csv(std::istream& in);
    PiecewisePath load_path_csv(const std::filesystem::path& path);

    struct NotesInput {
        std::vector<Note> notes;
        // "line N: reason" for every skipped line
        std::vector<std::string> skipped;
    };
    // {"patient_id": ..., "date": "YYYY-MM-DD", "text": ...} per line. Blank lines are ignored.
    // A bad line throws ParseError unless skip_bad is set.
    NotesInput read_notes_jsonl(std::istream& in, bool skip_bad = false);

    // {"patient_id","date","kind","value","negated","experiencer"} per event.
    void write_events_jsonl(std::ostream& out, const std::vector<PatientTimeline>& timelines);
    // Groups event lines by patient (sorted by id).
    std::vector<PatientTimeline> read_events_jsonl(std::istream& in);

    // {"patient_id","date","medication","mmse","cumulative_drugs"} per structured row.
    void write_rows_jsonl(std::ostream& out, const std::vector<PatientTimeline>& timelines);

    // One patient per line: {"patient_id", "outcome": {"event", "months"}, "events": [...]}.
    void write_cohort_jsonl(std::ostream& out, const std::vector<PatientTimeline>& cohort);
    std::vector<PatientTimeline> read_cohort_jsonl(std::istream& in);

    struct FeatureTable {
        std::string schema_id;
        std::vector<std::string> feature_names;
        std::vector<std::string> patient_ids;
        std::vector<SurvivalOutcome> outcomes;
        FeatureMatrix x;
    };
    // "# schema_id=<id>" then header patient_id,event,months,<features>. Values are written
    // with 17 significant digits so a round trip is exact.
    void write_feature_csv(std::ostream& out, const FeatureTable& table);
    FeatureTable read_feature_csv(std::istream& in);

    std::string sha256_hex(std::string_view data);
    std::string sha256_file(const std::filesystem::path& path);

    struct RunManifest {
        std::string command;
        std::string config_hash;  // sha256 of the canonical config text
        std::map<std::string, std::uint64_t> seeds;
        std::vector<std::filesystem::path> inputs;
        std::vector<std::filesystem::path> outputs;
        std::string started;   // UTC, ISO-8601
        std::string finished;

        // Hashes every listed file at the time of the call.
        std::string to_json_text() const;
        void write(const std::filesystem::path& path) const;
    };

    std::string utc_timestamp();

    // Whole file as a string. Throws DataError naming the path.
    std::string read_text_file(const std::filesystem::path& path);
    // Throws DataError naming the path.
    void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace sigsurv

#endif  // SIGSURV_IO_HPP
