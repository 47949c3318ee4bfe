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

#include "sigsurv/diagnostics.hpp"
#include "sigsurv/error.hpp"
#include "sigsurv/io.hpp"
#include "sigsurv/notes.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace sigsurv;

namespace {

    const std::filesystem::path kFixtures = SIGSURV_FIXTURE_DIR;

    std::vector<Note> fixture_notes() {
        std::ifstream in(kFixtures / "records.jsonl");
        return read_notes_jsonl(in).notes;
    }

    Lexicon fixture_lexicon() { return Lexicon::from_csv(kFixtures / "lexicon.csv"); }

    Note note(const char* date, const char* text) { return {"p", Date::parse(date), text}; }

    std::size_t count_kind(const std::vector<ExtractedEvent>& ev, EventKind k) {
        return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](const auto& e) { return e.kind == k; }));
    }

}  // namespace

TEST(DamerauLevenshtein, Basics) {
    EXPECT_EQ(damerau_levenshtein("donepezil", "donepezil"), 0u);
    EXPECT_EQ(damerau_levenshtein("donepezil", "donepzeil"), 1u);
    EXPECT_EQ(damerau_levenshtein("donepezil", "donepezl"), 1u);
    EXPECT_EQ(damerau_levenshtein("abc", "ca"), 3u);
    EXPECT_EQ(damerau_levenshtein("", "abc"), 3u);
}

TEST(Lexicon, FuzzyOnlyForLongForms) {
    auto lex = fixture_lexicon();
    EXPECT_EQ(lex.lookup("Aricept"), "donepezil");
    EXPECT_EQ(lex.lookup("RIVASTIGMINE"), "rivastigmine");
    EXPECT_EQ(lex.lookup("rivastigmin"), "rivastigmine");
    EXPECT_EQ(lex.lookup("ebixa"), "memantine");
    EXPECT_FALSE(lex.lookup("ebxia").has_value());
    EXPECT_FALSE(lex.lookup("aspirin").has_value());
    const auto names = lex.normalised_names();
    EXPECT_EQ(names, (std::vector<std::string>{"donepezil", "galantamine", "memantine", "rivastigmine"}));
}

TEST(Lexicon, BadCsvThrows) { EXPECT_THROW(Lexicon::from_csv_text("surface,normalised\nonlyone\n"), ParseError); }

TEST(ExtractMmse, ScoreAndInTextDate) {
    auto ev = extract_mmse(note("2016-10-05", "Today I saw a patient diagnosed with Alzheimer's, who deteriorated: MMSE 23/30 "
                                              "as compared to 25/30 from 1st January. Started on Rivastigmine."));
    std::sort(ev.begin(), ev.end(), event_less);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].date, Date(2016, 1, 1));
    EXPECT_EQ(ev[0].score(), 25);
    EXPECT_EQ(ev[1].date, Date(2016, 10, 5));
    EXPECT_EQ(ev[1].score(), 23);
}

TEST(ExtractMmse, BareScore) {
    auto ev = extract_mmse(note("2017-02-12", "Today MMSE 19, the patient didn't respond to Rivastigmine."));
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].date, Date(2017, 2, 12));
    EXPECT_EQ(ev[0].score(), 19);
}

TEST(ExtractMmse, OutOfRangeDiscarded) {
    EXPECT_TRUE(extract_mmse(note("2020-01-01", "MMSE 45/30")).empty());
    EXPECT_TRUE(extract_mmse(note("2020-01-01", "MMSE 31")).empty());
    EXPECT_TRUE(extract_mmse(note("2020-01-01", "scored 20/30 on a quiz")).empty());
}

TEST(ExtractMedications, StartStopContexts) {
    const auto lex = fixture_lexicon();
    auto ev = extract_medications(note("2016-10-05", "Started on Rivastigmine."), lex);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].kind, EventKind::medication_start);
    EXPECT_EQ(ev[0].name(), "rivastigmine");
    EXPECT_FALSE(ev[0].negated);

    ev = extract_medications(
        note("2017-02-12", "the patient didn't respond to Rivastigmine and was changed to Donepezil"), lex);
    std::sort(ev.begin(), ev.end(), event_less);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].kind, EventKind::medication_start);
    EXPECT_EQ(ev[0].name(), "donepezil");
    EXPECT_EQ(ev[1].kind, EventKind::medication_stop);
    EXPECT_EQ(ev[1].name(), "rivastigmine");
    EXPECT_TRUE(ev[1].negated);

    ev = extract_medications(note("2019-04-01", "stop Donepezil"), lex);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].kind, EventKind::medication_stop);
    EXPECT_EQ(ev[0].date, Date(2019, 4, 1));
}

TEST(ExtractMedications, BrandTypoAndFamily) {
    const auto lex = fixture_lexicon();
    auto ev = extract_medications(note("2020-01-01", "Continue on Aricept."), lex);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].name(), "donepezil");
    ev = extract_medications(note("2020-01-01", "Started on galantamin."), lex);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].name(), "galantamine");
    ev = extract_medications(note("2020-01-01", "His wife takes Memantine."), lex);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].experiencer, Experiencer::other);
    auto tl = build_timeline({note("2020-01-01", "His wife takes Memantine.")}, lex);
    EXPECT_TRUE(tl.empty());
}

TEST(ExtractDiagnoses, Alzheimers) {
    auto ev = extract_diagnoses(note("2016-10-05", "a patient diagnosed with Alzheimer's"));
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].kind, EventKind::diagnosis);
    EXPECT_EQ(ev[0].name(), "alzheimers_disease");
}

TEST(BuildTimeline, GoldenEvents) {
    const auto tl = build_timeline(fixture_notes(), fixture_lexicon());
    std::ifstream in(kFixtures / "extracted_events.jsonl");
    const auto golden = read_events_jsonl(in);
    ASSERT_EQ(golden.size(), 1u);
    EXPECT_EQ(tl.patient_id, "synthetic-1");
    EXPECT_EQ(tl.events, golden[0].events);
}

TEST(BuildTimeline, GoldenRows) {
    const auto tl = build_timeline(fixture_notes(), fixture_lexicon());
    std::ostringstream out;
    write_rows_jsonl(out, {tl});
    EXPECT_EQ(out.str(), read_text_file(kFixtures / "extracted_table.jsonl"));

    const auto rows = tl.rows();
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[1].date, Date(2016, 10, 5));
    EXPECT_EQ(rows[1].medication, "rivastigmine");
    EXPECT_EQ(rows[1].mmse, 23);
    EXPECT_EQ(count_kind(tl.events, EventKind::medication_stop), 2u);
}

TEST(BuildTimeline, DuplicateNotesDeduplicated) {
    auto notes = fixture_notes();
    const auto once = build_timeline(notes, fixture_lexicon());
    auto doubled = notes;
    doubled.insert(doubled.end(), notes.begin(), notes.end());
    EXPECT_EQ(build_timeline(doubled, fixture_lexicon()).events, once.events);
}

TEST(BuildTimeline, EmptyExtractionWarns) {
    diag::ScopedCapture cap;
    auto tl = build_timeline({note("2020-01-01", "Patient attended clinic. No concerns.")}, fixture_lexicon());
    EXPECT_TRUE(tl.empty());
    EXPECT_FALSE(cap.messages().empty());
}

TEST(BuildTimeline, MixedPatientsRejected) {
    std::vector<Note> notes{note("2020-01-01", "MMSE 20"), {"q", Date(2020, 1, 2), "MMSE 21"}};
    EXPECT_THROW(build_timeline(notes, fixture_lexicon()), DataError);
}

TEST(BuildTimeline, DeterministicAndOrderFree) {
    auto notes = fixture_notes();
    const auto a = build_timeline(notes, fixture_lexicon());
    std::reverse(notes.begin(), notes.end());
    const auto b = build_timeline(notes, fixture_lexicon());
    EXPECT_EQ(a.events, b.events);
    for (std::size_t i = 1; i < a.events.size(); ++i) EXPECT_LE(a.events[i - 1].date, a.events[i].date);
}

TEST(BuildTimelines, GroupsByPatient) {
    auto notes = fixture_notes();
    notes.push_back({"another", Date(2020, 5, 1), "MMSE 27/30, started on Aricept."});
    const auto tls = build_timelines(notes, fixture_lexicon());
    ASSERT_EQ(tls.size(), 2u);
    EXPECT_EQ(tls[0].patient_id, "another");
    EXPECT_EQ(tls[0].events.size(), 2u);
    EXPECT_EQ(tls[1].patient_id, "synthetic-1");
}

TEST(NotesJsonl, SkipBad) {
    std::istringstream in(R"({"patient_id":"a","date":"2020-01-01","text":"MMSE 20"}
not json
{"patient_id":"a","date":"2020-13-01","text":"x"}
)");
    EXPECT_THROW(read_notes_jsonl(in), ParseError);
    in.clear();
    in.seekg(0);
    const auto got = read_notes_jsonl(in, true);
    EXPECT_EQ(got.notes.size(), 1u);
    EXPECT_EQ(got.skipped.size(), 2u);
}

TEST(ExtractMmse, DatePhraseAfterNoteMeansPreviousYear) {
    auto ev = extract_mmse(note("2017-02-12", "MMSE 21/30 today, was 24/30 from 3rd December."));
    std::sort(ev.begin(), ev.end(), event_less);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].date, Date(2016, 12, 3));
    EXPECT_EQ(ev[0].score(), 24);
    ev = extract_mmse(note("2017-02-12", "MMSE 24/30 on 3 December 2015"));
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].date, Date(2015, 12, 3));
}
