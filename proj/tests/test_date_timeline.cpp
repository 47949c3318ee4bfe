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

#include "sigsurv/date.hpp"
#include "sigsurv/error.hpp"
#include "sigsurv/timeline.hpp"

#include <gtest/gtest.h>

using namespace sigsurv;

namespace {

    ExtractedEvent mmse(const char* d, int v) { return {Date::parse(d), EventKind::mmse, v, Experiencer::patient, false}; }
    ExtractedEvent start(const char* d, const char* drug) {
        return {Date::parse(d), EventKind::medication_start, std::string(drug), Experiencer::patient, false};
    }
    ExtractedEvent stop(const char* d, const char* drug) {
        return {Date::parse(d), EventKind::medication_stop, std::string(drug), Experiencer::patient, true};
    }

}  // namespace

TEST(Date, ParsesIsoAndRecordStyles) {
    EXPECT_EQ(Date::parse("2016-10-05"), Date(2016, 10, 5));
    EXPECT_EQ(Date::parse("05-Oct-2016"), Date(2016, 10, 5));
    EXPECT_EQ(Date::parse("5 October 2016"), Date(2016, 10, 5));
    EXPECT_EQ(Date::parse("01-Apr-2019").iso(), "2019-04-01");
}

TEST(Date, RejectsInvalid) {
    EXPECT_THROW(Date::parse("2019-02-30"), ParseError);
    EXPECT_THROW(Date::parse("yesterday"), ParseError);
    EXPECT_FALSE(Date::try_parse("31-Jun-2020").has_value());
}

TEST(Date, DayCountsAndMonths) {
    EXPECT_EQ(Date(1970, 1, 1).days(), 0);
    EXPECT_EQ(Date::from_days(Date(2016, 10, 5).days()), Date(2016, 10, 5));
    EXPECT_EQ(days_between(Date(2016, 1, 1), Date(2016, 10, 5)), 278);
    EXPECT_DOUBLE_EQ(months_between(Date(2016, 1, 1), Date(2016, 10, 5)), 278 / 30.4375);
    EXPECT_EQ(month_from_name("Sept"), 9u);
    EXPECT_EQ(month_from_name("january"), 1u);
    EXPECT_FALSE(month_from_name("jan2").has_value());
}

TEST(SurvivalOutcome, Validation) {
    EXPECT_NO_THROW(SurvivalOutcome::make(true, 34.17));
    EXPECT_THROW(SurvivalOutcome::make(true, 0.0), DomainError);
    EXPECT_THROW(SurvivalOutcome::make(false, -1.0), DomainError);
}

TEST(EventKind, RoundTripNames) {
    for (auto k : {EventKind::mmse, EventKind::medication_start, EventKind::medication_stop, EventKind::diagnosis}) {
        EXPECT_EQ(parse_event_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_event_kind("Lab"), ParseError);
}

TEST(Timeline, RowsFollowTheStatedRule) {
    PatientTimeline tl;
    tl.events = {mmse("2016-01-01", 25), mmse("2016-10-05", 23), start("2016-10-05", "rivastigmine"),
                 mmse("2017-02-12", 19), stop("2017-02-12", "rivastigmine"), start("2017-02-12", "donepezil"),
                 mmse("2018-02-03", 23), start("2018-02-03", "donepezil"), mmse("2019-04-01", 14),
                 stop("2019-04-01", "donepezil")};
    tl.normalise();
    const auto rows = tl.rows();
    ASSERT_EQ(rows.size(), 5u);
    const char* meds[] = {"NoMed", "rivastigmine", "donepezil", "donepezil", "Discontinued"};
    const int scores[] = {25, 23, 19, 23, 14};
    const int cum[] = {0, 1, 2, 2, 2};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(rows[i].medication, meds[i]);
        EXPECT_EQ(rows[i].mmse, scores[i]);
        EXPECT_EQ(rows[i].cumulative_drugs, cum[i]);
    }
    EXPECT_EQ(tl.index_date(), Date(2016, 1, 1));
}

TEST(Timeline, StoppedDrugNeverActiveOnItsDate) {
    PatientTimeline tl;
    tl.events = {start("2020-01-01", "donepezil"), stop("2020-01-01", "donepezil")};
    tl.normalise();
    const auto rows = tl.rows();
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].medication, "Discontinued");
}

TEST(Timeline, NormaliseDropsOtherExperiencerAndDuplicates) {
    PatientTimeline tl;
    auto fam = start("2020-01-01", "memantine");
    fam.experiencer = Experiencer::other;
    tl.events = {mmse("2020-02-01", 20), mmse("2020-02-01", 20), fam, mmse("2020-01-01", 22)};
    tl.normalise();
    ASSERT_EQ(tl.events.size(), 2u);
    EXPECT_EQ(tl.events[0].date, Date(2020, 1, 1));
    EXPECT_EQ(tl.events[1].score(), 20);
}

TEST(Timeline, DatesNonDecreasing) {
    PatientTimeline tl;
    tl.events = {mmse("2021-05-01", 20), start("2019-01-01", "donepezil"), mmse("2020-01-01", 22)};
    tl.normalise();
    const auto rows = tl.rows();
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].date, rows[i].date);
}

TEST(Timeline, EmptyIndexDateThrows) {
    PatientTimeline tl;
    EXPECT_THROW(tl.index_date(), DataError);
}
