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
#include "sigsurv/io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace sigsurv;

namespace {

    int parse_error_line(const std::string& text) {
        std::istringstream in(text);
        try {
            read_path_csv(in);
        } catch (const ParseError& e) {
            return static_cast<int>(e.line);
        }
        return -1;
    }

}  // namespace

TEST(PathCsv, HeaderAndRows) {
    std::istringstream in("x,y\n0,0\n1,0\n1,2\n");
    const auto p = read_path_csv(in);
    EXPECT_EQ(p.dim(), 2);
    EXPECT_EQ(p.num_points(), 3u);
    EXPECT_EQ(p.point(2)[1], 2.0);
    std::istringstream one_col("1.5\n-2\n");
    EXPECT_EQ(read_path_csv(one_col).dim(), 1);
    std::istringstream bare("1,2\n3\n");
    EXPECT_THROW(read_path_csv(bare), ParseError);
}

TEST(PathCsv, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("0,0\n1,x\n"), 2);
    EXPECT_EQ(parse_error_line("a,b\n0,0\n1\n"), 3);
    EXPECT_EQ(parse_error_line("0,0\n1,nan\n"), 2);
    EXPECT_EQ(parse_error_line("0,0\nx,y\n"), 2);
    std::istringstream empty("x,y\n");
    EXPECT_THROW(read_path_csv(empty), ParseError);
    try {
        std::istringstream in("0,0\n1,x\n");
        read_path_csv(in);
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(EventsJsonl, RoundTrip) {
    CohortSpec spec;
    spec.n_died = 5;
    spec.n_censored = 5;
    auto cohort = generate_cohort(spec).patients;
    for (auto& p : cohort) p.outcome.reset();
    std::stringstream s;
    write_events_jsonl(s, cohort);
    const auto back = read_events_jsonl(s);
    ASSERT_EQ(back.size(), cohort.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].patient_id, cohort[i].patient_id);
        EXPECT_EQ(back[i].events, cohort[i].events);
    }
}

TEST(EventsJsonl, RejectsBadKind) {
    std::istringstream in(
        R"({"patient_id":"a","date":"2020-01-01","kind":"Lab","value":1,"negated":false,"experiencer":"patient"})");
    EXPECT_THROW(read_events_jsonl(in), ParseError);
}

TEST(CohortJsonl, RoundTripExact) {
    CohortSpec spec;
    spec.n_died = 20;
    spec.n_censored = 10;
    const auto cohort = generate_cohort(spec).patients;
    std::stringstream s;
    write_cohort_jsonl(s, cohort);
    const auto text = s.str();
    const auto back = read_cohort_jsonl(s);
    ASSERT_EQ(back.size(), cohort.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].patient_id, cohort[i].patient_id);
        EXPECT_EQ(back[i].outcome, cohort[i].outcome);
        EXPECT_EQ(back[i].events, cohort[i].events);
    }
    std::ostringstream again;
    write_cohort_jsonl(again, back);
    EXPECT_EQ(again.str(), text);
}

TEST(FeatureCsv, RoundTripExact) {
    FeatureTable t;
    t.schema_id = "sig:time_mmse:L2:s30";
    t.feature_names = {"s_1", "s_2", "s_12"};
    t.patient_ids = {"P00001", "P00002"};
    t.outcomes = {{true, 12.34}, {false, 0.01}};
    t.x = FeatureMatrix(2, 3, {0.1, -1.0 / 3.0, 1e-300, 123456.789, 2.0 / 7.0, -0.0});
    std::stringstream s;
    write_feature_csv(s, t);
    EXPECT_EQ(s.str().rfind("# schema_id=sig:time_mmse:L2:s30\npatient_id,event,months,s_1,s_2,s_12\n", 0), 0u);
    const auto back = read_feature_csv(s);
    EXPECT_EQ(back.schema_id, t.schema_id);
    EXPECT_EQ(back.feature_names, t.feature_names);
    EXPECT_EQ(back.patient_ids, t.patient_ids);
    EXPECT_EQ(back.outcomes, t.outcomes);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(back.x(r, c), t.x(r, c));
    }
}

TEST(FeatureCsv, Errors) {
    std::istringstream no_schema("patient_id,event,months,a\nx,1,2,3\n");
    EXPECT_THROW(read_feature_csv(no_schema), ParseError);
    std::istringstream ragged("# schema_id=s\npatient_id,event,months,a\nx,1,2\n");
    EXPECT_THROW(read_feature_csv(ragged), ParseError);
    std::istringstream bad_time("# schema_id=s\npatient_id,event,months,a\nx,1,-2,3\n");
    EXPECT_THROW(read_feature_csv(bad_time), Error);
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunManifest, ListsHashedOutputs) {
    const auto dir = std::filesystem::temp_directory_path() / "sigsurv_manifest_test";
    std::filesystem::remove_all(dir);
    write_text_file(dir / "sub" / "out.txt", "abc");
    RunManifest m;
    m.command = "sigsurv test";
    m.config_hash = sha256_hex("{}");
    m.seeds["master"] = 2021;
    m.outputs = {dir / "sub" / "out.txt"};
    m.started = utc_timestamp();
    m.finished = utc_timestamp();
    m.write(dir / "manifest.json");
    const auto j = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
    EXPECT_EQ(j.at("command"), "sigsurv test");
    EXPECT_EQ(j.at("seeds").at("master"), 2021);
    const auto text = j.dump();
    EXPECT_NE(text.find("ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"), std::string::npos);
    EXPECT_EQ(m.started.size(), 20u);
    std::filesystem::remove_all(dir);
    EXPECT_THROW(read_text_file(dir / "missing"), DataError);
}
