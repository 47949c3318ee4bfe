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

#include "sigsurv/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <regex>
#include <sstream>

using namespace sigsurv;
namespace fs = std::filesystem;

namespace {

    const fs::path kFixtures = SIGSURV_FIXTURE_DIR;

    struct CliRun {
        int rc = -1;
        std::string out;
        std::string err;
    };

    class Cli : public ::testing::Test {
    protected:
        void SetUp() override {
            dir_ = fs::temp_directory_path() /
                   ("sigsurv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
            fs::remove_all(dir_);
            fs::create_directories(dir_);
        }
        void TearDown() override { fs::remove_all(dir_); }

        CliRun run(const std::string& args) const {
            const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
            const std::string cmd = std::string("\"") + SIGSURV_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                                    err.string() + "\"";
            const int status = std::system(cmd.c_str());
            CliRun r;
            r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
            r.out = read_text_file(out);
            r.err = read_text_file(err);
            return r;
        }

        std::string path(const char* name) const { return (dir_ / name).string(); }

        fs::path dir_;
    };

    std::vector<std::string> lines(const std::string& text) {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);) out.push_back(l);
        return out;
    }

}  // namespace

TEST_F(Cli, SigLogPrintsGoldenCoordinates) {
    const auto r = run("sig " + (kFixtures / "aabba.csv").string() + " -L 4 --log");
    ASSERT_EQ(r.rc, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 8u);
    const double expect[] = {3, 2, 1, -0.5, -1, -1.0 / 3.0, -0.5, 0};
    for (std::size_t i = 0; i < 8; ++i) {
        const auto tab = ls[i].rfind('\t');
        EXPECT_NEAR(std::stod(ls[i].substr(tab + 1)), expect[i], 1e-9) << ls[i];
    }
    EXPECT_EQ(ls[0].substr(0, 2), "1\t");
    EXPECT_NE(ls[3].find("[1,[1,2]]"), std::string::npos);
}

TEST_F(Cli, SigFullCountsAndSinglePoint) {
    write_text_file(dir_ / "three.csv", "a,b,c\n0,0,0\n1,2,3\n");
    auto r = run("sig " + path("three.csv") + " -L 2 --full");
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 12u);
    EXPECT_EQ(lines(r.out)[3].substr(0, 3), "11\t");

    write_text_file(dir_ / "one.csv", "4,5,6\n");
    r = run("sig " + path("one.csv") + " -L 2 --full");
    ASSERT_EQ(r.rc, 0);
    for (const auto& l : lines(r.out)) EXPECT_EQ(l.substr(l.rfind('\t') + 1), "0");
    r = run("sig " + path("one.csv") + " -L 2 --log");
    ASSERT_EQ(r.rc, 0);
    for (const auto& l : lines(r.out)) EXPECT_EQ(l.substr(l.rfind('\t') + 1), "0");
}

TEST_F(Cli, SigMalformedCsvIsDataError) {
    write_text_file(dir_ / "bad.csv", "0,0\n1,oops\n");
    const auto r = run("sig " + path("bad.csv") + " -L 2");
    EXPECT_EQ(r.rc, 2);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
    EXPECT_EQ(run("sig " + path("missing.csv")).rc, 2);
}

TEST_F(Cli, UsageErrorsAreValidationErrors) {
    EXPECT_EQ(run("sig").rc, 1);
    EXPECT_EQ(run("nonsense").rc, 1);
    EXPECT_EQ(run("sig " + (kFixtures / "aabba.csv").string() + " -L 0").rc, 1);
}

TEST_F(Cli, ExtractReproducesGoldenFixtures) {
    const auto r = run("extract " + (kFixtures / "records.jsonl").string() + " " + (kFixtures / "lexicon.csv").string() +
                       " -o " + path("events.jsonl") + " --rows " + path("rows.jsonl"));
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(read_text_file(dir_ / "events.jsonl"), read_text_file(kFixtures / "extracted_events.jsonl"));
    EXPECT_EQ(read_text_file(dir_ / "rows.jsonl"), read_text_file(kFixtures / "extracted_table.jsonl"));
    EXPECT_TRUE(fs::exists(dir_ / "events.jsonl.manifest.json"));
}

TEST_F(Cli, ExtractEmptyInput) {
    write_text_file(dir_ / "empty.jsonl", "");
    const auto r = run("extract " + path("empty.jsonl") + " -o " + path("events.jsonl"));
    EXPECT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(read_text_file(dir_ / "events.jsonl"), "");
}

TEST_F(Cli, ExtractBadDate) {
    write_text_file(dir_ / "notes.jsonl",
                    "{\"patient_id\":\"a\",\"date\":\"2020-01-01\",\"text\":\"MMSE 20/30\"}\n"
                    "{\"patient_id\":\"a\",\"date\":\"2020-02-31\",\"text\":\"MMSE 19/30\"}\n");
    EXPECT_EQ(run("extract " + path("notes.jsonl") + " -o " + path("e.jsonl")).rc, 2);
    const auto r = run("extract " + path("notes.jsonl") + " -o " + path("e.jsonl") + " --skip-bad");
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_NE(r.err.find("1 skipped"), std::string::npos) << r.err;
    EXPECT_EQ(lines(read_text_file(dir_ / "e.jsonl")).size(), 1u);
}

TEST_F(Cli, ReproGoldenCheck) {
    const auto r = run("repro --skip-experiment --out-dir " + path("repro"));
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_NE(r.out.find("Table 1: PASS (8/8 coordinates, tol 1e-9)"), std::string::npos);
}

TEST_F(Cli, PipelineSynthFeaturizeTrainEvaluate) {
    write_text_file(dir_ / "spec.json", R"({"n_died": 80, "n_censored": 60})");
    auto r = run("synth --cohort-spec " + path("spec.json") + " -o " + path("cohort.jsonl"));
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(lines(read_text_file(dir_ / "cohort.jsonl")).size(), 140u);

    r = run("featurize " + path("cohort.jsonl") + " --featuriser sig --feature-set time_mmse -o " + path("sig.csv"));
    ASSERT_EQ(r.rc, 0) << r.err;
    r = run("featurize " + path("cohort.jsonl") + " --featuriser baseline --feature-set time_mmse -o " +
            path("base.csv"));
    ASSERT_EQ(r.rc, 0) << r.err;

    r = run("--seed 3 train " + path("sig.csv") + " --trees 10 -o " + path("model.json"));
    ASSERT_EQ(r.rc, 0) << r.err;
    r = run("--seed 3 train " + path("sig.csv") + " --trees 10 -o " + path("model2.json"));
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(read_text_file(dir_ / "model.json"), read_text_file(dir_ / "model2.json"));

    r = run("evaluate " + path("sig.csv") + " --model " + path("model.json") + " --out-dir " + path("eval"));
    EXPECT_EQ(r.rc, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir_ / "eval" / "manifest.json"));

    r = run("evaluate " + path("base.csv") + " --model " + path("model.json"));
    EXPECT_EQ(r.rc, 1);
    EXPECT_NE(r.err.find("schema"), std::string::npos) << r.err;

    r = run("evaluate " + path("base.csv") + " -k 5 --trees 10");
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_TRUE(std::regex_search(r.out, std::regex(R"(C-index: \d\.\d{3}\(\d\.\d{3}\) over 5-fold cross validation)")))
        << r.out;
}

TEST_F(Cli, ConfigErrorsNameTheField) {
    write_text_file(dir_ / "cfg.json", R"({"forest": {"n_trees": -1}})");
    const auto r = run("repro --config " + path("cfg.json") + " --out-dir " + path("repro"));
    EXPECT_EQ(r.rc, 1);
    EXPECT_NE(r.err.find("forest.n_trees"), std::string::npos) << r.err;
}

TEST_F(Cli, ManifestListsHashedOutputs) {
    const auto r = run("sig " + (kFixtures / "aabba.csv").string() + " -L 3 --log -o " + path("out.tsv"));
    ASSERT_EQ(r.rc, 0) << r.err;
    const auto manifest = read_text_file(dir_ / "out.tsv.manifest.json");
    EXPECT_NE(manifest.find(sha256_file(dir_ / "out.tsv")), std::string::npos);
    EXPECT_NE(manifest.find(sha256_file(kFixtures / "aabba.csv")), std::string::npos);
}
