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

#include "oracles.hpp"
#include "sigsurv/error.hpp"
#include "sigsurv/signature.hpp"

#include <cmath>
#include <gtest/gtest.h>
#include <limits>
#include <random>

using namespace sigsurv;

namespace {

    const std::map<char, int> kAb{{'a', 1}, {'b', 2}};

    PiecewisePath make(const std::vector<std::vector<double>>& pts) {
        return PiecewisePath(static_cast<int>(pts.front().size()), oracle::flatten(pts));
    }

    std::vector<double> points_of(const PiecewisePath& p) { return {p.data().begin(), p.data().end()}; }

}  // namespace

TEST(LetterSequence, Aabba) {
    const auto p = path_from_letter_sequence("aabba", kAb);
    EXPECT_EQ(points_of(p), (std::vector<double>{0, 0, 1, 0, 2, 0, 2, 1, 2, 2, 3, 2}));
}

TEST(LetterSequence, Baaab) {
    const auto p = path_from_letter_sequence("baaab", kAb);
    EXPECT_EQ(points_of(p), (std::vector<double>{0, 0, 0, 1, 1, 1, 2, 1, 3, 1, 3, 2}));
}

TEST(LetterSequence, EmptyIsOrigin) {
    const auto p = path_from_letter_sequence("", kAb);
    EXPECT_EQ(points_of(p), (std::vector<double>{0, 0}));
}

TEST(LetterSequence, UnmappedCharacter) {
    EXPECT_THROW(path_from_letter_sequence("abc", kAb), ParseError);
}

TEST(PathSignature, StraightSegment) {
    const auto s = path_signature(make({{0, 0}, {3, 2}}), 2);
    EXPECT_DOUBLE_EQ((s[Word{1}]), 3.0);
    EXPECT_DOUBLE_EQ((s[Word{2}]), 2.0);
    EXPECT_DOUBLE_EQ((s[Word{1, 1}]), 4.5);
    EXPECT_DOUBLE_EQ((s[Word{1, 2}]), 3.0);
    EXPECT_DOUBLE_EQ((s[Word{2, 1}]), 3.0);
    EXPECT_DOUBLE_EQ((s[Word{2, 2}]), 2.0);
}

TEST(PathSignature, AabbaLevelOneAndArea) {
    const auto p = path_from_letter_sequence("aabba", kAb);
    const auto s1 = path_signature(p, 1);
    EXPECT_EQ((s1[Word{1}]), 3.0);
    EXPECT_EQ((s1[Word{2}]), 2.0);
    const auto s2 = path_signature(p, 2);
    EXPECT_NEAR(0.5 * (s2[Word{1, 2}] - s2[Word{2, 1}]), 1.0, 1e-12);
}

TEST(PathSignature, SinglePointIsUnit) {
    const auto s = path_signature(make({{1.5, -2.0, 0.3}}), 3);
    EXPECT_EQ(s.max_abs_diff(TruncatedTensor::unit(3, 3)), 0.0);
    const auto degenerate = path_signature(make({{1, 1}, {1, 1}, {1, 1}}), 3);
    EXPECT_EQ(degenerate.max_abs_diff(TruncatedTensor::unit(2, 3)), 0.0);
}

TEST(PathSignature, Errors) {
    const auto p = make({{0, 0}, {1, 1}});
    EXPECT_THROW(path_signature(p, 0), DomainError);
    EXPECT_THROW(path_signature(PiecewisePath(2), 2), DomainError);
    EXPECT_THROW(path_signature(make({{0, 0}, {std::numeric_limits<double>::quiet_NaN(), 1}}), 2), DomainError);
    EXPECT_THROW(path_signature(make({{0, 0}, {std::numeric_limits<double>::infinity(), 1}}), 2), DomainError);
}

TEST(PiecewisePathParams, MustIncrease) {
    EXPECT_THROW(PiecewisePath(1, {0.0, 1.0}, {0.0, 0.0}), DomainError);
    EXPECT_NO_THROW(PiecewisePath(1, {0.0, 1.0}, {0.0, 0.5}));
}

TEST(PathSignature, ChenAgainstQuadratureOnSegments) {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 5; ++rep) {
        const auto pts = oracle::random_path(rng, 2, 5);
        const auto whole = oracle::to_map(path_signature(make(pts), 3));
        // quadrature of each half, combined by split enumeration
        const std::vector<std::vector<double>> a(pts.begin(), pts.begin() + 3), b(pts.begin() + 2, pts.end());
        const auto prod = oracle::split_product(oracle::quadrature_signature(a, 3, 2000),
                                                oracle::quadrature_signature(b, 3, 2000), 3);
        for (const auto& [w, v] : prod) EXPECT_NEAR(whole.at(w), v, 1e-6);
    }
}

TEST(PathSignature, ChenRandomSplits) {
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 1 + static_cast<int>(rng() % 4);
        const int l = 1 + static_cast<int>(rng() % 4);
        const auto pts = oracle::random_path(rng, d, 6);
        const std::size_t k = 1 + rng() % 4;
        const std::vector<std::vector<double>> a(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        const std::vector<std::vector<double>> b(pts.begin() + static_cast<std::ptrdiff_t>(k), pts.end());
        const auto lhs = path_signature(make(pts), l);
        const auto rhs = concat_product(path_signature(make(a), l), path_signature(make(b), l));
        EXPECT_LT(lhs.max_abs_diff(rhs), 1e-12);
    }
}

TEST(PathSignature, CollinearInsertionAndRespacing) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    for (int rep = 0; rep < 30; ++rep) {
        const auto pts = oracle::random_path(rng, 3, 5);
        std::vector<std::vector<double>> dense;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            dense.push_back(pts[i]);
            const double f = frac(rng);
            std::vector<double> mid(3);
            for (int j = 0; j < 3; ++j) mid[static_cast<std::size_t>(j)] = pts[i][static_cast<std::size_t>(j)] + f * (pts[i + 1][static_cast<std::size_t>(j)] - pts[i][static_cast<std::size_t>(j)]);
            dense.push_back(mid);
        }
        dense.push_back(pts.back());
        const auto a = path_signature(make(pts), 4);
        EXPECT_LT(a.max_abs_diff(path_signature(make(dense), 4)), 1e-12);

        std::vector<double> params{0.0};
        for (std::size_t i = 1; i < pts.size(); ++i) params.push_back(params.back() + frac(rng) * 10);
        EXPECT_EQ(a.max_abs_diff(path_signature(PiecewisePath(3, oracle::flatten(pts), params), 4)), 0.0);
    }
}

TEST(PathSignature, TranslationInvariance) {
    std::mt19937_64 rng(24);
    auto pts = oracle::random_path(rng, 2, 6);
    const auto a = path_signature(make(pts), 4);
    for (auto& p : pts) {
        p[0] += 7.25;
        p[1] -= 3.5;
    }
    EXPECT_LT(a.max_abs_diff(path_signature(make(pts), 4)), 1e-12);
}

TEST(PathSignature, LevelOneIsDisplacement) {
    std::mt19937_64 rng(25);
    const auto pts = oracle::random_path(rng, 4, 9);
    const auto s = path_signature(make(pts), 2);
    for (int i = 1; i <= 4; ++i) {
        EXPECT_NEAR(s[Word{i}], pts.back()[static_cast<std::size_t>(i - 1)] - pts.front()[static_cast<std::size_t>(i - 1)], 1e-12);
    }
}

TEST(PathSignature, ShuffleIdentity) {
    std::mt19937_64 rng(26);
    for (int rep = 0; rep < 20; ++rep) {
        const auto s = path_signature(make(oracle::random_path(rng, 3, 7)), 2);
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                EXPECT_NEAR(s[Word{i}] * s[Word{j}], (s[Word{i, j}] + s[Word{j, i}]), 1e-10);
            }
        }
    }
}

TEST(PathSignature, TimeReversalIsInverse) {
    std::mt19937_64 rng(27);
    for (int rep = 0; rep < 10; ++rep) {
        auto pts = oracle::random_path(rng, 2, 6);
        const auto fwd = path_signature(make(pts), 4);
        std::reverse(pts.begin(), pts.end());
        const auto back = path_signature(make(pts), 4);
        EXPECT_LT(concat_product(fwd, back).max_abs_diff(TruncatedTensor::unit(2, 4)), 1e-10);
    }
}

TEST(LogSignature, StraightSegmentHasOnlyLevelOne) {
    for (int l : {1, 2, 3, 5}) {
        const auto ls = log_signature(make({{0, 0, 0}, {1.5, -2, 0.5}}), l);
        EXPECT_DOUBLE_EQ(ls.coords[0], 1.5);
        EXPECT_DOUBLE_EQ(ls.coords[1], -2.0);
        EXPECT_DOUBLE_EQ(ls.coords[2], 0.5);
        for (std::size_t i = 3; i < ls.coords.size(); ++i) EXPECT_NEAR(ls.coords[i], 0.0, 1e-14);
    }
}

TEST(LogSignature, TableOne) {
    const auto a = log_signature(path_from_letter_sequence("aabba", kAb), 4);
    const auto b = log_signature(path_from_letter_sequence("baaab", kAb), 4);
    const double ea[] = {3, 2, 1, -0.5, -1, -1.0 / 3.0, -0.5, 0};
    const double eb[] = {3, 2, 0, 1.5, 0.5, 0, 0, 0};
    ASSERT_EQ(a.coords.size(), 8u);
    for (int i = 0; i < 8; ++i) {
        EXPECT_NEAR(a.coords[static_cast<std::size_t>(i)], ea[i], 1e-9);
        EXPECT_NEAR(b.coords[static_cast<std::size_t>(i)], eb[i], 1e-9);
    }
}

TEST(Dimensions, Examples) {
    EXPECT_EQ(sig_dimension(2, 4), 30u);
    EXPECT_EQ(logsig_dimension(2, 4), 8u);
    EXPECT_EQ(sig_dimension(1, 3), 3u);
    EXPECT_EQ(logsig_dimension(1, 3), 1u);
    EXPECT_EQ(sig_dimension(3, 3), 39u);
    EXPECT_EQ(logsig_dimension(3, 3), 14u);
    EXPECT_THROW(sig_dimension(0, 2), DomainError);
}

TEST(SignatureStream, MatchesBatchComputation) {
    std::mt19937_64 rng(28);
    const auto pts = oracle::random_path(rng, 3, 8);
    SignatureStream stream(3, 3);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        stream.append(pts[i]);
        stream.append(pts[i]);  // zero-length segment
        const std::vector<std::vector<double>> prefix(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        EXPECT_LT(stream.signature().max_abs_diff(path_signature(make(prefix), 3)), 1e-12);
    }
}

TEST(Batch, ParallelEqualsSerialBitwise) {
    std::mt19937_64 rng(29);
    std::vector<PiecewisePath> paths;
    for (int i = 0; i < 64; ++i) paths.push_back(make(oracle::random_path(rng, 3, 2 + i % 7)));
    const auto par = batch_signatures(paths, 4);
    const auto ser = serial::batch_signatures(paths, 4);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) EXPECT_EQ(par[i].max_abs_diff(ser[i]), 0.0);
    const auto lpar = batch_log_signatures(paths, 3);
    const auto lser = serial::batch_log_signatures(paths, 3);
    for (std::size_t i = 0; i < lpar.size(); ++i) EXPECT_EQ(lpar[i].coords, lser[i].coords);
}

TEST(Batch, ErrorsPropagate) {
    std::vector<PiecewisePath> paths{make({{0, 0}, {1, 1}}), PiecewisePath(2)};
    EXPECT_THROW(batch_signatures(paths, 2), DomainError);
}
