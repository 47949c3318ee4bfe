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
#include "sigsurv/tensor_algebra.hpp"

#include <gtest/gtest.h>
#include <random>

using namespace sigsurv;

namespace {

    TruncatedTensor random_tensor(std::mt19937_64& rng, int d, int l, double constant) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        TruncatedTensor t(d, l);
        for (auto& c : t.coeffs()) c = u(rng);
        t.coeffs()[0] = constant;
        return t;
    }

}  // namespace

TEST(WordIndex, ConstantAndFirstLevels) {
    EXPECT_EQ(word_index(Word{}, 2), 0u);
    EXPECT_EQ(word_index(Word{1}, 2), 1u);
    EXPECT_EQ(word_index(Word{2}, 2), 2u);
    EXPECT_EQ(word_index(Word{1, 2}, 2), 4u);
}

TEST(WordIndex, RejectsLettersOutOfRange) {
    EXPECT_THROW(word_index(Word{3}, 2), DomainError);
    EXPECT_THROW(word_index(Word{0, 1}, 2), DomainError);
}

TEST(WordIndex, BijectiveAndLevelContiguous) {
    for (int d : {1, 2, 3, 4}) {
        const int l = 4;
        std::size_t expected = 0;
        for (const auto& w : oracle::all_words(d, l)) {
            ASSERT_EQ(word_index(w, d), expected);
            ASSERT_EQ(word_at(expected, d), w);
            ++expected;
        }
        EXPECT_EQ(expected, tensor_size(d, l));
    }
}

TEST(TruncatedTensor, StorageSize) {
    EXPECT_EQ(TruncatedTensor(2, 4).size(), 31u);
    EXPECT_EQ(TruncatedTensor(3, 2).size(), 13u);
    EXPECT_EQ(level_offset(2, 3), 7u);
}

TEST(ConcatProduct, UnitIsIdentity) {
    std::mt19937_64 rng(1);
    const auto b = random_tensor(rng, 2, 3, 0.7);
    const auto u = TruncatedTensor::unit(2, 3);
    EXPECT_EQ(concat_product(u, b).max_abs_diff(b), 0.0);
    EXPECT_EQ(concat_product(b, u).max_abs_diff(b), 0.0);
}

TEST(ConcatProduct, BinomialExpansion) {
    auto a = TruncatedTensor::unit(2, 2);
    a[Word{1}] = 1.0;
    const auto r = concat_product(a, a);
    EXPECT_EQ(r.constant(), 1.0);
    EXPECT_EQ((r[Word{1}]), 2.0);
    EXPECT_EQ((r[Word{1, 1}]), 1.0);
    EXPECT_EQ((r[Word{2}]), 0.0);
}

TEST(ConcatProduct, MatchesSplitEnumeration) {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_tensor(rng, 2, 3, 0.3);
        const auto b = random_tensor(rng, 2, 3, -1.2);
        const auto expect = oracle::split_product(oracle::to_map(a), oracle::to_map(b), 3);
        const auto got = oracle::to_map(concat_product(a, b));
        for (const auto& [w, v] : expect) EXPECT_NEAR(got.at(w), v, 1e-13);
    }
}

TEST(ConcatProduct, Associative) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_tensor(rng, 3, 3, 1.0);
        const auto b = random_tensor(rng, 3, 3, 0.5);
        const auto c = random_tensor(rng, 3, 3, -0.25);
        EXPECT_LT(concat_product(concat_product(a, b), c).max_abs_diff(concat_product(a, concat_product(b, c))), 1e-12);
    }
}

TEST(ConcatProduct, ShapeMismatch) {
    EXPECT_THROW(concat_product(TruncatedTensor(2, 3), TruncatedTensor(2, 2)), ShapeError);
    EXPECT_THROW(concat_product(TruncatedTensor(2, 3), TruncatedTensor(3, 3)), ShapeError);
}

TEST(TensorExp, ZeroGivesUnit) {
    EXPECT_EQ(tensor_exp(TruncatedTensor(2, 3)).max_abs_diff(TruncatedTensor::unit(2, 3)), 0.0);
}

TEST(TensorExp, LevelTwoOfLinearDisplacement) {
    const double x1[] = {2.0, 2.0};
    const auto e1 = tensor_exp(TruncatedTensor::from_letters(x1, 2));
    for (auto w : {Word{1, 1}, Word{1, 2}, Word{2, 1}, Word{2, 2}}) EXPECT_DOUBLE_EQ(e1[w], 2.0);
    const double x2[] = {3.0, 2.0};
    const auto e2 = tensor_exp(TruncatedTensor::from_letters(x2, 2));
    EXPECT_DOUBLE_EQ((e2[Word{1, 1}]), 4.5);
    EXPECT_DOUBLE_EQ((e2[Word{1, 2}]), 3.0);
    EXPECT_DOUBLE_EQ((e2[Word{2, 1}]), 3.0);
    EXPECT_DOUBLE_EQ((e2[Word{2, 2}]), 2.0);
    EXPECT_EQ(e2.constant(), 1.0);
}

TEST(TensorExp, RejectsNonzeroConstant) {
    EXPECT_THROW(tensor_exp(TruncatedTensor::unit(2, 2)), DomainError);
}

TEST(TensorLog, UnitGivesZero) {
    EXPECT_EQ(tensor_log(TruncatedTensor::unit(2, 3)).max_abs_diff(TruncatedTensor(2, 3)), 0.0);
}

TEST(TensorLog, RejectsConstantOtherThanOne) {
    EXPECT_THROW(tensor_log(TruncatedTensor(2, 2)), DomainError);
}

TEST(TensorLog, InvertsExpOfLetters) {
    const double x[] = {3.0, 2.0};
    const auto lie = TruncatedTensor::from_letters(x, 4);
    EXPECT_LT(tensor_log(tensor_exp(lie)).max_abs_diff(lie), 1e-13);
}

TEST(TensorLog, ExpLogRoundTrip) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = random_tensor(rng, 2, 4, 1.0);
        EXPECT_LT(tensor_exp(tensor_log(g)).max_abs_diff(g), 1e-12);
        const auto x = random_tensor(rng, 3, 3, 0.0);
        EXPECT_LT(tensor_log(tensor_exp(x)).max_abs_diff(x), 1e-12);
    }
}

TEST(TensorLog, AabbaLevelTwoIsAntisymmetric) {
    const auto path = path_from_letter_sequence("aabba", {{'a', 1}, {'b', 2}});
    const auto lg = tensor_log(path_signature(path, 4));
    EXPECT_NEAR((lg[Word{1, 2}]), 1.0, 1e-12);
    EXPECT_NEAR((lg[Word{2, 1}]), -1.0, 1e-12);
}

TEST(TensorLog, VanishesOnConstantWordsOfGroupLike) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const auto pts = oracle::random_path(rng, 3, 6);
        const auto lg = tensor_log(path_signature(PiecewisePath(3, oracle::flatten(pts)), 4));
        for (int a = 1; a <= 3; ++a) {
            for (int k = 2; k <= 4; ++k) {
                EXPECT_NEAR(lg[Word(std::vector<int>(static_cast<std::size_t>(k), a))], 0.0, 1e-12);
            }
        }
    }
}

TEST(TensorInverse, ProductIsUnit) {
    std::mt19937_64 rng(6);
    const auto g = random_tensor(rng, 2, 4, 1.0);
    EXPECT_LT(concat_product(g, tensor_inverse(g)).max_abs_diff(TruncatedTensor::unit(2, 4)), 1e-12);
}

TEST(MultExpInplace, AgreesWithExplicitProduct) {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        auto acc = random_tensor(rng, 3, 4, 1.0);
        const double delta[] = {0.3, -1.1, 0.7};
        const auto expect = concat_product(acc, tensor_exp(TruncatedTensor::from_letters(delta, 4)));
        mult_exp_inplace(acc, delta);
        EXPECT_LT(acc.max_abs_diff(expect), 1e-12);
    }
}
