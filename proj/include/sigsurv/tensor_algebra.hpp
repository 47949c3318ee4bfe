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
// Truncated free tensor algebra over the letters 1..d, up to a fixed level L.
//
// Coefficients are stored densely and graded: the constant term, then the d level-1
// coefficients, then the d^2 level-2 coefficients, and so on. Inside a level, words are in
// lexicographic order, so the word (i1, ..., ik) lives at
//     offset(k) + sum_j (i_j - 1) * d^(k - j).

#ifndef SIGSURV_TENSOR_ALGEBRA_HPP
#define SIGSURV_TENSOR_ALGEBRA_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sigsurv {

    // A multi-index (i1, ..., ik). Letters are 1-based.
    struct Word {
        std::vector<int> letters;

        Word() = default;
        Word(std::initializer_list<int> ls) : letters(ls) {}
        explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

        std::size_t length() const noexcept { return letters.size(); }
        bool empty() const noexcept { return letters.empty(); }

        // "12" for d < 10, "1.12" style otherwise.
        std::string label(int dim) const;

        friend bool operator==(const Word&, const Word&) = default;
        friend auto operator<=>(const Word&, const Word&) = default;
    };

    // Number of words of length exactly k over d letters.
    std::size_t level_size(int dim, int k);
    // 1 + d + ... + d^level.
    std::size_t tensor_size(int dim, int level);
    // Index of the first word of length k.
    std::size_t level_offset(int dim, int k);

    // Flat storage index of `w`. Throws DomainError for letters outside 1..dim.
    std::size_t word_index(const Word& w, int dim);
    // Inverse of word_index.
    Word word_at(std::size_t index, int dim);

    class TruncatedTensor {
    public:
        // Zero tensor.
        TruncatedTensor(int dim, int level);

        static TruncatedTensor unit(int dim, int level);
        // x_1 e_1 + ... + x_d e_d
        static TruncatedTensor from_letters(std::span<const double> level_one, int level);

        int dim() const noexcept { return dim_; }
        int level() const noexcept { return level_; }
        std::size_t size() const noexcept { return coeffs_.size(); }

        std::span<const double> coeffs() const noexcept { return coeffs_; }
        std::span<double> coeffs() noexcept { return coeffs_; }

        // The d^k coefficients of level k.
        std::span<const double> level_block(int k) const;
        std::span<double> level_block(int k);

        double operator[](const Word& w) const { return coeffs_[word_index(w, dim_)]; }
        double& operator[](const Word& w) { return coeffs_[word_index(w, dim_)]; }

        double constant() const noexcept { return coeffs_[0]; }

        bool same_shape(const TruncatedTensor& other) const noexcept {
            return dim_ == other.dim_ && level_ == other.level_;
        }

        TruncatedTensor& operator+=(const TruncatedTensor& rhs);
        TruncatedTensor& operator-=(const TruncatedTensor& rhs);
        TruncatedTensor& operator*=(double s);

        friend TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
        friend TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b) { return a -= b; }
        friend TruncatedTensor operator*(TruncatedTensor a, double s) { return a *= s; }

        // Largest absolute coefficient difference. Throws ShapeError on mismatch.
        double max_abs_diff(const TruncatedTensor& other) const;

    private:
        int dim_;
        int level_;
        std::vector<double> coeffs_;
    };

    // Concatenation (tensor) product, terms above the level dropped.
    TruncatedTensor concat_product(const TruncatedTensor& a, const TruncatedTensor& b);

    // Exponential of a tensor with zero constant term.
    TruncatedTensor tensor_exp(const TruncatedTensor& x);

    // Logarithm of a tensor with constant term 1.
    TruncatedTensor tensor_log(const TruncatedTensor& g);

    // Inverse of a tensor with constant term 1, i.e. sum_k (1 - g)^k.
    TruncatedTensor tensor_inverse(const TruncatedTensor& g);

    // Multiplies `acc` on the right by exp(delta) in place, where delta is a level-1 vector.
    // This is the hot loop of signature computation; it never forms exp(delta) explicitly.
    void mult_exp_inplace(TruncatedTensor& acc, std::span<const double> delta);

    // ---------------------------------------------------------------------------------------
    // Free Lie algebra: Lyndon words and their standard bracketing.

    // Number of Lyndon words of length exactly k over d letters (Witt / necklace formula).
    std::size_t witt_count(int dim, int k);

    // All Lyndon words of length 1..level ordered by (length, lexicographic).
    std::vector<Word> lyndon_words(int dim, int level);

    // Sparse expansion of a Lie polynomial in the word basis: (flat index, coefficient),
    // sorted by index.
    using SparseTensor = std::vector<std::pair<std::size_t, double>>;

    class LyndonBasis {
    public:
        LyndonBasis(int dim, int level);

        int dim() const noexcept { return dim_; }
        int level() const noexcept { return level_; }
        std::size_t size() const noexcept { return words_.size(); }

        const std::vector<Word>& words() const noexcept { return words_; }

        // Word expansion of the standard bracketing of words()[i] (standard factorization
        // w = uv with v the longest proper Lyndon suffix, P_w = [P_u, P_v]).
        const SparseTensor& standard_expansion(std::size_t i) const { return standard_[i]; }

        /* Orientation of basis element i, +1 or -1. The coordinates reported by this library
         * are taken against orientation(i) * P_w. The sign is (-1)^n where n is the number
         * of nodes [A, b] in the standard bracketing tree whose right child is a single
         * letter and whose left child is a bracket; that is, the basis brackets are written
         * with letters on the left ([2,[1,2]] rather than [[1,2],2]). This is the convention
         * under which aabba has level-3 coordinates (-0.5, -1). */
        int orientation(std::size_t i) const { return orientation_[i]; }

        // orientation(i) * standard_expansion(i)
        SparseTensor expansion(std::size_t i) const;

        // Bracketing of words()[i] as text, e.g. "[1,[1,2]]", with orientation applied.
        std::string bracket_string(std::size_t i) const;

        // Indices into words() of the Lyndon words of length k.
        std::pair<std::size_t, std::size_t> level_range(int k) const;

    private:
        friend struct LyndonSolver;
        int dim_;
        int level_;
        std::vector<Word> words_;
        std::vector<SparseTensor> standard_;
        std::vector<int> orientation_;
        std::vector<std::size_t> level_begin_;
        std::vector<std::string> brackets_;
        // Per level: dense (row = Lyndon word as a word, col = basis element) triangular block.
        std::vector<std::vector<double>> triangles_;
    };

    struct LogSignature {
        int dim = 0;
        int level = 0;
        std::vector<double> coords;
        // Max-abs difference between the input Lie element and the word expansion of coords.
        double projection_residual = 0.0;
    };

    // Expresses a Lie element in the (oriented) Lyndon bracket basis. Emits a diagnostic
    // warning when the input is not a Lie element within `tolerance`.
    LogSignature to_lyndon_coordinates(const TruncatedTensor& lie, const LyndonBasis& basis,
                                       double tolerance = 1e-9);

    // Word expansion of Lyndon coordinates, sum_i coords[i] * expansion(i).
    TruncatedTensor from_lyndon_coordinates(std::span<const double> coords, const LyndonBasis& basis);

}  // namespace sigsurv

#endif  // SIGSURV_TENSOR_ALGEBRA_HPP
