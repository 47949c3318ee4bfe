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
// Lyndon words, their standard bracketing, and coordinates of Lie elements in that basis.

#include "sigsurv/tensor_algebra.hpp"

#include "sigsurv/diagnostics.hpp"
#include "sigsurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sigsurv {

    namespace {
        int mobius(int n) {
            int result = 1;
            for (int p = 2; p * p <= n; ++p) {
                if (n % p == 0) {
                    n /= p;
                    if (n % p == 0) return 0;
                    result = -result;
                }
            }
            if (n > 1) result = -result;
            return result;
        }

        bool is_lyndon(const std::vector<int>& w) {
            const std::size_t n = w.size();
            for (std::size_t r = 1; r < n; ++r) {
                // compare w against its rotation starting at r
                for (std::size_t i = 0; i < n; ++i) {
                    const int a = w[i];
                    const int b = w[(i + r) % n];
                    if (a < b) break;
                    if (a > b) return false;
                    if (i + 1 == n) return false;  // equal to a rotation: periodic
                }
            }
            return true;
        }

        // Product of two sparse homogeneous elements of levels i and j.
        void accumulate_product(const SparseTensor& p, int pi, const SparseTensor& q, int qj, int dim, double sign,
                                std::map<std::size_t, double>& out) {
            const std::size_t po = level_offset(dim, pi);
            const std::size_t qo = level_offset(dim, qj);
            const std::size_t ro = level_offset(dim, pi + qj);
            const std::size_t qn = level_size(dim, qj);
            for (const auto& [ip, cp] : p) {
                for (const auto& [iq, cq] : q) {
                    out[ro + (ip - po) * qn + (iq - qo)] += sign * cp * cq;
                }
            }
        }
    }

    std::size_t witt_count(int dim, int k) {
        if (dim < 1 || k < 1) throw DomainError("witt_count requires d >= 1 and k >= 1");
        long double total = 0;
        for (int m = 1; m <= k; ++m) {
            if (k % m != 0) continue;
            const int mu = mobius(k / m);
            if (mu == 0) continue;
            total += mu * std::pow(static_cast<long double>(dim), m);
        }
        return static_cast<std::size_t>(std::llround(total / k));
    }

    std::vector<Word> lyndon_words(int dim, int level) {
        if (dim < 1) throw DomainError("lyndon_words requires d >= 1, got " + std::to_string(dim));
        if (level < 1) throw DomainError("lyndon_words requires L >= 1, got " + std::to_string(level));
        // Duval's generation: every Lyndon word of length <= level, in lexicographic order.
        std::vector<Word> out;
        std::vector<int> w{1};
        while (!w.empty()) {
            out.emplace_back(w);
            const std::size_t m = w.size();
            while (w.size() < static_cast<std::size_t>(level)) w.push_back(w[w.size() - m]);
            while (!w.empty() && w.back() == dim) w.pop_back();
            if (!w.empty()) ++w.back();
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const Word& a, const Word& b) { return a.length() < b.length(); });
        return out;
    }

    LyndonBasis::LyndonBasis(int dim, int level) : dim_(dim), level_(level), words_(lyndon_words(dim, level)) {
        const std::size_t n = words_.size();
        standard_.resize(n);
        orientation_.resize(n);
        brackets_.resize(n);

        std::map<std::vector<int>, std::size_t> lookup;
        std::vector<int> flips(n, 0);
        level_begin_.assign(static_cast<std::size_t>(level) + 2, 0);
        for (int k = 1; k <= level + 1; ++k) {
            level_begin_[static_cast<std::size_t>(k)] = static_cast<std::size_t>(
                std::partition_point(words_.begin(), words_.end(),
                                     [k](const Word& w) { return static_cast<int>(w.length()) < k; }) -
                words_.begin());
        }

        for (std::size_t i = 0; i < n; ++i) {
            const auto& letters = words_[i].letters;
            lookup[letters] = i;
            if (letters.size() == 1) {
                standard_[i] = {{word_index(words_[i], dim), 1.0}};
                brackets_[i] = std::to_string(letters[0]);
                continue;
            }
            // Standard factorization: right factor is the longest proper Lyndon suffix.
            std::size_t split = 1;
            for (; split < letters.size(); ++split) {
                std::vector<int> suffix(letters.begin() + static_cast<std::ptrdiff_t>(split), letters.end());
                if (is_lyndon(suffix)) break;
            }
            const std::vector<int> left(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(split));
            const std::vector<int> right(letters.begin() + static_cast<std::ptrdiff_t>(split), letters.end());
            const std::size_t li = lookup.at(left);
            const std::size_t ri = lookup.at(right);

            std::map<std::size_t, double> acc;
            const int ll = static_cast<int>(left.size());
            const int rl = static_cast<int>(right.size());
            accumulate_product(standard_[li], ll, standard_[ri], rl, dim, 1.0, acc);
            accumulate_product(standard_[ri], rl, standard_[li], ll, dim, -1.0, acc);
            for (const auto& [idx, c] : acc) {
                if (c != 0.0) standard_[i].emplace_back(idx, c);
            }

            const bool flip = right.size() == 1 && left.size() > 1;
            flips[i] = flips[li] + flips[ri] + (flip ? 1 : 0);
            brackets_[i] = flip ? "[" + brackets_[ri] + "," + brackets_[li] + "]"
                                : "[" + brackets_[li] + "," + brackets_[ri] + "]";
        }
        for (std::size_t i = 0; i < n; ++i) orientation_[i] = (flips[i] % 2 == 0) ? 1 : -1;

        // Dense triangular block per level: rows are Lyndon words read as words.
        triangles_.resize(static_cast<std::size_t>(level) + 1);
        for (int k = 1; k <= level; ++k) {
            const auto [b, e] = level_range(k);
            const std::size_t m = e - b;
            auto& tri = triangles_[static_cast<std::size_t>(k)];
            tri.assign(m * m, 0.0);
            std::map<std::size_t, std::size_t> row_of;
            for (std::size_t r = 0; r < m; ++r) row_of[word_index(words_[b + r], dim)] = r;
            for (std::size_t c = 0; c < m; ++c) {
                for (const auto& [idx, coeff] : standard_[b + c]) {
                    auto it = row_of.find(idx);
                    if (it != row_of.end()) tri[it->second * m + c] = coeff;
                }
            }
        }
    }

    std::pair<std::size_t, std::size_t> LyndonBasis::level_range(int k) const {
        if (k < 1 || k > level_) return {words_.size(), words_.size()};
        return {level_begin_[static_cast<std::size_t>(k)], level_begin_[static_cast<std::size_t>(k) + 1]};
    }

    SparseTensor LyndonBasis::expansion(std::size_t i) const {
        SparseTensor out = standard_[i];
        if (orientation_[i] < 0) {
            for (auto& entry : out) entry.second = -entry.second;
        }
        return out;
    }

    std::string LyndonBasis::bracket_string(std::size_t i) const { return brackets_[i]; }

    TruncatedTensor from_lyndon_coordinates(std::span<const double> coords, const LyndonBasis& basis) {
        if (coords.size() != basis.size()) {
            throw ShapeError("expected " + std::to_string(basis.size()) + " Lyndon coordinates, got " +
                             std::to_string(coords.size()));
        }
        TruncatedTensor out(basis.dim(), basis.level());
        auto dst = out.coeffs();
        for (std::size_t i = 0; i < coords.size(); ++i) {
            const double c = coords[i] * basis.orientation(i);
            for (const auto& [idx, e] : basis.standard_expansion(i)) dst[idx] += c * e;
        }
        return out;
    }

    struct LyndonSolver {
        static std::vector<double> solve(const TruncatedTensor& lie, const LyndonBasis& basis) {
            std::vector<double> coords(basis.size(), 0.0);
            for (int k = 1; k <= basis.level(); ++k) {
                const auto [b, e] = basis.level_range(k);
                const std::size_t m = e - b;
                const auto& tri = basis.triangles_[static_cast<std::size_t>(k)];
                for (std::size_t r = 0; r < m; ++r) {
                    double v = lie.coeffs()[word_index(basis.words_[b + r], basis.dim())];
                    for (std::size_t c = 0; c < r; ++c) v -= tri[r * m + c] * coords[b + c];
                    coords[b + r] = v / tri[r * m + r];
                }
            }
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] *= basis.orientation(i);
            return coords;
        }
    };

    LogSignature to_lyndon_coordinates(const TruncatedTensor& lie, const LyndonBasis& basis, double tolerance) {
        if (lie.dim() != basis.dim() || lie.level() != basis.level()) {
            throw ShapeError("Lie element shape (d=" + std::to_string(lie.dim()) + ", L=" + std::to_string(lie.level()) +
                             ") does not match basis (d=" + std::to_string(basis.dim()) +
                             ", L=" + std::to_string(basis.level()) + ")");
        }
        if (lie.constant() != 0.0) {
            throw DomainError("Lie element must have zero constant term, got " + std::to_string(lie.constant()));
        }
        LogSignature out;
        out.dim = basis.dim();
        out.level = basis.level();
        out.coords = LyndonSolver::solve(lie, basis);
        out.projection_residual = from_lyndon_coordinates(out.coords, basis).max_abs_diff(lie);
        // Relative to the input scale so large paths do not trip the warning on rounding alone.
        double scale = 1.0;
        for (double c : lie.coeffs()) scale = std::max(scale, std::abs(c));
        if (out.projection_residual > tolerance * scale) {
            std::ostringstream msg;
            msg << "projection residual " << out.projection_residual
                << " exceeds tolerance; input is not a Lie element";
            diag::warn(msg.str());
        }
        return out;
    }

}  // namespace sigsurv
