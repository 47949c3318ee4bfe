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

#include "sigsurv/tensor_algebra.hpp"

#include "sigsurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sigsurv {

    namespace {
        void check_shape(int dim, int level) {
            if (dim < 1) throw DomainError("alphabet size must be >= 1, got " + std::to_string(dim));
            if (level < 0) throw DomainError("truncation level must be >= 0, got " + std::to_string(level));
        }

        void require_same_shape(const TruncatedTensor& a, const TruncatedTensor& b, const char* op) {
            if (!a.same_shape(b)) {
                throw ShapeError(std::string(op) + ": shape mismatch (d=" + std::to_string(a.dim()) + ", L=" +
                                 std::to_string(a.level()) + ") vs (d=" + std::to_string(b.dim()) + ", L=" +
                                 std::to_string(b.level()) + ")");
            }
        }
    }

    std::string Word::label(int dim) const {
        std::string out;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (dim >= 10 && i > 0) out += '.';
            out += std::to_string(letters[i]);
        }
        return out;
    }

    std::size_t level_size(int dim, int k) {
        std::size_t s = 1;
        for (int i = 0; i < k; ++i) s *= static_cast<std::size_t>(dim);
        return s;
    }

    std::size_t level_offset(int dim, int k) {
        std::size_t off = 0;
        for (int i = 0; i < k; ++i) off += level_size(dim, i);
        return off;
    }

    std::size_t tensor_size(int dim, int level) { return level_offset(dim, level + 1); }

    std::size_t word_index(const Word& w, int dim) {
        std::size_t pos = 0;
        for (int letter : w.letters) {
            if (letter < 1 || letter > dim) {
                throw DomainError("letter " + std::to_string(letter) + " outside alphabet 1.." + std::to_string(dim));
            }
            pos = pos * static_cast<std::size_t>(dim) + static_cast<std::size_t>(letter - 1);
        }
        return level_offset(dim, static_cast<int>(w.length())) + pos;
    }

    Word word_at(std::size_t index, int dim) {
        int k = 0;
        while (index >= level_size(dim, k)) {
            index -= level_size(dim, k);
            ++k;
        }
        std::vector<int> letters(static_cast<std::size_t>(k));
        for (int j = k - 1; j >= 0; --j) {
            letters[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(dim)) + 1;
            index /= static_cast<std::size_t>(dim);
        }
        return Word(std::move(letters));
    }

    // --- TruncatedTensor -------------------------------------------------------------------

    TruncatedTensor::TruncatedTensor(int dim, int level) : dim_(dim), level_(level) {
        check_shape(dim, level);
        coeffs_.assign(tensor_size(dim, level), 0.0);
    }

    TruncatedTensor TruncatedTensor::unit(int dim, int level) {
        TruncatedTensor t(dim, level);
        t.coeffs_[0] = 1.0;
        return t;
    }

    TruncatedTensor TruncatedTensor::from_letters(std::span<const double> level_one, int level) {
        TruncatedTensor t(static_cast<int>(level_one.size()), level);
        if (level >= 1) std::copy(level_one.begin(), level_one.end(), t.coeffs_.begin() + 1);
        return t;
    }

    std::span<const double> TruncatedTensor::level_block(int k) const {
        return std::span<const double>(coeffs_).subspan(level_offset(dim_, k), level_size(dim_, k));
    }

    std::span<double> TruncatedTensor::level_block(int k) {
        return std::span<double>(coeffs_).subspan(level_offset(dim_, k), level_size(dim_, k));
    }

    TruncatedTensor& TruncatedTensor::operator+=(const TruncatedTensor& rhs) {
        require_same_shape(*this, rhs, "add");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
        return *this;
    }

    TruncatedTensor& TruncatedTensor::operator-=(const TruncatedTensor& rhs) {
        require_same_shape(*this, rhs, "subtract");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
        return *this;
    }

    TruncatedTensor& TruncatedTensor::operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        return *this;
    }

    double TruncatedTensor::max_abs_diff(const TruncatedTensor& other) const {
        require_same_shape(*this, other, "compare");
        double m = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) m = std::max(m, std::abs(coeffs_[i] - other.coeffs_[i]));
        return m;
    }

    // --- products ---------------------------------------------------------------------------

    TruncatedTensor concat_product(const TruncatedTensor& a, const TruncatedTensor& b) {
        require_same_shape(a, b, "concat_product");
        const int d = a.dim();
        const int L = a.level();
        TruncatedTensor out(d, L);
        for (int k = 0; k <= L; ++k) {
            auto dst = out.level_block(k);
            for (int i = 0; i <= k; ++i) {
                auto left = a.level_block(i);
                auto right = b.level_block(k - i);
                const std::size_t rn = right.size();
                for (std::size_t u = 0; u < left.size(); ++u) {
                    const double lu = left[u];
                    if (lu == 0.0) continue;
                    double* row = dst.data() + u * rn;
                    for (std::size_t v = 0; v < rn; ++v) row[v] += lu * right[v];
                }
            }
        }
        return out;
    }

    TruncatedTensor tensor_exp(const TruncatedTensor& x) {
        if (x.constant() != 0.0) {
            throw DomainError("tensor_exp requires a zero constant term, got " + std::to_string(x.constant()));
        }
        // Horner: 1 + x(1 + x/2(1 + x/3(...)))
        TruncatedTensor result = TruncatedTensor::unit(x.dim(), x.level());
        for (int k = x.level(); k >= 1; --k) {
            result = concat_product(x, result) * (1.0 / k);
            result.coeffs()[0] += 1.0;
        }
        return result;
    }

    TruncatedTensor tensor_log(const TruncatedTensor& g) {
        if (g.constant() != 1.0) {
            throw DomainError("tensor_log requires constant term 1, got " + std::to_string(g.constant()));
        }
        TruncatedTensor y = g;
        y.coeffs()[0] = 0.0;
        // Horner: y(1 - y(1/2 - y(1/3 - ...)))
        const int L = g.level();
        TruncatedTensor acc(g.dim(), L);
        for (int k = L; k >= 1; --k) {
            TruncatedTensor next = concat_product(y, acc) * -1.0;
            next.coeffs()[0] += 1.0 / k;
            acc = std::move(next);
        }
        return concat_product(y, acc);
    }

    TruncatedTensor tensor_inverse(const TruncatedTensor& g) {
        if (g.constant() != 1.0) {
            throw DomainError("tensor_inverse requires constant term 1, got " + std::to_string(g.constant()));
        }
        TruncatedTensor y = g * -1.0;
        y.coeffs()[0] = 0.0;
        TruncatedTensor acc = TruncatedTensor::unit(g.dim(), g.level());
        for (int k = 0; k < g.level(); ++k) {
            acc = concat_product(y, acc);
            acc.coeffs()[0] += 1.0;
        }
        return acc;
    }

    void mult_exp_inplace(TruncatedTensor& acc, std::span<const double> delta) {
        const int d = acc.dim();
        const int L = acc.level();
        if (static_cast<int>(delta.size()) != d) {
            throw ShapeError("segment increment has " + std::to_string(delta.size()) + " coordinates, expected " +
                             std::to_string(d));
        }
        const double c0 = acc.constant();
        std::vector<double> scratch(level_size(d, L > 0 ? L - 1 : 0));
        std::vector<double> next(level_size(d, L));
        // Descending levels so that lower levels are still the old values when read.
        //   new_k = sum_{i=0..k} old_{k-i} (x) delta^{(x) i} / i!
        // evaluated as ((old_0 delta/k + old_1) delta/(k-1) + old_2) ... + old_k.
        for (int k = L; k >= 1; --k) {
            std::size_t n = 1;
            scratch.assign(1, c0 / k);
            for (int i = 1; i <= k; ++i) {
                const double scale = (i < k) ? 1.0 / (k - i) : 1.0;
                next.resize(n * static_cast<std::size_t>(d));
                for (std::size_t u = 0; u < n; ++u) {
                    const double su = scratch[u];
                    double* row = next.data() + u * static_cast<std::size_t>(d);
                    for (int v = 0; v < d; ++v) row[v] = su * delta[static_cast<std::size_t>(v)];
                }
                n *= static_cast<std::size_t>(d);
                auto old = acc.level_block(i);
                if (i < k) {
                    for (std::size_t u = 0; u < n; ++u) next[u] = (next[u] + old[u]) * scale;
                } else {
                    for (std::size_t u = 0; u < n; ++u) next[u] += old[u];
                }
                scratch.swap(next);
            }
            auto dst = acc.level_block(k);
            std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
        }
    }

}  // namespace sigsurv
