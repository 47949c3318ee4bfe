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
// Signatures and log-signatures of piecewise-linear paths.
//
// The signature of a linear segment with increment x is exp(x); the signature of a
// concatenation is the tensor product of the pieces (Chen's identity). A path is therefore
// folded left to right with mult_exp_inplace, which is exact up to rounding.

#ifndef SIGSURV_SIGNATURE_HPP
#define SIGSURV_SIGNATURE_HPP

#include "sigsurv/tensor_algebra.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigsurv {

    class PiecewisePath {
    public:
        explicit PiecewisePath(int dim);
        // Row-major points, points.size() must be a multiple of dim.
        PiecewisePath(int dim, std::vector<double> points);
        PiecewisePath(int dim, std::vector<double> points, std::vector<double> params);

        int dim() const noexcept { return dim_; }
        std::size_t num_points() const noexcept { return points_.size() / static_cast<std::size_t>(dim_); }
        std::span<const double> point(std::size_t i) const;
        std::span<const double> data() const noexcept { return points_; }
        // Parameter values, if the path carries them. They never affect the signature.
        const std::optional<std::vector<double>>& params() const noexcept { return params_; }

        void push_back(std::span<const double> p);
        void push_back(std::span<const double> p, double t);

    private:
        int dim_;
        std::vector<double> points_;
        std::optional<std::vector<double>> params_;
    };

    // "aabba" with {a:1, b:2} -> (0,0),(1,0),(2,0),(2,1),(2,2),(3,2). Unmapped characters throw
    // ParseError.
    PiecewisePath path_from_letter_sequence(std::string_view seq, const std::map<char, int>& axis_of);

    TruncatedTensor path_signature(const PiecewisePath& path, int level);

    LogSignature log_signature(const PiecewisePath& path, int level);
    // Same, reusing a prebuilt basis (construction cost dominates for short paths).
    LogSignature log_signature(const PiecewisePath& path, const LyndonBasis& basis);

    // d + d^2 + ... + d^L
    std::size_t sig_dimension(int dim, int level);
    // Total number of Lyndon words of length <= L.
    std::size_t logsig_dimension(int dim, int level);

    /* Incremental signature of a stream. Appending a point multiplies the running signature
     * by the exponential of the new increment; nothing already seen is recomputed. */
    class SignatureStream {
    public:
        SignatureStream(int dim, int level);

        void append(std::span<const double> point);
        const TruncatedTensor& signature() const noexcept { return sig_; }
        std::size_t num_points() const noexcept { return count_; }

    private:
        TruncatedTensor sig_;
        std::vector<double> last_;
        std::size_t count_ = 0;
    };

    // Batch entry points. OpenMP over paths; output order matches input order.
    std::vector<TruncatedTensor> batch_signatures(std::span<const PiecewisePath> paths, int level);
    std::vector<LogSignature> batch_log_signatures(std::span<const PiecewisePath> paths, int level);

    namespace serial {
        // Single-threaded reference for the batch kernels.
        std::vector<TruncatedTensor> batch_signatures(std::span<const PiecewisePath> paths, int level);
        std::vector<LogSignature> batch_log_signatures(std::span<const PiecewisePath> paths, int level);
    }

}  // namespace sigsurv

#endif  // SIGSURV_SIGNATURE_HPP
