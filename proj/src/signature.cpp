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

#include "sigsurv/signature.hpp"

#include "sigsurv/error.hpp"

#include <cmath>

namespace sigsurv {

    namespace {
        void check_finite(std::span<const double> p) {
            for (double v : p) {
                if (!std::isfinite(v)) throw DomainError("path coordinates must be finite");
            }
        }

        void check_level(int level) {
            if (level < 1) throw DomainError("truncation level must be >= 1, got " + std::to_string(level));
        }
    }

    PiecewisePath::PiecewisePath(int dim) : dim_(dim) {
        if (dim < 1) throw DomainError("path dimension must be >= 1, got " + std::to_string(dim));
    }

    PiecewisePath::PiecewisePath(int dim, std::vector<double> points) : PiecewisePath(dim) {
        if (points.size() % static_cast<std::size_t>(dim) != 0) {
            throw ShapeError("point buffer of size " + std::to_string(points.size()) + " is not a multiple of d=" +
                             std::to_string(dim));
        }
        points_ = std::move(points);
    }

    PiecewisePath::PiecewisePath(int dim, std::vector<double> points, std::vector<double> params)
        : PiecewisePath(dim, std::move(points)) {
        if (params.size() != num_points()) {
            throw ShapeError("parameter list has " + std::to_string(params.size()) + " values for " +
                             std::to_string(num_points()) + " points");
        }
        for (std::size_t i = 1; i < params.size(); ++i) {
            if (!(params[i] > params[i - 1])) throw DomainError("path parameter values must be strictly increasing");
        }
        params_ = std::move(params);
    }

    std::span<const double> PiecewisePath::point(std::size_t i) const {
        return std::span<const double>(points_).subspan(i * static_cast<std::size_t>(dim_),
                                                        static_cast<std::size_t>(dim_));
    }

    void PiecewisePath::push_back(std::span<const double> p) {
        if (params_) throw DomainError("parameterised path needs a parameter value for every point");
        if (static_cast<int>(p.size()) != dim_) throw ShapeError("point has wrong dimension");
        points_.insert(points_.end(), p.begin(), p.end());
    }

    void PiecewisePath::push_back(std::span<const double> p, double t) {
        if (static_cast<int>(p.size()) != dim_) throw ShapeError("point has wrong dimension");
        if (!params_) {
            if (num_points() != 0) throw DomainError("cannot add parameter values to an unparameterised path");
            params_.emplace();
        }
        if (!params_->empty() && !(t > params_->back())) {
            throw DomainError("path parameter values must be strictly increasing");
        }
        points_.insert(points_.end(), p.begin(), p.end());
        params_->push_back(t);
    }

    PiecewisePath path_from_letter_sequence(std::string_view seq, const std::map<char, int>& axis_of) {
        int dim = 0;
        for (const auto& [ch, axis] : axis_of) {
            if (axis < 1) throw DomainError(std::string("axis for '") + ch + "' must be >= 1");
            dim = std::max(dim, axis);
        }
        if (dim == 0) throw DomainError("letter mapping is empty");
        PiecewisePath path(dim);
        std::vector<double> cur(static_cast<std::size_t>(dim), 0.0);
        path.push_back(cur);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            auto it = axis_of.find(seq[i]);
            if (it == axis_of.end()) {
                throw ParseError(std::string("unmapped character '") + seq[i] + "' at position " + std::to_string(i));
            }
            cur[static_cast<std::size_t>(it->second - 1)] += 1.0;
            path.push_back(cur);
        }
        return path;
    }

    TruncatedTensor path_signature(const PiecewisePath& path, int level) {
        check_level(level);
        if (path.num_points() == 0) throw DomainError("path must have at least one point");
        SignatureStream stream(path.dim(), level);
        for (std::size_t i = 0; i < path.num_points(); ++i) stream.append(path.point(i));
        return stream.signature();
    }

    LogSignature log_signature(const PiecewisePath& path, const LyndonBasis& basis) {
        if (basis.dim() != path.dim()) throw ShapeError("basis dimension does not match path dimension");
        return to_lyndon_coordinates(tensor_log(path_signature(path, basis.level())), basis);
    }

    LogSignature log_signature(const PiecewisePath& path, int level) {
        check_level(level);
        return log_signature(path, LyndonBasis(path.dim(), level));
    }

    std::size_t sig_dimension(int dim, int level) {
        if (dim < 1 || level < 1) throw DomainError("sig_dimension requires d >= 1 and L >= 1");
        return tensor_size(dim, level) - 1;
    }

    std::size_t logsig_dimension(int dim, int level) {
        if (dim < 1 || level < 1) throw DomainError("logsig_dimension requires d >= 1 and L >= 1");
        std::size_t total = 0;
        for (int k = 1; k <= level; ++k) total += witt_count(dim, k);
        return total;
    }

    SignatureStream::SignatureStream(int dim, int level)
        : sig_(TruncatedTensor::unit(dim, level)), last_(static_cast<std::size_t>(dim), 0.0) {
        check_level(level);
    }

    void SignatureStream::append(std::span<const double> point) {
        if (static_cast<int>(point.size()) != sig_.dim()) {
            throw ShapeError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                             std::to_string(sig_.dim()));
        }
        check_finite(point);
        if (count_ > 0) {
            std::vector<double> delta(point.size());
            bool degenerate = true;
            for (std::size_t i = 0; i < point.size(); ++i) {
                delta[i] = point[i] - last_[i];
                if (delta[i] != 0.0) degenerate = false;
            }
            if (!degenerate) mult_exp_inplace(sig_, delta);
        }
        last_.assign(point.begin(), point.end());
        ++count_;
    }

}  // namespace sigsurv
