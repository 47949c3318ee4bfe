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
// Batch signature kernels: OpenMP over paths, plus the serial reference.

#include "sigsurv/signature.hpp"

#include <exception>
#include <optional>

namespace sigsurv {

    namespace {
        // Exceptions may not escape an OpenMP region; keep the first one and rethrow after.
        template <typename Result, typename Fn>
        std::vector<Result> parallel_map(std::span<const PiecewisePath> paths, Fn fn) {
            const auto n = static_cast<std::ptrdiff_t>(paths.size());
            std::vector<std::optional<Result>> slots(paths.size());
            std::exception_ptr failure;
            #pragma omp parallel for schedule(dynamic, 16)
            for (std::ptrdiff_t i = 0; i < n; ++i) {
                try {
                    slots[static_cast<std::size_t>(i)].emplace(fn(paths[static_cast<std::size_t>(i)]));
                } catch (...) {
                    #pragma omp critical(sigsurv_batch_failure)
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);
            std::vector<Result> out;
            out.reserve(slots.size());
            for (auto& s : slots) out.push_back(std::move(*s));
            return out;
        }
    }

    std::vector<TruncatedTensor> batch_signatures(std::span<const PiecewisePath> paths, int level) {
        return parallel_map<TruncatedTensor>(paths, [level](const PiecewisePath& p) { return path_signature(p, level); });
    }

    std::vector<LogSignature> batch_log_signatures(std::span<const PiecewisePath> paths, int level) {
        if (paths.empty()) return {};
        // One basis per dimension; construction is not thread-hostile but is worth sharing.
        std::map<int, LyndonBasis> bases;
        for (const auto& p : paths) {
            if (!bases.contains(p.dim())) bases.emplace(p.dim(), LyndonBasis(p.dim(), level));
        }
        return parallel_map<LogSignature>(paths, [&bases](const PiecewisePath& p) {
            return log_signature(p, bases.at(p.dim()));
        });
    }

    namespace serial {
        std::vector<TruncatedTensor> batch_signatures(std::span<const PiecewisePath> paths, int level) {
            std::vector<TruncatedTensor> out;
            out.reserve(paths.size());
            for (const auto& p : paths) out.push_back(path_signature(p, level));
            return out;
        }

        std::vector<LogSignature> batch_log_signatures(std::span<const PiecewisePath> paths, int level) {
            std::vector<LogSignature> out;
            out.reserve(paths.size());
            for (const auto& p : paths) out.push_back(log_signature(p, level));
            return out;
        }
    }

}  // namespace sigsurv
