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
// Process-wide warning sink. Library code reports recoverable problems (projection residuals,
// omitted AUC points, degenerate forests) here instead of printing directly.

#ifndef SIGSURV_DIAGNOSTICS_HPP
#define SIGSURV_DIAGNOSTICS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sigsurv::diag {

    using Sink = std::function<void(const std::string&)>;

    // Default sink writes "warning: <msg>" to stderr. Returns the previous sink.
    Sink set_warning_sink(Sink sink);
    void warn(const std::string& message);

    // RAII capture, mostly for tests.
    class ScopedCapture {
    public:
        ScopedCapture();
        ~ScopedCapture();
        ScopedCapture(const ScopedCapture&) = delete;
        ScopedCapture& operator=(const ScopedCapture&) = delete;
        const std::vector<std::string>& messages() const { return *messages_; }
    private:
        std::shared_ptr<std::vector<std::string>> messages_;
        Sink previous_;
    };

}  // namespace sigsurv::diag

#endif  // SIGSURV_DIAGNOSTICS_HPP
