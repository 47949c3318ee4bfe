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

#include "sigsurv/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace sigsurv::diag {

    namespace {
        std::mutex sink_mutex;

        Sink& current_sink() {
            static Sink sink = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
            return sink;
        }
    }

    Sink set_warning_sink(Sink sink) {
        std::lock_guard lock(sink_mutex);
        Sink previous = std::move(current_sink());
        current_sink() = std::move(sink);
        return previous;
    }

    void warn(const std::string& message) {
        std::lock_guard lock(sink_mutex);
        if (current_sink()) current_sink()(message);
    }

    ScopedCapture::ScopedCapture() : messages_(std::make_shared<std::vector<std::string>>()) {
        auto store = messages_;
        previous_ = set_warning_sink([store](const std::string& m) { store->push_back(m); });
    }

    ScopedCapture::~ScopedCapture() { set_warning_sink(std::move(previous_)); }

}  // namespace sigsurv::diag
