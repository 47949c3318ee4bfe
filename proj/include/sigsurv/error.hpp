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
// Exception types shared by every module. The CLI maps them onto exit codes.

#ifndef SIGSURV_ERROR_HPP
#define SIGSURV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sigsurv {

    enum class ErrorKind {
        validation = 1,  // bad arguments, shapes, configuration
        data = 2,        // unparseable or unusable input data
        internal = 3,    // invariant violated inside the library
    };

    class Error : public std::runtime_error {
    public:
        Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
        ErrorKind kind() const noexcept { return kind_; }
    private:
        ErrorKind kind_;
    };

    /* Argument outside the mathematical domain of an operation (letter out of range, level < 1,
     * non-unit constant term passed to a logarithm, ...). */
    struct DomainError : Error {
        explicit DomainError(const std::string& what) : Error(ErrorKind::validation, what) {}
    };

    // Two operands disagree on (dim, level) or a feature vector disagrees with a model schema.
    struct ShapeError : Error {
        explicit ShapeError(const std::string& what) : Error(ErrorKind::validation, what) {}
    };

    struct ConfigError : Error {
        explicit ConfigError(const std::string& what) : Error(ErrorKind::validation, what) {}
    };

    // Malformed external input. `line` is 1-based, 0 when not applicable.
    struct ParseError : Error {
        ParseError(const std::string& what, std::size_t line = 0)
            : Error(ErrorKind::data, line ? what + " (line " + std::to_string(line) + ")" : what), line(line) {}
        std::size_t line;
    };

    struct DataError : Error {
        explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
    };

    struct InvariantError : Error {
        explicit InvariantError(const std::string& what) : Error(ErrorKind::internal, what) {}
    };

}  // namespace sigsurv

#endif  // SIGSURV_ERROR_HPP
