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

#include "sigsurv/date.hpp"

#include "sigsurv/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fmt/format.h>

namespace sigsurv {

    namespace {
        std::string lower(std::string_view s) {
            std::string out(s);
            for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return out;
        }

        std::optional<int> to_int(std::string_view s) {
            if (s.empty()) return std::nullopt;
            int v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
            return v;
        }
    }

    std::optional<unsigned> month_from_name(std::string_view name) {
        static constexpr std::array<std::string_view, 12> names{"january", "february", "march",     "april",
                                                                "may",     "june",     "july",      "august",
                                                                "september", "october", "november", "december"};
        const std::string n = lower(name);
        if (n.size() < 3) return std::nullopt;
        for (unsigned i = 0; i < names.size(); ++i) {
            if (names[i] == n) return i + 1;
            if (names[i].substr(0, 3) == n) return i + 1;
            if (n == "sept" && i == 8) return i + 1;
        }
        return std::nullopt;
    }

    Date::Date(int year, unsigned month, unsigned day)
        : ymd_(std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}) {
        if (!ymd_.ok()) throw ParseError(fmt::format("invalid calendar date {:04d}-{:02d}-{:02d}", year, month, day));
    }

    std::optional<Date> Date::try_parse(std::string_view text) {
        try {
            return parse(text);
        } catch (const ParseError&) {
            return std::nullopt;
        }
    }

    Date Date::parse(std::string_view text) {
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

        std::array<std::string_view, 3> parts{};
        std::size_t count = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == '-' || text[i] == ' ' || text[i] == '/') {
                if (i > start) {
                    if (count == 3) throw ParseError("unrecognised date '" + std::string(text) + "'");
                    parts[count++] = text.substr(start, i - start);
                }
                start = i + 1;
            }
        }
        if (count != 3) throw ParseError("unrecognised date '" + std::string(text) + "'");

        // ISO: YYYY-MM-DD
        if (parts[0].size() == 4) {
            auto y = to_int(parts[0]);
            auto m = to_int(parts[1]);
            auto d = to_int(parts[2]);
            if (y && m && d && *m > 0 && *d > 0) return Date(*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d));
            throw ParseError("unrecognised date '" + std::string(text) + "'");
        }
        // DD-Mon-YYYY
        auto d = to_int(parts[0]);
        auto m = month_from_name(parts[1]);
        auto y = to_int(parts[2]);
        if (d && m && y && *d > 0) return Date(*y, *m, static_cast<unsigned>(*d));
        throw ParseError("unrecognised date '" + std::string(text) + "'");
    }

    std::string Date::iso() const { return fmt::format("{:04d}-{:02d}-{:02d}", year(), month(), day()); }

    long Date::days() const { return std::chrono::sys_days{ymd_}.time_since_epoch().count(); }

    Date Date::from_days(long days) {
        Date out;
        out.ymd_ = std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days}}};
        return out;
    }

}  // namespace sigsurv
