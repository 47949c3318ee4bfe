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
// Calendar dates for clinical records.

#ifndef SIGSURV_DATE_HPP
#define SIGSURV_DATE_HPP

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace sigsurv {

    // Days per month used for every day-count to month conversion.
    inline constexpr double kDaysPerMonth = 30.4375;

    class Date {
    public:
        Date() = default;
        // Throws ParseError for an invalid calendar date.
        Date(int year, unsigned month, unsigned day);

        // Accepts ISO "2016-10-05" and record style "05-Oct-2016" / "5 October 2016".
        static Date parse(std::string_view text);
        static std::optional<Date> try_parse(std::string_view text);

        int year() const { return static_cast<int>(ymd_.year()); }
        unsigned month() const { return static_cast<unsigned>(ymd_.month()); }
        unsigned day() const { return static_cast<unsigned>(ymd_.day()); }

        std::string iso() const;
        // Days since 1970-01-01.
        long days() const;
        static Date from_days(long days);

        friend bool operator==(const Date& a, const Date& b) { return a.ymd_ == b.ymd_; }
        friend auto operator<=>(const Date& a, const Date& b) { return a.days() <=> b.days(); }

    private:
        std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1}, std::chrono::day{1}};
    };

    inline long days_between(const Date& from, const Date& to) { return to.days() - from.days(); }
    inline double months_between(const Date& from, const Date& to) {
        return static_cast<double>(days_between(from, to)) / kDaysPerMonth;
    }

    // 1..12 for "jan", "january", "Sept", ...; nullopt otherwise. Case-insensitive.
    std::optional<unsigned> month_from_name(std::string_view name);

}  // namespace sigsurv

#endif  // SIGSURV_DATE_HPP
