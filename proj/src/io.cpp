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

#include "sigsurv/io.hpp"

#include "sigsurv/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <openssl/evp.h>
#include <ostream>
#include <sstream>

namespace sigsurv {

    using json = nlohmann::json;

    namespace {

        std::string_view trim(std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
            return s;
        }

        std::vector<std::string_view> split_csv(std::string_view line) {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (true) {
                const auto pos = line.find(',', start);
                out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
                if (pos == std::string_view::npos) break;
                start = pos + 1;
            }
            return out;
        }

        bool parse_double(std::string_view s, double& v) {
            if (s.empty()) return false;
            if (s.front() == '+') s.remove_prefix(1);
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            return res.ec == std::errc() && res.ptr == s.data() + s.size();
        }

        std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

        json event_json(const ExtractedEvent& e) {
            json j{{"date", e.date.iso()}, {"kind", std::string(to_string(e.kind))}};
            if (e.kind == EventKind::mmse) {
                j["value"] = e.score();
            } else {
                j["value"] = e.name();
            }
            j["negated"] = e.negated;
            j["experiencer"] = std::string(to_string(e.experiencer));
            return j;
        }

        ExtractedEvent event_from_json(const json& j) {
            ExtractedEvent e;
            e.date = Date::parse(j.at("date").get<std::string>());
            e.kind = parse_event_kind(j.at("kind").get<std::string>());
            const auto& v = j.at("value");
            if (e.kind == EventKind::mmse) {
                if (!v.is_number_integer()) throw ParseError("MMSE value must be an integer");
                e.value = v.get<int>();
            } else {
                e.value = v.get<std::string>();
            }
            e.negated = j.value("negated", false);
            e.experiencer = parse_experiencer(j.value("experiencer", std::string("patient")));
            return e;
        }

        template <class F>
        void for_each_json_line(std::istream& in, F&& f) {
            std::string line;
            std::size_t no = 0;
            while (std::getline(in, line)) {
                ++no;
                if (trim(line).empty()) continue;
                try {
                    f(json::parse(line), no);
                } catch (const json::exception& e) {
                    throw ParseError(std::string(e.what()), no);
                } catch (const ParseError& e) {
                    throw ParseError(std::string(e.what()), no);
                } catch (const ConfigError& e) {
                    throw ParseError(std::string(e.what()), no);
                } catch (const DomainError& e) {
                    throw ParseError(std::string(e.what()), no);
                }
            }
        }

    }  // namespace

    PiecewisePath read_path_csv(std::istream& in) {
        std::string line;
        std::size_t no = 0;
        int dim = 0;
        std::vector<double> pts;
        bool first = true;
        while (std::getline(in, line)) {
            ++no;
            if (trim(line).empty()) continue;
            const auto cells = split_csv(line);
            std::vector<double> row;
            bool numeric = true;
            for (auto c : cells) {
                double v;
                if (!parse_double(c, v)) {
                    numeric = false;
                    break;
                }
                row.push_back(v);
            }
            if (!numeric) {
                if (first) {
                    dim = static_cast<int>(cells.size());
                    first = false;
                    continue;
                }
                throw ParseError("non-numeric value", no);
            }
            for (double v : row) {
                if (!std::isfinite(v)) throw ParseError("non-finite value", no);
            }
            if (dim == 0) dim = static_cast<int>(row.size());
            if (static_cast<int>(row.size()) != dim) {
                throw ParseError(fmt::format("expected {} columns, got {}", dim, row.size()), no);
            }
            first = false;
            pts.insert(pts.end(), row.begin(), row.end());
        }
        if (pts.empty()) throw ParseError("path CSV has no data rows", no);
        return PiecewisePath(dim, std::move(pts));
    }

    PiecewisePath load_path_csv(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot read '" + path.string() + "'");
        try {
            return read_path_csv(in);
        } catch (const ParseError& e) {
            ParseError wrapped(path.string() + ": " + e.what());
            wrapped.line = e.line;
            throw wrapped;
        }
    }

    NotesInput read_notes_jsonl(std::istream& in, bool skip_bad) {
        NotesInput out;
        std::string line;
        std::size_t no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (trim(line).empty()) continue;
            try {
                const json j = json::parse(line);
                if (!j.is_object()) throw ParseError("expected a JSON object");
                Note n;
                n.patient_id = j.at("patient_id").get<std::string>();
                n.doc_date = Date::parse(j.at("date").get<std::string>());
                n.text = j.at("text").get<std::string>();
                out.notes.push_back(std::move(n));
            } catch (const std::exception& e) {
                if (!skip_bad) throw ParseError(e.what(), no);
                out.skipped.push_back(fmt::format("line {}: {}", no, e.what()));
            }
        }
        return out;
    }

    void write_events_jsonl(std::ostream& out, const std::vector<PatientTimeline>& timelines) {
        for (const auto& tl : timelines) {
            for (const auto& e : tl.events) {
                json j = event_json(e);
                j["patient_id"] = tl.patient_id;
                out << j.dump() << '\n';
            }
        }
    }

    std::vector<PatientTimeline> read_events_jsonl(std::istream& in) {
        std::map<std::string, PatientTimeline> by_id;
        for_each_json_line(in, [&](const json& j, std::size_t) {
            const auto id = j.at("patient_id").get<std::string>();
            auto& tl = by_id[id];
            tl.patient_id = id;
            tl.events.push_back(event_from_json(j));
        });
        std::vector<PatientTimeline> out;
        for (auto& [id, tl] : by_id) {
            tl.normalise();
            out.push_back(std::move(tl));
        }
        return out;
    }

    void write_rows_jsonl(std::ostream& out, const std::vector<PatientTimeline>& timelines) {
        for (const auto& tl : timelines) {
            for (const auto& r : tl.rows()) {
                json j{{"patient_id", tl.patient_id}, {"date", r.date.iso()}, {"medication", r.medication}};
                j["mmse"] = r.mmse ? json(*r.mmse) : json(nullptr);
                j["cumulative_drugs"] = r.cumulative_drugs;
                out << j.dump() << '\n';
            }
        }
    }

    void write_cohort_jsonl(std::ostream& out, const std::vector<PatientTimeline>& cohort) {
        for (const auto& tl : cohort) {
            json events = json::array();
            for (const auto& e : tl.events) events.push_back(event_json(e));
            json j{{"patient_id", tl.patient_id}};
            if (tl.outcome) {
                j["outcome"] = {{"event", tl.outcome->event}, {"months", tl.outcome->time}};
            } else {
                j["outcome"] = nullptr;
            }
            j["events"] = std::move(events);
            out << j.dump() << '\n';
        }
    }

    std::vector<PatientTimeline> read_cohort_jsonl(std::istream& in) {
        std::vector<PatientTimeline> out;
        for_each_json_line(in, [&](const json& j, std::size_t) {
            PatientTimeline tl;
            tl.patient_id = j.at("patient_id").get<std::string>();
            const auto it = j.find("outcome");
            if (it != j.end() && !it->is_null()) {
                tl.outcome = SurvivalOutcome::make(it->at("event").get<bool>(), it->at("months").get<double>());
            }
            for (const auto& e : j.at("events")) tl.events.push_back(event_from_json(e));
            tl.normalise();
            out.push_back(std::move(tl));
        });
        return out;
    }

    void write_feature_csv(std::ostream& out, const FeatureTable& t) {
        const std::size_t n = t.patient_ids.size();
        if (t.outcomes.size() != n || t.x.rows() != n || t.x.cols() != t.feature_names.size()) {
            throw ShapeError("feature table: inconsistent row or column counts");
        }
        out << "# schema_id=" << t.schema_id << '\n';
        out << "patient_id,event,months";
        for (const auto& f : t.feature_names) out << ',' << f;
        out << '\n';
        for (std::size_t i = 0; i < n; ++i) {
            if (t.patient_ids[i].find_first_of(",\n\r") != std::string::npos) {
                throw DataError("patient_id '" + t.patient_ids[i] + "' cannot be written to CSV");
            }
            out << t.patient_ids[i] << ',' << (t.outcomes[i].event ? 1 : 0) << ',' << fmt_double(t.outcomes[i].time);
            for (std::size_t j = 0; j < t.x.cols(); ++j) out << ',' << fmt_double(t.x(i, j));
            out << '\n';
        }
    }

    FeatureTable read_feature_csv(std::istream& in) {
        FeatureTable t;
        std::string line;
        std::size_t no = 0;
        bool have_header = false;
        std::vector<double> data;
        while (std::getline(in, line)) {
            ++no;
            const auto tl = trim(line);
            if (tl.empty()) continue;
            if (tl.front() == '#') {
                constexpr std::string_view key = "# schema_id=";
                if (tl.substr(0, key.size()) == key) t.schema_id = std::string(tl.substr(key.size()));
                continue;
            }
            const auto cells = split_csv(tl);
            if (!have_header) {
                if (t.schema_id.empty()) throw ParseError("feature CSV needs a '# schema_id=' line before the header", no);
                if (cells.size() < 3 || cells[0] != "patient_id" || cells[1] != "event" || cells[2] != "months") {
                    throw ParseError("expected header patient_id,event,months,...", no);
                }
                for (std::size_t j = 3; j < cells.size(); ++j) t.feature_names.emplace_back(cells[j]);
                have_header = true;
                continue;
            }
            if (cells.size() != t.feature_names.size() + 3) {
                throw ParseError(fmt::format("expected {} columns, got {}", t.feature_names.size() + 3,
                                             cells.size()),
                                 no);
            }
            double ev, months;
            if (!parse_double(cells[1], ev) || (ev != 0.0 && ev != 1.0)) {
                throw ParseError("event must be 0 or 1", no);
            }
            if (!parse_double(cells[2], months)) throw ParseError("bad months value", no);
            try {
                t.outcomes.push_back(SurvivalOutcome::make(ev == 1.0, months));
            } catch (const DomainError& e) {
                throw ParseError(std::string(e.what()), no);
            }
            t.patient_ids.emplace_back(cells[0]);
            for (std::size_t j = 3; j < cells.size(); ++j) {
                double v;
                if (!parse_double(cells[j], v) || !std::isfinite(v)) {
                    throw ParseError(fmt::format("bad value in column '{}'", t.feature_names[j - 3]), no);
                }
                data.push_back(v);
            }
        }
        if (!have_header) throw ParseError("feature CSV has no header", no);
        t.x = FeatureMatrix(t.patient_ids.size(), t.feature_names.size(), std::move(data));
        return t;
    }

    std::string sha256_hex(std::string_view data) {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
            throw InvariantError("sha256 failed");
        }
        std::string out;
        for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
        return out;
    }

    std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

    std::string utc_timestamp() {
        const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
        const auto day = std::chrono::floor<std::chrono::days>(now);
        const std::chrono::year_month_day ymd{day};
        const std::chrono::hh_mm_ss hms{now - day};
        return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                           static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hms.hours().count(),
                           hms.minutes().count(), hms.seconds().count());
    }

    std::string RunManifest::to_json_text() const {
        auto files = [](const std::vector<std::filesystem::path>& paths) {
            json a = json::array();
            for (const auto& p : paths) {
                std::error_code ec;
                const bool regular = std::filesystem::is_regular_file(p, ec);
                a.push_back({{"path", p.string()}, {"sha256", regular ? json(sha256_file(p)) : json(nullptr)}});
            }
            return a;
        };
        json j{{"command", command},
               {"config_sha256", config_hash},
               {"seeds", seeds},
               {"inputs", files(inputs)},
               {"outputs", files(outputs)},
               {"started", started},
               {"finished", finished}};
        return j.dump(2) + "\n";
    }

    void RunManifest::write(const std::filesystem::path& path) const { write_text_file(path, to_json_text()); }

    std::string read_text_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot read '" + path.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    void write_text_file(const std::filesystem::path& path, const std::string& content) {
        if (path.has_parent_path()) {
            std::error_code ec;
            std::filesystem::create_directories(path.parent_path(), ec);
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write '" + path.string() + "'");
        out << content;
        out.close();
        if (!out) throw DataError("write failed for '" + path.string() + "'");
    }

}  // namespace sigsurv
