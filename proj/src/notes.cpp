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

#include "sigsurv/notes.hpp"

#include "sigsurv/diagnostics.hpp"
#include "sigsurv/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sigsurv {

    namespace {
        constexpr int kWindow = 6;

        struct Token {
            std::string text;  // lowercase
            std::string raw;
            int sentence = 0;
        };

        std::string lower(std::string_view s) {
            std::string out(s);
            for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return out;
        }

        bool is_word_char(char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '/' || c == '-';
        }

        bool is_boundary(char c) { return c == '.' || c == '!' || c == '?' || c == ';' || c == '\n'; }

        // Words (letters, digits, internal apostrophes, "23/30", "x-ray") and punctuation tokens.
        // A '.' between digits stays inside the token.
        std::vector<Token> tokenize(std::string_view text) {
            std::vector<Token> out;
            int sentence = 0;
            std::size_t i = 0;
            while (i < text.size()) {
                const char c = text[i];
                if (std::isspace(static_cast<unsigned char>(c)) && c != '\n') {
                    ++i;
                    continue;
                }
                if (is_word_char(c) && c != '\'' && c != '/' && c != '-') {
                    std::size_t j = i;
                    while (j < text.size()) {
                        const char cj = text[j];
                        if (std::isalnum(static_cast<unsigned char>(cj))) {
                            ++j;
                        } else if ((cj == '\'' || cj == '/' || cj == '-' || cj == '.') && j + 1 < text.size() &&
                                   std::isalnum(static_cast<unsigned char>(text[j + 1])) &&
                                   (cj != '.' || (std::isdigit(static_cast<unsigned char>(text[j - 1])) &&
                                                  std::isdigit(static_cast<unsigned char>(text[j + 1]))))) {
                            ++j;
                        } else {
                            break;
                        }
                    }
                    std::string raw(text.substr(i, j - i));
                    out.push_back(Token{lower(raw), raw, sentence});
                    i = j;
                    continue;
                }
                // Curly apostrophe inside a word ("didn’t") is folded to ASCII by the caller.
                out.push_back(Token{std::string(1, c), std::string(1, c), sentence});
                if (is_boundary(c)) ++sentence;
                ++i;
            }
            return out;
        }

        std::string fold_quotes(std::string_view text) {
            std::string out;
            out.reserve(text.size());
            for (std::size_t i = 0; i < text.size(); ++i) {
                // U+2019 RIGHT SINGLE QUOTATION MARK
                if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
                    static_cast<unsigned char>(text[i + 1]) == 0x80 && static_cast<unsigned char>(text[i + 2]) == 0x99) {
                    out += '\'';
                    i += 2;
                } else {
                    out += text[i];
                }
            }
            return out;
        }

        std::optional<int> parse_int(std::string_view s) {
            if (s.empty() || s.size() > 4) return std::nullopt;
            int v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
            return v;
        }

        // "23/30" -> 23
        std::optional<int> parse_out_of_thirty(std::string_view s) {
            auto slash = s.find('/');
            if (slash == std::string_view::npos || s.substr(slash + 1) != "30") return std::nullopt;
            return parse_int(s.substr(0, slash));
        }

        // "1st", "2nd", "23rd", "4th", "12" -> day number
        std::optional<int> parse_day(std::string_view s) {
            std::size_t n = 0;
            while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n;
            if (n == 0 || n > 2) return std::nullopt;
            const auto suffix = s.substr(n);
            if (!suffix.empty() && suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") {
                return std::nullopt;
            }
            auto d = parse_int(s.substr(0, n));
            if (!d || *d < 1 || *d > 31) return std::nullopt;
            return d;
        }

        bool is_year(std::string_view s) {
            auto y = parse_int(s);
            return s.size() == 4 && y && *y >= 1900 && *y <= 2200;
        }

        /* Date phrase starting at token i: "[from|on] <day> [of] <month> [<year>]" or
         * "[from|on] <month> <day> [<year>]". Returns the date and the token past the phrase.
         * Year defaults to the note's year; a phrase landing after the note date is taken to
         * mean the previous year. */
        std::optional<std::pair<Date, std::size_t>> match_date(const std::vector<Token>& toks, std::size_t i,
                                                                const Date& doc_date) {
            const std::size_t n = toks.size();
            const int sentence = i < n ? toks[i].sentence : -1;
            auto at = [&](std::size_t k) -> const std::string* {
                return (k < n && toks[k].sentence == sentence) ? &toks[k].text : nullptr;
            };
            if (at(i) && (*at(i) == "from" || *at(i) == "on" || *at(i) == "since")) ++i;

            std::optional<int> day;
            std::optional<unsigned> month;
            std::size_t k = i;
            if (at(k) && (day = parse_day(*at(k)))) {
                ++k;
                if (at(k) && *at(k) == "of") ++k;
                if (!at(k) || !(month = month_from_name(*at(k)))) return std::nullopt;
                ++k;
            } else if (at(k) && (month = month_from_name(*at(k)))) {
                ++k;
                if (!at(k) || !(day = parse_day(*at(k)))) return std::nullopt;
                ++k;
            } else {
                return std::nullopt;
            }
            if (at(k) && *at(k) == ",") {
                if (at(k + 1) && is_year(*at(k + 1))) ++k;
            }
            int year = doc_date.year();
            bool explicit_year = false;
            if (at(k) && is_year(*at(k))) {
                year = *parse_int(*at(k));
                explicit_year = true;
                ++k;
            }
            try {
                Date d(year, *month, static_cast<unsigned>(*day));
                if (!explicit_year && d > doc_date) d = Date(year - 1, *month, static_cast<unsigned>(*day));
                return std::pair{d, k};
            } catch (const ParseError&) {
                return std::nullopt;
            }
        }

        const std::array<std::string_view, 16> kFamily{
            "wife", "husband", "mother", "father", "son", "daughter", "brother", "sister",
            "mum", "dad", "spouse", "partner", "sibling", "grandmother", "grandfather", "aunt"};

        bool is_family(std::string_view t) {
            if (t.ends_with("'s")) t.remove_suffix(2);
            return std::find(kFamily.begin(), kFamily.end(), t) != kFamily.end();
        }

        Experiencer experiencer_at(const std::vector<Token>& toks, std::size_t pos) {
            for (std::size_t back = 1; back <= static_cast<std::size_t>(kWindow) && back <= pos; ++back) {
                const auto& t = toks[pos - back];
                if (t.sentence != toks[pos].sentence) break;
                if (is_family(t.text)) return Experiencer::other;
            }
            return Experiencer::patient;
        }

        using Phrase = std::vector<std::string_view>;

        const std::vector<Phrase> kStopTriggers{
            {"stop"}, {"stopped"}, {"stopping"}, {"discontinue"}, {"discontinued"}, {"ceased"}, {"cease"},
            {"withdrawn"}, {"withdraw"}, {"didn't", "respond"}, {"did", "not", "respond"}, {"no", "response"},
            {"off"}, {"taper"}, {"tapered"}};
        const std::vector<Phrase> kStartTriggers{
            {"start"}, {"started"}, {"starting"}, {"commenced"}, {"commence"}, {"restarted"}, {"initiated"},
            {"prescribed"}, {"changed", "to"}, {"switched", "to"}, {"continue"}, {"continued"}, {"continues"},
            {"remains", "on"}};
        const std::vector<Phrase> kPostStopTriggers{{"stopped"}, {"discontinued"}, {"withdrawn"}, {"ceased"}};
        const std::vector<Phrase> kNegationTriggers{{"no"}, {"not"}, {"denies"}, {"without"}, {"ruled", "out"},
                                                    {"negative", "for"}};

        // Does `phrase` end exactly at token index `end` (inclusive), within sentence?
        bool phrase_ends_at(const std::vector<Token>& toks, std::size_t end, const Phrase& phrase) {
            if (phrase.size() > end + 1) return false;
            const std::size_t start = end + 1 - phrase.size();
            for (std::size_t k = 0; k < phrase.size(); ++k) {
                if (toks[start + k].text != phrase[k] || toks[start + k].sentence != toks[end].sentence) return false;
            }
            return true;
        }

        bool phrase_starts_at(const std::vector<Token>& toks, std::size_t start, const Phrase& phrase) {
            if (start + phrase.size() > toks.size()) return false;
            for (std::size_t k = 0; k < phrase.size(); ++k) {
                if (toks[start + k].text != phrase[k] || toks[start + k].sentence != toks[start].sentence) return false;
            }
            return true;
        }

        enum class Context { none, start, stop };

        // Nearest trigger ending within the window before `pos` decides the context.
        Context preceding_context(const std::vector<Token>& toks, std::size_t pos, std::size_t first,
                                  const std::vector<Phrase>& stops, const std::vector<Phrase>& starts) {
            for (std::size_t back = 1; back <= static_cast<std::size_t>(kWindow) && back <= pos - first; ++back) {
                const std::size_t end = pos - back;
                if (toks[end].sentence != toks[pos].sentence) break;
                for (const auto& p : stops) {
                    if (phrase_ends_at(toks, end, p)) return Context::stop;
                }
                for (const auto& p : starts) {
                    if (phrase_ends_at(toks, end, p)) return Context::start;
                }
            }
            return Context::none;
        }

        bool followed_by_stop(const std::vector<Token>& toks, std::size_t pos, std::size_t len) {
            // "<drug> was stopped", "<drug> discontinued"
            for (std::size_t fwd = 0; fwd < 3; ++fwd) {
                const std::size_t s = pos + len + fwd;
                if (s >= toks.size() || toks[s].sentence != toks[pos].sentence) break;
                for (const auto& p : kPostStopTriggers) {
                    if (phrase_starts_at(toks, s, p)) return true;
                }
                if (toks[s].text != "was" && toks[s].text != "is" && toks[s].text != "been" && toks[s].text != "has" &&
                    toks[s].text != "were") {
                    break;
                }
            }
            return false;
        }

        std::string trim(std::string s) {
            auto not_space = [](unsigned char c) { return !std::isspace(c); };
            s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
            s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
            return s;
        }
    }

    // --- Lexicon --------------------------------------------------------------------------------

    void Lexicon::add(const std::string& surface, const std::string& normalised) {
        const std::string s = lower(trim(surface));
        const std::string n = lower(trim(normalised));
        if (s.empty()) throw DataError("lexicon surface form is empty");
        if (n.empty()) throw DataError("lexicon entry '" + s + "' has an empty normalised name");
        entries_[s] = n;
    }

    Lexicon Lexicon::from_csv_text(const std::string& text) {
        Lexicon lex;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty() || line[0] == '#') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw ParseError("lexicon row needs two columns", lineno);
            const std::string surface = trim(line.substr(0, comma));
            const std::string normalised = trim(line.substr(comma + 1));
            if (lineno == 1 && lower(surface) == "surface") continue;
            try {
                lex.add(surface, normalised);
            } catch (const DataError& e) {
                throw ParseError(e.what(), lineno);
            }
        }
        return lex;
    }

    Lexicon Lexicon::from_csv(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open lexicon '" + path.string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return from_csv_text(buf.str());
    }

    Lexicon Lexicon::dementia_drugs() {
        Lexicon lex;
        for (const auto& [s, n] : std::vector<std::pair<std::string, std::string>>{
                 {"donepezil", "donepezil"},       {"aricept", "donepezil"},      {"rivastigmine", "rivastigmine"},
                 {"exelon", "rivastigmine"},       {"galantamine", "galantamine"}, {"reminyl", "galantamine"},
                 {"memantine", "memantine"},       {"ebixa", "memantine"},         {"namenda", "memantine"}}) {
            lex.add(s, n);
        }
        return lex;
    }

    std::optional<std::string> Lexicon::lookup(const std::string& surface) const {
        const std::string s = lower(surface);
        if (auto it = entries_.find(s); it != entries_.end()) return it->second;
        // Fuzzy pass; first best match in surface order keeps it deterministic.
        const std::string* best = nullptr;
        for (const auto& [form, norm] : entries_) {
            if (form.size() < 6) continue;
            if (s.size() + 1 < form.size() || s.size() > form.size() + 1) continue;
            if (damerau_levenshtein(s, form) <= 1) {
                best = &norm;
                break;
            }
        }
        if (best) return *best;
        return std::nullopt;
    }

    std::vector<std::string> Lexicon::normalised_names() const {
        std::vector<std::string> out;
        for (const auto& [s, n] : entries_) out.push_back(n);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
        const std::size_t n = a.size();
        const std::size_t m = b.size();
        std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1));
        for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
        for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 1; j <= m; ++j) {
                const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
                dp[i][j] = std::min({dp[i - 1][j] + 1, dp[i][j - 1] + 1, dp[i - 1][j - 1] + cost});
                if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
                    dp[i][j] = std::min(dp[i][j], dp[i - 2][j - 2] + 1);
                }
            }
        }
        return dp[n][m];
    }

    // --- extraction -----------------------------------------------------------------------------

    std::vector<ExtractedEvent> extract_mmse(const Note& note) {
        const auto toks = tokenize(fold_quotes(note.text));
        std::vector<ExtractedEvent> out;

        // Sentences that mention the instrument.
        std::vector<bool> mentions;
        for (const auto& t : toks) {
            if (static_cast<std::size_t>(t.sentence) >= mentions.size()) mentions.resize(t.sentence + 1, false);
            if (t.text == "mmse") mentions[static_cast<std::size_t>(t.sentence)] = true;
        }

        for (std::size_t i = 0; i < toks.size(); ++i) {
            const auto& t = toks[i];
            std::optional<int> score;
            if (mentions[static_cast<std::size_t>(t.sentence)]) score = parse_out_of_thirty(t.text);
            // "MMSE <n>", allowing a few filler tokens
            if (!score && i > 0) {
                std::size_t k = i;
                while (k > 0) {
                    const auto& prev = toks[k - 1].text;
                    if (prev == "score" || prev == "was" || prev == "of" || prev == "is" || prev == ":" ||
                        prev == "=" || prev == "today") {
                        --k;
                    } else {
                        break;
                    }
                    if (i - k > 3) break;
                }
                if (k > 0 && toks[k - 1].text == "mmse" && toks[k - 1].sentence == t.sentence) score = parse_int(t.text);
            }
            if (!score) continue;
            if (*score < 0 || *score > 30) continue;

            ExtractedEvent e;
            e.kind = EventKind::mmse;
            e.value = *score;
            e.date = note.doc_date;
            e.experiencer = experiencer_at(toks, i);
            for (std::size_t k = i + 1; k < toks.size() && k <= i + 4; ++k) {
                if (toks[k].sentence != t.sentence || parse_out_of_thirty(toks[k].text)) break;
                if (auto m = match_date(toks, k, note.doc_date)) {
                    e.date = m->first;
                    break;
                }
            }
            out.push_back(std::move(e));
        }
        return out;
    }

    std::vector<ExtractedEvent> extract_medications(const Note& note, const Lexicon& lex) {
        if (lex.empty()) throw DomainError("medication lexicon is empty");
        const auto toks = tokenize(fold_quotes(note.text));
        std::vector<ExtractedEvent> out;

        std::size_t max_words = 1;
        for (const auto& [form, norm] : lex.entries()) {
            max_words = std::max<std::size_t>(max_words, 1 + std::count(form.begin(), form.end(), ' '));
        }

        std::size_t i = 0;
        while (i < toks.size()) {
            std::optional<std::string> drug;
            std::size_t len = 0;
            for (std::size_t w = std::min(max_words, toks.size() - i); w >= 1 && !drug; --w) {
                std::string phrase = toks[i].text;
                for (std::size_t k = 1; k < w; ++k) phrase += " " + toks[i + k].text;
                if (w == 1 && !std::isalpha(static_cast<unsigned char>(phrase[0]))) break;
                if (auto hit = lex.lookup(phrase)) {
                    drug = hit;
                    len = w;
                }
            }
            if (!drug) {
                ++i;
                continue;
            }

            ExtractedEvent e;
            e.date = note.doc_date;
            e.value = *drug;
            e.experiencer = experiencer_at(toks, i);
            Context ctx = preceding_context(toks, i, 0, kStopTriggers, kStartTriggers);
            if (ctx != Context::stop && followed_by_stop(toks, i, len)) ctx = Context::stop;
            e.kind = ctx == Context::stop ? EventKind::medication_stop : EventKind::medication_start;
            e.negated = ctx == Context::stop;
            out.push_back(std::move(e));
            i += len;
        }
        return out;
    }

    std::vector<ExtractedEvent> extract_diagnoses(const Note& note) {
        const auto toks = tokenize(fold_quotes(note.text));
        std::vector<ExtractedEvent> out;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const auto& t = toks[i].text;
            std::string label;
            if (t.starts_with("alzheimer")) {
                label = "alzheimers_disease";
            } else if (t == "dementia") {
                if (i > 0 && toks[i - 1].text == "vascular") {
                    label = "vascular_dementia";
                } else if (i > 1 && toks[i - 1].text == "body" && toks[i - 2].text == "lewy") {
                    label = "lewy_body_dementia";
                } else if (i > 0 && toks[i - 1].text.starts_with("alzheimer")) {
                    continue;  // "Alzheimer's dementia" already counted
                } else {
                    label = "dementia";
                }
            } else {
                continue;
            }
            ExtractedEvent e;
            e.kind = EventKind::diagnosis;
            e.value = label;
            e.date = note.doc_date;
            e.experiencer = experiencer_at(toks, i);
            for (std::size_t back = 1; back <= static_cast<std::size_t>(kWindow) && back <= i; ++back) {
                if (toks[i - back].sentence != toks[i].sentence) break;
                bool hit = false;
                for (const auto& p : kNegationTriggers) hit = hit || phrase_ends_at(toks, i - back, p);
                if (hit) {
                    e.negated = true;
                    break;
                }
            }
            out.push_back(std::move(e));
        }
        return out;
    }

    std::vector<ExtractedEvent> extract_events(const Note& note, const Lexicon& lex) {
        auto events = extract_mmse(note);
        auto meds = extract_medications(note, lex);
        auto dx = extract_diagnoses(note);
        events.insert(events.end(), meds.begin(), meds.end());
        events.insert(events.end(), dx.begin(), dx.end());
        std::sort(events.begin(), events.end(), event_less);
        return events;
    }

    PatientTimeline build_timeline(const std::vector<Note>& notes, const Lexicon& lex) {
        PatientTimeline tl;
        if (!notes.empty()) tl.patient_id = notes.front().patient_id;
        for (const auto& n : notes) {
            if (n.patient_id != tl.patient_id) {
                throw DataError("build_timeline got notes for '" + tl.patient_id + "' and '" + n.patient_id + "'");
            }
            auto ev = extract_events(n, lex);
            tl.events.insert(tl.events.end(), ev.begin(), ev.end());
        }
        tl.normalise();
        if (tl.events.empty()) diag::warn("no events extracted for patient '" + tl.patient_id + "'");
        return tl;
    }

    std::vector<PatientTimeline> build_timelines(const std::vector<Note>& notes, const Lexicon& lex) {
        std::map<std::string, std::vector<Note>> by_patient;
        for (const auto& n : notes) by_patient[n.patient_id].push_back(n);
        std::vector<const std::vector<Note>*> groups;
        for (const auto& [id, g] : by_patient) groups.push_back(&g);

        std::vector<PatientTimeline> out(groups.size());
        std::exception_ptr failure;
        const auto n = static_cast<std::ptrdiff_t>(groups.size());
        #pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = build_timeline(*groups[static_cast<std::size_t>(i)], lex);
            } catch (...) {
                #pragma omp critical(sigsurv_timeline_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return out;
    }

}  // namespace sigsurv
