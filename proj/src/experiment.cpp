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

#include "sigsurv/experiment.hpp"

#include "sigsurv/baseline.hpp"
#include "sigsurv/diagnostics.hpp"
#include "sigsurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace sigsurv {

    using json = nlohmann::json;

    std::string_view to_string(Featuriser f) { return f == Featuriser::sig ? "sig" : "baseline"; }

    Featuriser parse_featuriser(std::string_view s) {
        if (s == "sig") return Featuriser::sig;
        if (s == "baseline" || s == "nonsig") return Featuriser::baseline;
        throw ConfigError("unknown featuriser '" + std::string(s) + "' (expected sig or baseline)");
    }

    std::vector<double> ExperimentConfig::default_grid() {
        std::vector<double> g;
        for (int m = 10; m <= 40; m += 2) g.push_back(m);
        return g;
    }

    int ExperimentConfig::level_for(FeatureSet fs) const {
        return fs == FeatureSet::time_mmse ? level_time_mmse : level_time_mmse_meds;
    }

    void ExperimentConfig::validate() const {
        if (k < 2) throw ConfigError("k: must be >= 2");
        if (feature_sets.empty()) throw ConfigError("feature_sets: must be nonempty");
        if (level_time_mmse < 1) throw ConfigError("level_time_mmse: must be >= 1");
        if (level_time_mmse_meds < 1) throw ConfigError("level_time_mmse_meds: must be >= 1");
        if (!(mmse_scale > 0.0)) throw ConfigError("mmse_scale: must be > 0");
        if (eval_grid.empty()) throw ConfigError("eval_grid: must be nonempty");
        for (std::size_t i = 0; i < eval_grid.size(); ++i) {
            if (!std::isfinite(eval_grid[i]) || eval_grid[i] <= 0.0) throw ConfigError("eval_grid: times must be > 0");
            if (i > 0 && eval_grid[i] <= eval_grid[i - 1]) throw ConfigError("eval_grid: must be strictly increasing");
        }
        forest.validate();
        cohort.validate();
    }

    namespace {

        // Typed field access with the dotted path in every message.
        class Reader {
        public:
            Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
                if (!j_.is_object()) throw ConfigError(where() + "expected an object");
            }

            template <class T>
            void get(const char* key, T& out) {
                seen_.insert(key);
                auto it = j_.find(key);
                if (it == j_.end()) return;
                const std::string field = path_.empty() ? key : path_ + "." + key;
                if constexpr (std::is_same_v<T, bool>) {
                    if (!it->is_boolean()) throw ConfigError(field + ": expected a boolean");
                    out = it->template get<bool>();
                } else if constexpr (std::is_integral_v<T>) {
                    if (!it->is_number_integer()) throw ConfigError(field + ": expected an integer");
                    if (std::is_unsigned_v<T> && it->is_number_unsigned() == false && it->template get<long long>() < 0) {
                        throw ConfigError(field + ": expected a non-negative integer");
                    }
                    out = it->template get<T>();
                } else if constexpr (std::is_floating_point_v<T>) {
                    if (!it->is_number()) throw ConfigError(field + ": expected a number");
                    out = it->template get<T>();
                } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
                    if (!it->is_array()) throw ConfigError(field + ": expected an array of strings");
                    out.clear();
                    for (const auto& v : *it) {
                        if (!v.is_string()) throw ConfigError(field + ": expected an array of strings");
                        out.push_back(v.template get<std::string>());
                    }
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    if (!it->is_array()) throw ConfigError(field + ": expected an array of numbers");
                    out.clear();
                    for (const auto& v : *it) {
                        if (!v.is_number()) throw ConfigError(field + ": expected an array of numbers");
                        out.push_back(v.template get<double>());
                    }
                }
            }

            const json* child(const char* key) {
                seen_.insert(key);
                auto it = j_.find(key);
                return it == j_.end() ? nullptr : &*it;
            }

            std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

            void finish() const {
                for (auto it = j_.begin(); it != j_.end(); ++it) {
                    if (!seen_.count(it.key())) throw ConfigError(child_path(it.key().c_str()) + ": unknown field");
                }
            }

        private:
            std::string where() const { return path_.empty() ? "" : path_ + ": "; }
            const json& j_;
            std::string path_;
            std::set<std::string> seen_;
        };

        void read_cohort(const json& j, const std::string& path, CohortSpec& s) {
            Reader r(j, path);
            r.get("seed", s.seed);
            r.get("n_died", s.n_died);
            r.get("n_censored", s.n_censored);
            r.get("died_mean", s.died_mean);
            r.get("died_std", s.died_std);
            r.get("censored_mean", s.censored_mean);
            r.get("censored_std", s.censored_std);
            r.get("drugs", s.drugs);
            r.get("window_months", s.window_months);
            r.get("min_visits", s.min_visits);
            r.get("max_visits", s.max_visits);
            r.get("mmse_start_mean", s.mmse_start_mean);
            r.get("mmse_start_sd", s.mmse_start_sd);
            r.get("slope_early_mean", s.slope_early_mean);
            r.get("slope_early_sd", s.slope_early_sd);
            r.get("slope_late_mean", s.slope_late_mean);
            r.get("slope_late_sd", s.slope_late_sd);
            r.get("mmse_noise_sd", s.mmse_noise_sd);
            r.get("change_point", s.change_point);
            r.get("effect_end_mmse", s.effect_end_mmse);
            r.get("effect_late_slope", s.effect_late_slope);
            r.get("effect_slope", s.effect_slope);
            r.get("effect_early_switch", s.effect_early_switch);
            r.get("med_effect_onset", s.med_effect_onset);
            r.finish();
        }

        json cohort_json(const CohortSpec& s) {
            return json{{"seed", s.seed},
                        {"n_died", s.n_died},
                        {"n_censored", s.n_censored},
                        {"died_mean", s.died_mean},
                        {"died_std", s.died_std},
                        {"censored_mean", s.censored_mean},
                        {"censored_std", s.censored_std},
                        {"drugs", s.drugs},
                        {"window_months", s.window_months},
                        {"min_visits", s.min_visits},
                        {"max_visits", s.max_visits},
                        {"mmse_start_mean", s.mmse_start_mean},
                        {"mmse_start_sd", s.mmse_start_sd},
                        {"slope_early_mean", s.slope_early_mean},
                        {"slope_early_sd", s.slope_early_sd},
                        {"slope_late_mean", s.slope_late_mean},
                        {"slope_late_sd", s.slope_late_sd},
                        {"mmse_noise_sd", s.mmse_noise_sd},
                        {"change_point", s.change_point},
                        {"effect_end_mmse", s.effect_end_mmse},
                        {"effect_late_slope", s.effect_late_slope},
                        {"effect_slope", s.effect_slope},
                        {"effect_early_switch", s.effect_early_switch},
                        {"med_effect_onset", s.med_effect_onset}};
        }

        json parse_json(const std::string& text) {
            try {
                return json::parse(text);
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
        }

    }  // namespace

    ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
        const json j = parse_json(text);
        ExperimentConfig cfg;
        Reader r(j, "");
        r.get("seed", cfg.seed);
        r.get("k", cfg.k);
        std::vector<std::string> fs;
        r.get("feature_sets", fs);
        if (j.contains("feature_sets")) {
            cfg.feature_sets.clear();
            for (const auto& s : fs) {
                try {
                    cfg.feature_sets.push_back(parse_feature_set(s));
                } catch (const ConfigError& e) {
                    throw ConfigError(std::string("feature_sets: ") + e.what());
                }
            }
        }
        r.get("level_time_mmse", cfg.level_time_mmse);
        r.get("level_time_mmse_meds", cfg.level_time_mmse_meds);
        r.get("mmse_scale", cfg.mmse_scale);
        r.get("eval_grid", cfg.eval_grid);
        if (const json* f = r.child("forest")) {
            Reader fr(*f, "forest");
            fr.get("n_trees", cfg.forest.n_trees);
            fr.get("mtry", cfg.forest.mtry);
            fr.get("min_samples_leaf", cfg.forest.min_samples_leaf);
            fr.get("min_events_leaf", cfg.forest.min_events_leaf);
            fr.get("n_split_candidates", cfg.forest.n_split_candidates);
            fr.get("max_depth", cfg.forest.max_depth);
            fr.get("bootstrap", cfg.forest.bootstrap);
            fr.finish();
        }
        if (const json* c = r.child("cohort")) read_cohort(*c, "cohort", cfg.cohort);
        r.finish();
        cfg.validate();
        return cfg;
    }

    ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return from_json_text(buf.str());
    }

    std::string ExperimentConfig::to_json_text() const {
        json fs = json::array();
        for (auto f : feature_sets) fs.push_back(std::string(to_string(f)));
        json j{{"seed", seed},
               {"k", k},
               {"feature_sets", fs},
               {"level_time_mmse", level_time_mmse},
               {"level_time_mmse_meds", level_time_mmse_meds},
               {"mmse_scale", mmse_scale},
               {"eval_grid", eval_grid},
               {"forest",
                {{"n_trees", forest.n_trees},
                 {"mtry", forest.mtry},
                 {"min_samples_leaf", forest.min_samples_leaf},
                 {"min_events_leaf", forest.min_events_leaf},
                 {"n_split_candidates", forest.n_split_candidates},
                 {"max_depth", forest.max_depth},
                 {"bootstrap", forest.bootstrap}}},
               {"cohort", cohort_json(cohort)}};
        return j.dump(2) + "\n";
    }

    CohortSpec cohort_spec_from_json_text(const std::string& text) {
        CohortSpec spec;
        read_cohort(parse_json(text), "", spec);
        spec.validate();
        return spec;
    }

    std::string cohort_spec_to_json_text(const CohortSpec& spec) { return cohort_json(spec).dump(2) + "\n"; }

    std::vector<int> stratified_kfold(std::span<const SurvivalOutcome> outcomes, int k, std::uint64_t seed) {
        if (k < 2) throw DomainError("stratified_kfold: k must be >= 2");
        if (static_cast<std::size_t>(k) > outcomes.size()) {
            throw DomainError(fmt::format("stratified_kfold: k={} exceeds the number of samples {}", k, outcomes.size()));
        }
        std::vector<int> fold(outcomes.size(), -1);
        std::mt19937_64 rng(seed);
        std::size_t offset = 0;
        for (bool cls : {true, false}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < outcomes.size(); ++i) {
                if (outcomes[i].event == cls) idx.push_back(i);
            }
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return outcomes[a].time < outcomes[b].time; });
            std::shuffle(idx.begin(), idx.end(), rng);
            for (std::size_t p = 0; p < idx.size(); ++p) {
                fold[idx[p]] = static_cast<int>((offset + p) % static_cast<std::size_t>(k));
            }
            offset = (offset + idx.size()) % static_cast<std::size_t>(k);
        }
        return fold;
    }

    std::uint64_t fold_hash(std::span<const int> folds) {
        std::uint64_t h = 1469598103934665603ull;
        for (int f : folds) {
            for (int b = 0; b < 4; ++b) {
                h ^= static_cast<std::uint8_t>(static_cast<std::uint32_t>(f) >> (8 * b));
                h *= 1099511628211ull;
            }
        }
        return h;
    }

    std::string EvalReport::cell_id() const {
        return fmt::format("{}_{}", to_string(featuriser), to_string(feature_set));
    }

    std::string EvalReport::label() const {
        return fmt::format("{} {}", featuriser == Featuriser::sig ? "Sig" : "Non-sig",
                           feature_set == FeatureSet::time_mmse ? "{time,MMSE}" : "{time,MMSE,meds}");
    }

    namespace {

        std::vector<std::string> cohort_drugs(const std::vector<PatientTimeline>& cohort) {
            std::set<std::string> drugs;
            for (const auto& p : cohort) {
                for (const auto& e : p.events) {
                    if (e.kind == EventKind::medication_start || e.kind == EventKind::medication_stop) {
                        drugs.insert(e.name());
                    }
                }
            }
            return {drugs.begin(), drugs.end()};
        }

        FeatureMatrix to_matrix(const std::vector<FeatureVector>& rows) {
            const std::size_t p = rows.empty() ? 0 : rows.front().values.size();
            std::vector<double> data;
            data.reserve(rows.size() * p);
            for (const auto& r : rows) data.insert(data.end(), r.values.begin(), r.values.end());
            return FeatureMatrix(rows.size(), p, std::move(data));
        }

        double sample_std(const std::vector<double>& v) {
            if (v.size() < 2) return 0.0;
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            return std::sqrt(ss / static_cast<double>(v.size() - 1));
        }

    }  // namespace

    FeatureMatrix featurize_cell(const std::vector<PatientTimeline>& cohort, Featuriser f, FeatureSet fs,
                                 const ExperimentConfig& cfg, std::string* schema_id) {
        std::vector<FeatureVector> rows;
        if (f == Featuriser::sig) {
            PathEncodingConfig pc;
            pc.feature_set = fs;
            pc.truncation_level = cfg.level_for(fs);
            pc.mmse_scale = cfg.mmse_scale;
            if (fs == FeatureSet::time_mmse_meds) pc.medication_vocabulary = default_medication_vocabulary(cohort_drugs(cohort));
            rows = featurize_signatures(cohort, pc);
            if (schema_id) *schema_id = pc.schema_id();
        } else {
            rows = featurize_baselines(cohort, fs);
            if (schema_id) *schema_id = baseline_schema_id(fs);
        }
        return to_matrix(rows);
    }

    std::vector<EvalReport> run_experiment(const std::vector<PatientTimeline>& cohort, const ExperimentConfig& cfg) {
        cfg.validate();
        std::vector<SurvivalOutcome> outcomes;
        outcomes.reserve(cohort.size());
        for (const auto& p : cohort) {
            if (!p.outcome) throw DataError("patient '" + p.patient_id + "' has no outcome");
            outcomes.push_back(*p.outcome);
        }
        const std::vector<int> folds = stratified_kfold(outcomes, cfg.k, cfg.seed);
        const std::uint64_t fh = fold_hash(folds);

        std::vector<EvalReport> reports;
        std::size_t cell = 0;
        for (FeatureSet fs : cfg.feature_sets) {
            for (Featuriser f : {Featuriser::sig, Featuriser::baseline}) {
                ++cell;
                EvalReport rep;
                rep.featuriser = f;
                rep.feature_set = fs;
                rep.fold_hash = fh;
                const FeatureMatrix x = featurize_cell(cohort, f, fs, cfg, &rep.schema_id);
                rep.n_features = x.cols();
                const std::uint64_t cell_seed = tree_seed(cfg.seed, cell);

                for (int k = 0; k < cfg.k && !rep.aborted; ++k) {
                    std::vector<std::size_t> tr, te;
                    for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == k ? te : tr).push_back(i);
                    std::vector<SurvivalOutcome> ytr, yte;
                    for (auto i : tr) ytr.push_back(outcomes[i]);
                    for (auto i : te) yte.push_back(outcomes[i]);
                    if (std::none_of(ytr.begin(), ytr.end(), [](const SurvivalOutcome& o) { return o.event; })) {
                        rep.aborted = true;
                        rep.diagnostic = fmt::format("fold {}: no events in the training split", k);
                        break;
                    }
                    FoldResult fr;
                    fr.fold = k;
                    fr.n_train = tr.size();
                    fr.n_test = te.size();
                    try {
                        const auto model = fit_survival_forest(x.select_rows(tr), ytr, cfg.forest,
                                                               tree_seed(cell_seed, static_cast<std::size_t>(k)),
                                                               rep.schema_id);
                        const auto risks = predict_risks(model, x.select_rows(te));
                        fr.c_index = c_index(risks, yte);
                        fr.auc = cumulative_dynamic_auc(ytr, yte, risks, cfg.eval_grid);
                    } catch (const DataError& e) {
                        rep.aborted = true;
                        rep.diagnostic = fmt::format("fold {}: {}", k, e.what());
                        break;
                    }
                    rep.folds.push_back(std::move(fr));
                }
                if (rep.aborted) {
                    diag::warn(fmt::format("{}: cell aborted, {}", rep.label(), rep.diagnostic));
                    reports.push_back(std::move(rep));
                    continue;
                }

                std::vector<double> cs;
                for (const auto& fr : rep.folds) cs.push_back(fr.c_index);
                rep.c_mean = std::accumulate(cs.begin(), cs.end(), 0.0) / static_cast<double>(cs.size());
                rep.c_std = sample_std(cs);
                for (double t : cfg.eval_grid) {
                    double sum = 0.0;
                    int n = 0;
                    for (const auto& fr : rep.folds) {
                        for (const auto& a : fr.auc) {
                            if (a.time == t) {
                                sum += a.auc;
                                ++n;
                            }
                        }
                    }
                    if (n > 0) rep.mean_auc.push_back({t, sum / n});
                }
                reports.push_back(std::move(rep));
            }
        }
        for (const auto& r : reports) {
            if (r.fold_hash != fh) throw InvariantError("cells disagree on the fold assignment");
        }
        return reports;
    }

    std::string format_mean_std(double mean, double sd) { return fmt::format("{:.3f}({:.3f})", mean, sd); }

    std::string format_cindex_table(const std::vector<EvalReport>& reports) {
        auto find = [&](Featuriser f, FeatureSet fs) -> std::string {
            for (const auto& r : reports) {
                if (r.featuriser == f && r.feature_set == fs) {
                    return r.aborted ? std::string("aborted") : format_mean_std(r.c_mean, r.c_std);
                }
            }
            return "-";
        };
        std::string out = "C-index, mean(std) over folds\n";
        out += fmt::format("{:<20}{:>16}{:>16}\n", "features", "Sig", "Non-sig");
        for (FeatureSet fs : {FeatureSet::time_mmse, FeatureSet::time_mmse_meds}) {
            out += fmt::format("{:<20}{:>16}{:>16}\n",
                               fs == FeatureSet::time_mmse ? "{time,MMSE}" : "{time,MMSE,meds}",
                               find(Featuriser::sig, fs), find(Featuriser::baseline, fs));
        }
        return out;
    }

    namespace {

        void write_file(const std::filesystem::path& path, const std::string& content,
                        std::vector<std::filesystem::path>& written) {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw DataError("cannot write '" + path.string() + "'");
            out << content;
            out.close();
            if (!out) throw DataError("write failed for '" + path.string() + "'");
            written.push_back(path);
        }

        std::string auc_svg(const std::vector<EvalReport>& reports) {
            static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
            constexpr double W = 720, H = 440, L = 60, R = 200, T = 30, B = 50;
            double t0 = 1e300, t1 = -1e300, y0 = 0.5, y1 = 1.0;
            for (const auto& r : reports) {
                for (const auto& a : r.mean_auc) {
                    t0 = std::min(t0, a.time);
                    t1 = std::max(t1, a.time);
                    y0 = std::min(y0, std::floor(a.auc * 10.0) / 10.0);
                }
            }
            if (t0 > t1) {
                t0 = 0;
                t1 = 1;
            }
            if (t1 == t0) t1 = t0 + 1;
            auto sx = [&](double t) { return L + (t - t0) / (t1 - t0) * (W - L - R); };
            auto sy = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

            std::string s = fmt::format(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
                "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                W, H, W, H);
            s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", L, H - B, W - R, H - B);
            s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", L, T, L, H - B);
            for (int i = 0; i <= 5; ++i) {
                const double v = y0 + (y1 - y0) * i / 5.0;
                s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"end\">{:.2f}</text>\n",
                                 L - 6, sy(v) + 4, v);
                s += fmt::format("<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", L, sy(v),
                                 W - R, sy(v));
            }
            for (int i = 0; i <= 6; ++i) {
                const double t = t0 + (t1 - t0) * i / 6.0;
                s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"middle\">{:.0f}</text>\n",
                                 sx(t), H - B + 16, t);
            }
            s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\">"
                             "months since first visit</text>\n",
                             (L + W - R) / 2, H - 12);
            s += fmt::format("<text x=\"16\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\" "
                             "transform=\"rotate(-90 16 {:.1f})\">AUC(t)</text>\n",
                             (T + H - B) / 2, (T + H - B) / 2);
            std::size_t c = 0;
            for (const auto& r : reports) {
                const char* col = colours[c % 6];
                const double ly = T + 18.0 * static_cast<double>(c);
                ++c;
                if (r.mean_auc.empty()) {
                    diag::warn(fmt::format("{}: no AUC values, curve omitted from the chart", r.label()));
                    continue;
                }
                std::string pts;
                for (const auto& a : r.mean_auc) pts += fmt::format("{:.2f},{:.2f} ", sx(a.time), sy(a.auc));
                pts.pop_back();
                s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", col, pts);
                s += fmt::format("<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                                 W - R + 12, ly, W - R + 32, ly, col);
                s += fmt::format("<text x=\"{}\" y=\"{:.1f}\" font-size=\"11\">{}</text>\n", W - R + 38, ly + 4, r.label());
            }
            s += "</svg>\n";
            return s;
        }

    }  // namespace

    std::vector<std::filesystem::path> emit_outputs(const std::vector<EvalReport>& reports,
                                                    const std::filesystem::path& dir) {
        if (reports.empty()) throw DataError("emit_outputs: no reports");
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw DataError("cannot create '" + dir.string() + "': " + ec.message());

        std::vector<std::filesystem::path> written;
        write_file(dir / "cindex_table.txt", format_cindex_table(reports), written);

        std::string csv = "model,featuriser,feature_set,schema_id,n_features,c_index_mean,c_index_std,formatted\n";
        for (const auto& r : reports) {
            if (r.aborted) {
                csv += fmt::format("{},{},{},{},{},,,aborted\n", r.label(), to_string(r.featuriser),
                                   to_string(r.feature_set), r.schema_id, r.n_features);
            } else {
                csv += fmt::format("{},{},{},{},{},{:.6f},{:.6f},{}\n", r.label(), to_string(r.featuriser),
                                   to_string(r.feature_set), r.schema_id, r.n_features, r.c_mean, r.c_std,
                                   format_mean_std(r.c_mean, r.c_std));
            }
        }
        write_file(dir / "cindex_table.csv", csv, written);

        std::string auc = "model,months,auc\n";
        for (const auto& r : reports) {
            for (const auto& a : r.mean_auc) auc += fmt::format("{},{:g},{:.6f}\n", r.label(), a.time, a.auc);
        }
        write_file(dir / "auc_curves.csv", auc, written);
        write_file(dir / "auc_chart.svg", auc_svg(reports), written);

        for (const auto& r : reports) {
            std::set<double> grid;
            for (const auto& f : r.folds) {
                for (const auto& a : f.auc) grid.insert(a.time);
            }
            std::string s = "fold,n_train,n_test,c_index";
            for (double t : grid) s += fmt::format(",auc_{:g}", t);
            s += "\n";
            for (const auto& f : r.folds) {
                s += fmt::format("{},{},{},{:.6f}", f.fold, f.n_train, f.n_test, f.c_index);
                for (double t : grid) {
                    auto it = std::find_if(f.auc.begin(), f.auc.end(), [&](const AucPoint& a) { return a.time == t; });
                    s += it == f.auc.end() ? std::string(",") : fmt::format(",{:.6f}", it->auc);
                }
                s += "\n";
            }
            write_file(dir / fmt::format("folds_{}.csv", r.cell_id()), s, written);
        }
        return written;
    }

}  // namespace sigsurv
