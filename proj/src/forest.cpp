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

#include "sigsurv/forest.hpp"

#include "sigsurv/diagnostics.hpp"
#include "sigsurv/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace sigsurv {

    using json = nlohmann::json;

    FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) {
            throw ShapeError(fmt::format("feature buffer has {} values, expected {}x{}", data_.size(), rows, cols));
        }
    }

    FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
        FeatureMatrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
        }
        return out;
    }

    void ForestParams::validate() const {
        if (n_trees < 1) throw ConfigError("forest.n_trees: must be >= 1");
        if (mtry < 0) throw ConfigError("forest.mtry: must be >= 0");
        if (min_samples_leaf < 1) throw ConfigError("forest.min_samples_leaf: must be >= 1");
        if (min_events_leaf < 0) throw ConfigError("forest.min_events_leaf: must be >= 0");
        if (n_split_candidates < 1) throw ConfigError("forest.n_split_candidates: must be >= 1");
        if (max_depth < 0) throw ConfigError("forest.max_depth: must be >= 0");
    }

    std::uint64_t tree_seed(std::uint64_t master, std::size_t tree) {
        // splitmix64 of the master seed offset by the tree index
        std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(tree) + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    namespace detail {
        double sorted_logrank(std::span<const double> times, std::span<const std::uint8_t> events,
                              std::span<const std::uint8_t> goes_left) {
            double n = static_cast<double>(times.size());
            double n_left = 0.0;
            for (auto g : goes_left) n_left += g;
            double o_minus_e = 0.0;
            double variance = 0.0;
            std::size_t i = 0;
            while (i < times.size()) {
                std::size_t j = i;
                double d = 0.0;
                double d_left = 0.0;
                double removed_left = 0.0;
                while (j < times.size() && times[j] == times[i]) {
                    d += events[j];
                    d_left += events[j] & goes_left[j];
                    removed_left += goes_left[j];
                    ++j;
                }
                if (d > 0.0) {
                    const double frac = n_left / n;
                    o_minus_e += d_left - d * frac;
                    if (n > 1.0) variance += d * frac * (1.0 - frac) * (n - d) / (n - 1.0);
                }
                n -= static_cast<double>(j - i);
                n_left -= removed_left;
                i = j;
            }
            if (variance <= 0.0) return 0.0;
            return std::abs(o_minus_e) / std::sqrt(variance);
        }
    }

    namespace {
        double risk_mass_of(const std::vector<std::pair<std::uint32_t, double>>& chf, std::size_t grid_size) {
            double mass = 0.0;
            double prev = 0.0;
            for (const auto& [g, h] : chf) {
                mass += (h - prev) * static_cast<double>(grid_size - g);
                prev = h;
            }
            return mass;
        }

        struct TrainingData {
            const FeatureMatrix& x;
            std::span<const SurvivalOutcome> y;
            std::vector<double> grid;               // distinct event times
            std::vector<std::uint32_t> grid_index;  // per sample, position of its time in grid (events only)
        };

        TrainingData prepare(const FeatureMatrix& x, std::span<const SurvivalOutcome> y) {
            if (x.rows() != y.size()) {
                throw ShapeError(fmt::format("feature matrix has {} rows for {} outcomes", x.rows(), y.size()));
            }
            if (x.cols() == 0) throw ShapeError("feature matrix has no columns");
            TrainingData data{x, y, {}, {}};
            std::size_t events = 0;
            for (const auto& o : y) {
                if (o.event) {
                    data.grid.push_back(o.time);
                    ++events;
                }
            }
            if (events < 2) throw DataError(fmt::format("survival forest needs at least 2 events, got {}", events));
            std::sort(data.grid.begin(), data.grid.end());
            data.grid.erase(std::unique(data.grid.begin(), data.grid.end()), data.grid.end());
            data.grid_index.resize(y.size(), 0);
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i].event) {
                    data.grid_index[i] = static_cast<std::uint32_t>(
                        std::lower_bound(data.grid.begin(), data.grid.end(), y[i].time) - data.grid.begin());
                }
            }
            return data;
        }

        class TreeGrower {
        public:
            TreeGrower(const TrainingData& data, const ForestParams& params, std::uint64_t seed)
                : data_(data), params_(params), rng_(seed) {
                tree_.seed = seed;
                const std::size_t p = data.x.cols();
                mtry_ = params.mtry > 0 ? std::min<std::size_t>(static_cast<std::size_t>(params.mtry), p)
                                        : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(p))));
            }

            SurvivalTree grow() {
                const std::size_t n = data_.y.size();
                if (params_.bootstrap) {
                    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
                    samples_.resize(n);
                    for (auto& s : samples_) s = pick(rng_);
                } else {
                    samples_.resize(n);
                    std::iota(samples_.begin(), samples_.end(), 0);
                }
                features_.resize(data_.x.cols());

                struct Pending {
                    std::int32_t node;
                    std::size_t begin;
                    std::size_t end;
                    int depth;
                };
                tree_.nodes.emplace_back();
                std::vector<Pending> stack{{0, 0, samples_.size(), 0}};
                while (!stack.empty()) {
                    const Pending job = stack.back();
                    stack.pop_back();
                    const auto split = find_split(job.begin, job.end, job.depth);
                    if (!split) {
                        make_leaf(job.node, job.begin, job.end);
                        continue;
                    }
                    auto first = samples_.begin() + static_cast<std::ptrdiff_t>(job.begin);
                    auto last = samples_.begin() + static_cast<std::ptrdiff_t>(job.end);
                    auto mid = std::stable_partition(first, last, [&](std::size_t s) {
                        return data_.x(s, static_cast<std::size_t>(split->feature)) <= split->threshold;
                    });
                    const std::size_t m = job.begin + static_cast<std::size_t>(mid - first);
                    const auto left = static_cast<std::int32_t>(tree_.nodes.size());
                    tree_.nodes.emplace_back();
                    tree_.nodes.emplace_back();
                    auto& node = tree_.nodes[static_cast<std::size_t>(job.node)];
                    node.feature = split->feature;
                    node.threshold = split->threshold;
                    node.left = left;
                    node.right = left + 1;
                    // Right child is pushed first so the left subtree is grown first.
                    stack.push_back({left + 1, m, job.end, job.depth + 1});
                    stack.push_back({left, job.begin, m, job.depth + 1});
                }
                return std::move(tree_);
            }

        private:
            struct Split {
                int feature;
                double threshold;
            };

            std::optional<Split> find_split(std::size_t begin, std::size_t end, int depth) {
                const std::size_t n = end - begin;
                if (params_.max_depth > 0 && depth >= params_.max_depth) return std::nullopt;
                if (n < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) return std::nullopt;
                std::size_t events = 0;
                for (std::size_t i = begin; i < end; ++i) events += data_.y[samples_[i]].event;
                if (events < 2 * static_cast<std::size_t>(params_.min_events_leaf) || events == 0) return std::nullopt;

                auto first = samples_.begin() + static_cast<std::ptrdiff_t>(begin);
                auto last = samples_.begin() + static_cast<std::ptrdiff_t>(end);
                std::sort(first, last, [&](std::size_t a, std::size_t b) {
                    const double ta = data_.y[a].time;
                    const double tb = data_.y[b].time;
                    return ta < tb || (ta == tb && a < b);
                });
                times_.resize(n);
                events_.resize(n);
                goes_left_.resize(n);
                values_.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    times_[i] = data_.y[samples_[begin + i]].time;
                    events_[i] = data_.y[samples_[begin + i]].event ? 1 : 0;
                }

                std::iota(features_.begin(), features_.end(), 0);
                for (std::size_t k = 0; k < mtry_; ++k) {
                    std::uniform_int_distribution<std::size_t> pick(k, features_.size() - 1);
                    std::swap(features_[k], features_[pick(rng_)]);
                }

                std::optional<Split> best;
                double best_score = 0.0;
                std::uniform_int_distribution<std::size_t> pick_sample(0, n - 1);
                for (std::size_t k = 0; k < mtry_; ++k) {
                    const std::size_t f = features_[k];
                    double lo = INFINITY;
                    double hi = -INFINITY;
                    for (std::size_t i = 0; i < n; ++i) {
                        values_[i] = data_.x(samples_[begin + i], f);
                        lo = std::min(lo, values_[i]);
                        hi = std::max(hi, values_[i]);
                    }
                    if (!(lo < hi)) continue;
                    candidates_.clear();
                    for (int c = 0; c < params_.n_split_candidates; ++c) {
                        const double v = values_[pick_sample(rng_)];
                        if (v < hi) candidates_.push_back(v);
                    }
                    std::sort(candidates_.begin(), candidates_.end());
                    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
                    for (double thr : candidates_) {
                        std::size_t n_left = 0;
                        std::size_t e_left = 0;
                        for (std::size_t i = 0; i < n; ++i) {
                            goes_left_[i] = values_[i] <= thr ? 1 : 0;
                            n_left += goes_left_[i];
                            e_left += goes_left_[i] & events_[i];
                        }
                        const std::size_t min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
                        const std::size_t min_ev = static_cast<std::size_t>(params_.min_events_leaf);
                        if (n_left < min_leaf || n - n_left < min_leaf) continue;
                        if (e_left < min_ev || events - e_left < min_ev) continue;
                        const double score = detail::sorted_logrank(times_, events_, goes_left_);
                        if (score > best_score) {
                            best_score = score;
                            best = Split{static_cast<int>(f), thr};
                        }
                    }
                }
                return best;
            }

            void make_leaf(std::int32_t node, std::size_t begin, std::size_t end) {
                std::vector<std::size_t> members(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                 samples_.begin() + static_cast<std::ptrdiff_t>(end));
                std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
                    return data_.y[a].time < data_.y[b].time;
                });
                SurvivalTree::Leaf leaf;
                double at_risk = static_cast<double>(members.size());
                double cum = 0.0;
                std::size_t i = 0;
                while (i < members.size()) {
                    const double t = data_.y[members[i]].time;
                    std::size_t j = i;
                    double d = 0.0;
                    std::uint32_t g = 0;
                    while (j < members.size() && data_.y[members[j]].time == t) {
                        if (data_.y[members[j]].event) {
                            d += 1.0;
                            g = data_.grid_index[members[j]];
                        }
                        ++j;
                    }
                    if (d > 0.0) {
                        cum += d / at_risk;
                        leaf.chf.emplace_back(g, cum);
                    }
                    at_risk -= static_cast<double>(j - i);
                    i = j;
                }
                leaf.risk_mass = risk_mass_of(leaf.chf, data_.grid.size());
                tree_.nodes[static_cast<std::size_t>(node)].leaf = static_cast<std::int32_t>(tree_.leaves.size());
                tree_.leaves.push_back(std::move(leaf));
            }

            const TrainingData& data_;
            const ForestParams& params_;
            std::mt19937_64 rng_;
            std::size_t mtry_ = 1;
            SurvivalTree tree_;
            std::vector<std::size_t> samples_;
            std::vector<std::size_t> features_;
            std::vector<double> times_;
            std::vector<std::uint8_t> events_;
            std::vector<std::uint8_t> goes_left_;
            std::vector<double> values_;
            std::vector<double> candidates_;
        };

        SurvivalForestModel make_model(const TrainingData& data, const ForestParams& params, std::uint64_t seed,
                                       std::string schema_id) {
            SurvivalForestModel model;
            model.schema_id = std::move(schema_id);
            model.n_features = data.x.cols();
            model.params = params;
            model.seed = seed;
            model.time_grid = data.grid;
            model.trees.resize(static_cast<std::size_t>(params.n_trees));
            return model;
        }

        void warn_if_degenerate(const SurvivalForestModel& model) {
            const bool all_stumps = std::all_of(model.trees.begin(), model.trees.end(),
                                                [](const SurvivalTree& t) { return t.nodes.size() == 1; });
            if (all_stumps) diag::warn("survival forest found no admissible split; every tree is a single leaf");
        }

        double mean_risk(const SurvivalForestModel& model, std::span<const double> x) {
            double total = 0.0;
            for (const auto& tree : model.trees) total += tree.leaf_for(x).risk_mass;
            return total / static_cast<double>(model.trees.size());
        }
    }

    const SurvivalTree::Leaf& SurvivalTree::leaf_for(std::span<const double> x) const {
        std::size_t i = 0;
        while (nodes[i].feature >= 0) {
            const auto& nd = nodes[i];
            i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right);
        }
        return leaves[static_cast<std::size_t>(nodes[i].leaf)];
    }

    void SurvivalForestModel::check_input(std::span<const double> x) const {
        if (x.size() != n_features) {
            throw ShapeError(fmt::format("feature vector has {} values, model '{}' expects {}", x.size(), schema_id,
                                         n_features));
        }
    }

    SurvivalForestModel fit_survival_forest(const FeatureMatrix& x, std::span<const SurvivalOutcome> y,
                                            const ForestParams& params, std::uint64_t seed, std::string schema_id) {
        params.validate();
        const TrainingData data = prepare(x, y);
        SurvivalForestModel model = make_model(data, params, seed, std::move(schema_id));
        std::exception_ptr failure;
        const auto n = static_cast<std::ptrdiff_t>(model.trees.size());
        #pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            try {
                TreeGrower grower(data, params, tree_seed(seed, static_cast<std::size_t>(t)));
                model.trees[static_cast<std::size_t>(t)] = grower.grow();
            } catch (...) {
                #pragma omp critical(sigsurv_forest_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        warn_if_degenerate(model);
        return model;
    }

    double predict_risk(const SurvivalForestModel& model, std::span<const double> x) {
        model.check_input(x);
        return mean_risk(model, x);
    }

    std::vector<double> predict_risks(const SurvivalForestModel& model, const FeatureMatrix& x) {
        if (x.rows() > 0) model.check_input(x.row(0));
        std::vector<double> out(x.rows());
        const auto n = static_cast<std::ptrdiff_t>(x.rows());
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = mean_risk(model, x.row(static_cast<std::size_t>(i)));
        }
        return out;
    }

    std::vector<double> predict_cumulative_hazard(const SurvivalForestModel& model, std::span<const double> x) {
        model.check_input(x);
        std::vector<double> increments(model.time_grid.size() + 1, 0.0);
        for (const auto& tree : model.trees) {
            double prev = 0.0;
            for (const auto& [g, h] : tree.leaf_for(x).chf) {
                increments[g] += h - prev;
                prev = h;
            }
        }
        std::vector<double> out(model.time_grid.size());
        double cum = 0.0;
        for (std::size_t g = 0; g < out.size(); ++g) {
            cum += increments[g];
            out[g] = cum / static_cast<double>(model.trees.size());
        }
        return out;
    }

    namespace serial {
        SurvivalForestModel fit_survival_forest(const FeatureMatrix& x, std::span<const SurvivalOutcome> y,
                                                const ForestParams& params, std::uint64_t seed,
                                                std::string schema_id) {
            params.validate();
            const TrainingData data = prepare(x, y);
            SurvivalForestModel model = make_model(data, params, seed, std::move(schema_id));
            for (std::size_t t = 0; t < model.trees.size(); ++t) {
                TreeGrower grower(data, params, tree_seed(seed, t));
                model.trees[t] = grower.grow();
            }
            warn_if_degenerate(model);
            return model;
        }

        std::vector<double> predict_risks(const SurvivalForestModel& model, const FeatureMatrix& x) {
            std::vector<double> out;
            out.reserve(x.rows());
            for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(predict_risk(model, x.row(i)));
            return out;
        }
    }

    // --- persistence ----------------------------------------------------------------------------

    std::string SurvivalForestModel::to_json_text() const {
        json j;
        j["format"] = "sigsurv-forest";
        j["version"] = kFormatVersion;
        j["schema_id"] = schema_id;
        j["n_features"] = n_features;
        j["seed"] = seed;
        j["params"] = {{"n_trees", params.n_trees},
                       {"mtry", params.mtry},
                       {"min_samples_leaf", params.min_samples_leaf},
                       {"min_events_leaf", params.min_events_leaf},
                       {"n_split_candidates", params.n_split_candidates},
                       {"max_depth", params.max_depth},
                       {"bootstrap", params.bootstrap}};
        j["time_grid"] = time_grid;
        json trees_json = json::array();
        for (const auto& t : trees) {
            json nodes = json::array();
            for (const auto& nd : t.nodes) nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.leaf});
            json leaves = json::array();
            for (const auto& lf : t.leaves) {
                json steps = json::array();
                for (const auto& [g, h] : lf.chf) steps.push_back({g, h});
                leaves.push_back(std::move(steps));
            }
            trees_json.push_back({{"seed", t.seed}, {"nodes", std::move(nodes)}, {"leaves", std::move(leaves)}});
        }
        j["trees"] = std::move(trees_json);
        return j.dump() + "\n";
    }

    void SurvivalForestModel::save(const std::filesystem::path& path) const {
        std::error_code ec;
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write model file '" + path.string() + "'");
        out << to_json_text();
        if (!out) throw DataError("failed writing model file '" + path.string() + "'");
    }

    SurvivalForestModel SurvivalForestModel::from_json_text(const std::string& text) {
        SurvivalForestModel m;
        try {
            const json j = json::parse(text);
            if (j.at("format") != "sigsurv-forest") throw ParseError("not a sigsurv forest model");
            if (j.at("version").get<int>() != kFormatVersion) {
                throw ParseError(fmt::format("unsupported model version {}", j.at("version").get<int>()));
            }
            m.schema_id = j.at("schema_id").get<std::string>();
            m.n_features = j.at("n_features").get<std::size_t>();
            m.seed = j.at("seed").get<std::uint64_t>();
            const auto& p = j.at("params");
            m.params.n_trees = p.at("n_trees");
            m.params.mtry = p.at("mtry");
            m.params.min_samples_leaf = p.at("min_samples_leaf");
            m.params.min_events_leaf = p.at("min_events_leaf");
            m.params.n_split_candidates = p.at("n_split_candidates");
            m.params.max_depth = p.at("max_depth");
            m.params.bootstrap = p.at("bootstrap");
            m.time_grid = j.at("time_grid").get<std::vector<double>>();
            for (const auto& tj : j.at("trees")) {
                SurvivalTree t;
                t.seed = tj.at("seed").get<std::uint64_t>();
                for (const auto& nj : tj.at("nodes")) {
                    t.nodes.push_back({nj.at(0).get<int>(), nj.at(1).get<double>(), nj.at(2).get<std::int32_t>(),
                                       nj.at(3).get<std::int32_t>(), nj.at(4).get<std::int32_t>()});
                }
                for (const auto& lj : tj.at("leaves")) {
                    SurvivalTree::Leaf leaf;
                    double prev = 0.0;
                    for (const auto& sj : lj) {
                        const auto g = sj.at(0).get<std::uint32_t>();
                        const double h = sj.at(1).get<double>();
                        if (g >= m.time_grid.size()) throw ParseError("leaf step outside the time grid");
                        if (h < prev) throw ParseError("leaf cumulative hazard is decreasing");
                        leaf.chf.emplace_back(g, h);
                        prev = h;
                    }
                    leaf.risk_mass = risk_mass_of(leaf.chf, m.time_grid.size());
                    t.leaves.push_back(std::move(leaf));
                }
                for (const auto& nd : t.nodes) {
                    const auto nn = static_cast<std::int32_t>(t.nodes.size());
                    const auto nl = static_cast<std::int32_t>(t.leaves.size());
                    const bool ok = nd.feature < 0 ? (nd.leaf >= 0 && nd.leaf < nl)
                                                   : (static_cast<std::size_t>(nd.feature) < m.n_features &&
                                                      nd.left > 0 && nd.left < nn && nd.right > 0 && nd.right < nn);
                    if (!ok) throw ParseError("malformed tree node");
                }
                if (t.nodes.empty()) throw ParseError("tree without nodes");
                m.trees.push_back(std::move(t));
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("model file: ") + e.what());
        }
        if (m.trees.empty()) throw ParseError("model has no trees");
        return m;
    }

    SurvivalForestModel SurvivalForestModel::load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot open model file '" + path.string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return from_json_text(buf.str());
    }

}  // namespace sigsurv
