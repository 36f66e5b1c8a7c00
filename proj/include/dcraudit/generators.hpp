#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcraudit/csv.hpp"
#include "dcraudit/rng.hpp"
#include "dcraudit/schema.hpp"

namespace dcraudit {

enum class GeneratorKind { IndHist, BayNet, PerfectLeaker, NullModel, UniqueValueLeaker };

inline const char* generator_kind_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::IndHist: return "IndHist";
        case GeneratorKind::BayNet: return "BayNet";
        case GeneratorKind::PerfectLeaker: return "PerfectLeaker";
        case GeneratorKind::NullModel: return "NullModel";
        default: return "UniqueValueLeaker";
    }
}

inline GeneratorKind generator_kind_from_name(const std::string& s) {
    if (s == "IndHist") return GeneratorKind::IndHist;
    if (s == "BayNet") return GeneratorKind::BayNet;
    if (s == "PerfectLeaker") return GeneratorKind::PerfectLeaker;
    if (s == "NullModel") return GeneratorKind::NullModel;
    if (s == "UniqueValueLeaker") return GeneratorKind::UniqueValueLeaker;
    throw UsageError("unknown generator kind '" + s + "'");
}

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::IndHist;
    std::size_t max_parents = 2;     // BayNet
    std::size_t bins = 10;           // BayNet quantile bins / IndHist equal-width bins
    double laplace_alpha = 1.0;      // BayNet CPT smoothing
    double emit_probability = 0.9;   // UniqueValueLeaker
    std::uint64_t seed = 0;

    void validate() const {
        if (max_parents < 1) throw UsageError("generator: max_parents must be >= 1");
        if (bins < 2) throw UsageError("generator: bins must be >= 2");
        if (!(laplace_alpha > 0.0)) throw UsageError("generator: laplace_alpha must be > 0");
        if (!(emit_probability >= 0.0 && emit_probability <= 1.0))
            throw UsageError("generator: emit_probability must be in [0,1]");
    }
};

namespace detail {

// Draw an index proportional to non-negative weights.
inline std::size_t weighted_choice(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = rng.uniform_real() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc) return i;
    }
    return weights.size() - 1;
}

// bins+1 equal-width edges over [lo, hi]
inline std::vector<double> equal_width_edges(double lo, double hi, std::size_t bins) {
    std::vector<double> edges(bins + 1);
    for (std::size_t j = 0; j <= bins; ++j)
        edges[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bins);
    return edges;
}

// bins+1 quantile edges from observed values (may contain repeated edges
// for heavy ties; bin lookup handles that)
inline std::vector<double> quantile_edges(std::vector<double> values, std::size_t bins) {
    std::sort(values.begin(), values.end());
    std::vector<double> edges(bins + 1);
    const std::size_t n = values.size();
    for (std::size_t j = 0; j <= bins; ++j) {
        double pos = static_cast<double>(j) / static_cast<double>(bins) * static_cast<double>(n - 1);
        auto lo = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(lo);
        edges[j] = lo + 1 < n ? values[lo] + frac * (values[lo + 1] - values[lo]) : values[n - 1];
    }
    return edges;
}

inline std::size_t bin_of(double v, const std::vector<double>& edges) {
    const std::size_t bins = edges.size() - 1;
    // first inner edge strictly above v
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, v);
    auto idx = static_cast<std::size_t>(it - (edges.begin() + 1));
    return std::min(idx, bins - 1);
}

}  // namespace detail

// Discrete view of a dataset: categorical cells keep their domain index,
// numeric cells become bin indices over the given edges.
struct DiscreteView {
    std::vector<std::vector<std::size_t>> cells;  // [row][feature]
    std::vector<std::size_t> cardinality;         // per feature
    std::vector<std::vector<double>> numeric_edges;  // empty for categorical features
};

inline DiscreteView discretize(const Dataset& d, std::size_t bins) {
    const std::size_t k = d.feature_count();
    DiscreteView view;
    view.cardinality.resize(k);
    view.numeric_edges.resize(k);
    for (std::size_t f = 0; f < k; ++f) {
        const auto& spec = d.schema.features[f];
        if (spec.kind == FeatureKind::Categorical) {
            view.cardinality[f] = spec.domain.size();
        } else {
            std::vector<double> vals;
            vals.reserve(d.size());
            for (const auto& r : d.rows) vals.push_back(r[f].num);
            view.numeric_edges[f] = detail::quantile_edges(std::move(vals), bins);
            view.cardinality[f] = bins;
        }
    }
    view.cells.resize(d.size(), std::vector<std::size_t>(k));
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t f = 0; f < k; ++f) {
            const auto& spec = d.schema.features[f];
            view.cells[i][f] = spec.kind == FeatureKind::Categorical
                                   ? static_cast<std::size_t>(d.rows[i][f].cat)
                                   : detail::bin_of(d.rows[i][f].num, view.numeric_edges[f]);
        }
    }
    return view;
}

namespace detail {

inline double entropy_nats(const std::vector<double>& counts, double total) {
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) {
            double p = c / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

// Plug-in MI in nats between feature f and a joint parent combination,
// both given as per-row discrete codes.
inline double mi_from_codes(const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys) {
    const auto n = static_cast<double>(xs.size());
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> mx, my;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        joint[{xs[i], ys[i]}] += 1.0;
        mx[xs[i]] += 1.0;
        my[ys[i]] += 1.0;
    }
    double mi = 0.0;
    for (const auto& [key, c] : joint) {
        double pxy = c / n;
        double px = mx[key.first] / n;
        double py = my[key.second] / n;
        mi += pxy * std::log(pxy / (px * py));
    }
    return std::max(mi, 0.0);
}

}  // namespace detail

// Empirical mutual information in nats between two features, numerics
// discretized into equal-width bins over the observed range. MI(f, f)
// equals the feature's empirical entropy.
inline double mutual_information(const Dataset& d, std::size_t f1, std::size_t f2,
                                 std::size_t bins = 10) {
    if (f1 >= d.feature_count() || f2 >= d.feature_count())
        throw IndexOutOfRangeError("mutual_information: feature index out of range");
    if (d.size() < 2) throw InsufficientDataError("mutual_information: need >= 2 rows");
    auto codes = [&](std::size_t f) {
        std::vector<std::size_t> out(d.size());
        const auto& spec = d.schema.features[f];
        if (spec.kind == FeatureKind::Categorical) {
            for (std::size_t i = 0; i < d.size(); ++i)
                out[i] = static_cast<std::size_t>(d.rows[i][f].cat);
        } else {
            double lo = d.rows[0][f].num, hi = lo;
            for (const auto& r : d.rows) {
                lo = std::min(lo, r[f].num);
                hi = std::max(hi, r[f].num);
            }
            auto edges = detail::equal_width_edges(lo, hi > lo ? hi : lo + 1.0, bins);
            for (std::size_t i = 0; i < d.size(); ++i)
                out[i] = detail::bin_of(d.rows[i][f].num, edges);
        }
        return out;
    };
    return detail::mi_from_codes(codes(f1), codes(f2));
}

// ---- per-kind model state ----

struct MarginalTable {
    std::vector<double> weights;  // categorical: per domain value; numeric: per bin
    std::vector<double> edges;    // numeric only: bins+1 equal-width edges
};

struct IndHistState {
    std::vector<MarginalTable> marginals;
};

struct BayNetNode {
    std::size_t feature = 0;
    std::vector<std::size_t> parents;       // feature indices, earlier in sampling order
    std::size_t cardinality = 0;
    std::vector<std::size_t> parent_cards;  // aligned with parents
    std::vector<double> cpt;                // [parent config][value], row-major probabilities
};

struct BayNetState {
    std::vector<BayNetNode> nodes;                   // in sampling order
    std::vector<std::vector<double>> numeric_edges;  // per feature, empty for categorical
};

struct PerfectLeakerState {
    std::vector<Record> rows;
};

struct NullModelState {};  // reference distribution is fully schema-derived

struct UniqueValueLeakerState {
    IndHistState base;
    bool has_trigger = false;
    std::size_t trigger_feature = 0;
    std::int32_t trigger_value = -1;
};

using ModelState =
    std::variant<IndHistState, BayNetState, PerfectLeakerState, NullModelState, UniqueValueLeakerState>;

namespace detail {

inline IndHistState fit_indhist(const Dataset& train, std::size_t bins) {
    IndHistState state;
    const std::size_t k = train.feature_count();
    state.marginals.resize(k);
    for (std::size_t f = 0; f < k; ++f) {
        const auto& spec = train.schema.features[f];
        auto& table = state.marginals[f];
        if (spec.kind == FeatureKind::Categorical) {
            table.weights.assign(spec.domain.size(), 0.0);
            for (const auto& r : train.rows) table.weights[static_cast<std::size_t>(r[f].cat)] += 1.0;
        } else {
            double lo = train.rows[0][f].num, hi = lo;
            for (const auto& r : train.rows) {
                lo = std::min(lo, r[f].num);
                hi = std::max(hi, r[f].num);
            }
            table.edges = equal_width_edges(lo, hi, bins);
            table.weights.assign(bins, 0.0);
            if (hi > lo) {
                for (const auto& r : train.rows) table.weights[bin_of(r[f].num, table.edges)] += 1.0;
            } else {
                table.weights[0] = static_cast<double>(train.size());
            }
        }
    }
    return state;
}

inline Cell sample_marginal(Rng& rng, const FeatureSpec& spec, const MarginalTable& table) {
    std::size_t idx = weighted_choice(rng, table.weights);
    if (spec.kind == FeatureKind::Categorical) return Cell::categorical(static_cast<std::int32_t>(idx));
    return Cell::numeric(rng.uniform_real(table.edges[idx], table.edges[idx + 1]));
}

// all index combinations of size `size` from `pool`, in lexicographic order
inline void for_each_combination(const std::vector<std::size_t>& pool, std::size_t size,
                                 const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (size > pool.size()) return;
    std::vector<std::size_t> pick(size);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == size) {
            fn(pick);
            return;
        }
        for (std::size_t i = start; i + (size - depth) <= pool.size(); ++i) {
            pick[depth] = pool[i];
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    if (size == 0) fn({});
}

inline std::vector<std::size_t> joint_codes(const DiscreteView& view,
                                            const std::vector<std::size_t>& features) {
    std::vector<std::size_t> codes(view.cells.size(), 0);
    for (std::size_t f : features) {
        for (std::size_t i = 0; i < codes.size(); ++i)
            codes[i] = codes[i] * view.cardinality[f] + view.cells[i][f];
    }
    return codes;
}

// GreedyBayes-style structure search: order features by entropy then by the
// best mutual information against parent subsets of already-placed features.
inline BayNetState fit_baynet(const Dataset& train, std::size_t max_parents, std::size_t bins,
                              double alpha) {
    const std::size_t k = train.feature_count();
    DiscreteView view = discretize(train, bins);
    const auto n = static_cast<double>(train.size());

    std::vector<double> entropies(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<double> counts(view.cardinality[f], 0.0);
        for (const auto& row : view.cells) counts[row[f]] += 1.0;
        entropies[f] = entropy_nats(counts, n);
    }

    std::vector<std::size_t> order;
    std::vector<bool> placed(k, false);
    {
        std::size_t first = 0;
        for (std::size_t f = 1; f < k; ++f)
            if (entropies[f] > entropies[first]) first = f;
        order.push_back(first);
        placed[first] = true;
    }

    BayNetState state;
    state.numeric_edges = view.numeric_edges;
    state.nodes.push_back(BayNetNode{order[0], {}, view.cardinality[order[0]], {}, {}});

    auto feature_codes = [&](std::size_t f) {
        std::vector<std::size_t> out(view.cells.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = view.cells[i][f];
        return out;
    };

    while (order.size() < k) {
        std::size_t best_feature = k;
        double best_mi = -1.0;
        std::vector<std::size_t> best_parents;
        for (std::size_t f = 0; f < k; ++f) {
            if (placed[f]) continue;
            auto xcodes = feature_codes(f);
            double f_best = 0.0;  // empty parent set scores MI = 0
            std::vector<std::size_t> f_parents;
            std::size_t max_size = std::min(max_parents, order.size());
            for (std::size_t size = 1; size <= max_size; ++size) {
                for_each_combination(order, size, [&](const std::vector<std::size_t>& subset) {
                    double mi = mi_from_codes(xcodes, joint_codes(view, subset));
                    if (mi > f_best) {
                        f_best = mi;
                        f_parents = subset;
                    }
                });
            }
            if (f_best > best_mi) {
                best_mi = f_best;
                best_feature = f;
                best_parents = f_parents;
            }
        }
        placed[best_feature] = true;
        order.push_back(best_feature);

        BayNetNode node;
        node.feature = best_feature;
        node.parents = best_parents;
        node.cardinality = view.cardinality[best_feature];
        for (std::size_t p : node.parents) node.parent_cards.push_back(view.cardinality[p]);
        state.nodes.push_back(std::move(node));
    }

    // CPT estimation with additive smoothing
    for (auto& node : state.nodes) {
        std::size_t configs = 1;
        for (std::size_t c : node.parent_cards) configs *= c;
        std::vector<double> counts(configs * node.cardinality, 0.0);
        for (const auto& row : view.cells) {
            std::size_t code = 0;
            for (std::size_t j = 0; j < node.parents.size(); ++j)
                code = code * node.parent_cards[j] + row[node.parents[j]];
            counts[code * node.cardinality + row[node.feature]] += 1.0;
        }
        node.cpt.resize(counts.size());
        for (std::size_t cfg = 0; cfg < configs; ++cfg) {
            double row_sum = 0.0;
            for (std::size_t v = 0; v < node.cardinality; ++v)
                row_sum += counts[cfg * node.cardinality + v];
            double denom = row_sum + alpha * static_cast<double>(node.cardinality);
            for (std::size_t v = 0; v < node.cardinality; ++v)
                node.cpt[cfg * node.cardinality + v] =
                    (counts[cfg * node.cardinality + v] + alpha) / denom;
        }
    }
    return state;
}

}  // namespace detail

struct FittedGenerator {
    GeneratorSpec spec;
    Schema schema;
    ModelState state;

    Dataset sample(std::size_t n, std::uint64_t seed) const;
};

// M = fit(spec, train): estimate the per-kind model state from training data.
inline FittedGenerator fit(const GeneratorSpec& spec, const Dataset& train) {
    spec.validate();
    train.schema.validate();
    if (train.size() < 2) throw InsufficientDataError("fit: need >= 2 training rows");

    FittedGenerator g;
    g.spec = spec;
    g.schema = train.schema;
    switch (spec.kind) {
        case GeneratorKind::IndHist:
            g.state = detail::fit_indhist(train, spec.bins);
            break;
        case GeneratorKind::BayNet:
            g.state = detail::fit_baynet(train, spec.max_parents, spec.bins, spec.laplace_alpha);
            break;
        case GeneratorKind::PerfectLeaker:
            g.state = PerfectLeakerState{train.rows};
            break;
        case GeneratorKind::NullModel:
            g.state = NullModelState{};
            break;
        case GeneratorKind::UniqueValueLeaker: {
            UniqueValueLeakerState s;
            s.base = detail::fit_indhist(train, spec.bins);
            // first (feature, value) whose category occurs exactly once
            for (std::size_t f = 0; f < train.feature_count() && !s.has_trigger; ++f) {
                const auto& fs = train.schema.features[f];
                if (fs.kind != FeatureKind::Categorical) continue;
                std::vector<std::size_t> counts(fs.domain.size(), 0);
                for (const auto& r : train.rows) counts[static_cast<std::size_t>(r[f].cat)]++;
                for (std::size_t v = 0; v < counts.size(); ++v) {
                    if (counts[v] == 1) {
                        s.has_trigger = true;
                        s.trigger_feature = f;
                        s.trigger_value = static_cast<std::int32_t>(v);
                        break;
                    }
                }
            }
            g.state = std::move(s);
            break;
        }
    }
    return g;
}

inline Dataset FittedGenerator::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw UsageError("sample: n must be >= 1");
    Rng rng(derive_seed(seed, "sample"));
    Dataset out;
    out.schema = schema;
    out.role = Role::Synthetic;
    out.rows.reserve(n);
    const std::size_t k = schema.feature_count();

    auto sample_indhist = [&](const IndHistState& s) {
        for (std::size_t i = 0; i < n; ++i) {
            Record rec(k);
            for (std::size_t f = 0; f < k; ++f)
                rec[f] = detail::sample_marginal(rng, schema.features[f], s.marginals[f]);
            out.rows.push_back(std::move(rec));
        }
    };

    if (std::holds_alternative<IndHistState>(state)) {
        sample_indhist(std::get<IndHistState>(state));
    } else if (std::holds_alternative<BayNetState>(state)) {
        const auto& s = std::get<BayNetState>(state);
        std::vector<std::size_t> discrete(k);
        for (std::size_t i = 0; i < n; ++i) {
            Record rec(k);
            for (const auto& node : s.nodes) {
                std::size_t code = 0;
                for (std::size_t j = 0; j < node.parents.size(); ++j)
                    code = code * node.parent_cards[j] + discrete[node.parents[j]];
                std::vector<double> row(node.cpt.begin() + static_cast<std::ptrdiff_t>(code * node.cardinality),
                                        node.cpt.begin() + static_cast<std::ptrdiff_t>((code + 1) * node.cardinality));
                std::size_t v = detail::weighted_choice(rng, row);
                discrete[node.feature] = v;
                const auto& fs = schema.features[node.feature];
                if (fs.kind == FeatureKind::Categorical) {
                    rec[node.feature] = Cell::categorical(static_cast<std::int32_t>(v));
                } else {
                    const auto& edges = s.numeric_edges[node.feature];
                    rec[node.feature] = Cell::numeric(rng.uniform_real(edges[v], edges[v + 1]));
                }
            }
            out.rows.push_back(std::move(rec));
        }
    } else if (std::holds_alternative<PerfectLeakerState>(state)) {
        // seeded permutation blocks: every training row is emitted before
        // any repeats, so membership is directly observable in the output
        const auto& s = std::get<PerfectLeakerState>(state);
        std::vector<std::size_t> order(s.rows.size());
        while (out.rows.size() < n) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            rng.shuffle(order);
            for (std::size_t idx : order) {
                if (out.rows.size() == n) break;
                out.rows.push_back(s.rows[idx]);
            }
        }
    } else if (std::holds_alternative<NullModelState>(state)) {
        for (std::size_t i = 0; i < n; ++i) {
            Record rec(k);
            for (std::size_t f = 0; f < k; ++f) {
                const auto& fs = schema.features[f];
                if (fs.kind == FeatureKind::Categorical)
                    rec[f] = Cell::categorical(
                        static_cast<std::int32_t>(rng.uniform_index(fs.domain.size())));
                else
                    rec[f] = Cell::numeric(rng.uniform_real(fs.min, fs.max));
            }
            out.rows.push_back(std::move(rec));
        }
    } else {
        const auto& s = std::get<UniqueValueLeakerState>(state);
        sample_indhist(s.base);
        if (s.has_trigger) {
            for (auto& rec : out.rows)
                if (rng.bernoulli(spec.emit_probability))
                    rec[s.trigger_feature] = Cell::categorical(s.trigger_value);
        }
    }
    return out;
}

// ---- model file (kind-tagged JSON) ----

inline nlohmann::json to_json(const GeneratorSpec& spec) {
    return nlohmann::json{
        {"kind", generator_kind_name(spec.kind)}, {"max_parents", spec.max_parents},
        {"bins", spec.bins},                      {"laplace_alpha", spec.laplace_alpha},
        {"emit_probability", spec.emit_probability}, {"seed", spec.seed},
    };
}

inline GeneratorSpec generator_spec_from_json(const nlohmann::json& j) {
    GeneratorSpec spec;
    spec.kind = generator_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("max_parents")) spec.max_parents = j["max_parents"].get<std::size_t>();
    if (j.contains("bins")) spec.bins = j["bins"].get<std::size_t>();
    if (j.contains("laplace_alpha")) spec.laplace_alpha = j["laplace_alpha"].get<double>();
    if (j.contains("emit_probability")) spec.emit_probability = j["emit_probability"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    spec.validate();
    return spec;
}

namespace detail {

inline nlohmann::json marginals_to_json(const IndHistState& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : s.marginals)
        arr.push_back(nlohmann::json{{"weights", t.weights}, {"edges", t.edges}});
    return arr;
}

inline IndHistState marginals_from_json(const nlohmann::json& arr) {
    IndHistState s;
    for (const auto& jt : arr) {
        MarginalTable t;
        t.weights = jt.at("weights").get<std::vector<double>>();
        t.edges = jt.at("edges").get<std::vector<double>>();
        s.marginals.push_back(std::move(t));
    }
    return s;
}

}  // namespace detail

// Model cache file: spec + schema + per-kind state, kind-tagged.
inline nlohmann::json to_json(const FittedGenerator& g) {
    nlohmann::json j;
    j["spec"] = to_json(g.spec);
    j["schema"] = schema_to_json(g.schema);
    nlohmann::json state;
    if (const auto* s = std::get_if<IndHistState>(&g.state)) {
        state["marginals"] = detail::marginals_to_json(*s);
    } else if (const auto* s = std::get_if<BayNetState>(&g.state)) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& nd : s->nodes)
            nodes.push_back(nlohmann::json{{"feature", nd.feature},
                                           {"parents", nd.parents},
                                           {"cardinality", nd.cardinality},
                                           {"parent_cards", nd.parent_cards},
                                           {"cpt", nd.cpt}});
        state["nodes"] = nodes;
        state["numeric_edges"] = s->numeric_edges;
    } else if (const auto* s = std::get_if<PerfectLeakerState>(&g.state)) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& rec : s->rows) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t f = 0; f < g.schema.feature_count(); ++f) {
                if (g.schema.features[f].kind == FeatureKind::Categorical)
                    row.push_back(rec[f].cat);
                else
                    row.push_back(rec[f].num);
            }
            rows.push_back(std::move(row));
        }
        state["rows"] = rows;
    } else if (std::holds_alternative<NullModelState>(g.state)) {
        // nothing beyond the schema
    } else {
        const auto& s = std::get<UniqueValueLeakerState>(g.state);
        state["marginals"] = detail::marginals_to_json(s.base);
        state["has_trigger"] = s.has_trigger;
        state["trigger_feature"] = s.trigger_feature;
        state["trigger_value"] = s.trigger_value;
    }
    j["state"] = state;
    return j;
}

inline FittedGenerator fitted_generator_from_json(const nlohmann::json& j) {
    FittedGenerator g;
    g.spec = generator_spec_from_json(j.at("spec"));
    g.schema = schema_from_json(j.at("schema"));
    const auto& state = j.at("state");
    switch (g.spec.kind) {
        case GeneratorKind::IndHist:
            g.state = detail::marginals_from_json(state.at("marginals"));
            break;
        case GeneratorKind::BayNet: {
            BayNetState s;
            for (const auto& jn : state.at("nodes")) {
                BayNetNode nd;
                nd.feature = jn.at("feature").get<std::size_t>();
                nd.parents = jn.at("parents").get<std::vector<std::size_t>>();
                nd.cardinality = jn.at("cardinality").get<std::size_t>();
                nd.parent_cards = jn.at("parent_cards").get<std::vector<std::size_t>>();
                nd.cpt = jn.at("cpt").get<std::vector<double>>();
                s.nodes.push_back(std::move(nd));
            }
            s.numeric_edges = state.at("numeric_edges").get<std::vector<std::vector<double>>>();
            g.state = std::move(s);
            break;
        }
        case GeneratorKind::PerfectLeaker: {
            PerfectLeakerState s;
            for (const auto& jr : state.at("rows")) {
                Record rec(g.schema.feature_count());
                for (std::size_t f = 0; f < rec.size(); ++f) {
                    if (g.schema.features[f].kind == FeatureKind::Categorical)
                        rec[f] = Cell::categorical(jr.at(f).get<std::int32_t>());
                    else
                        rec[f] = Cell::numeric(jr.at(f).get<double>());
                }
                s.rows.push_back(std::move(rec));
            }
            g.state = std::move(s);
            break;
        }
        case GeneratorKind::NullModel:
            g.state = NullModelState{};
            break;
        case GeneratorKind::UniqueValueLeaker: {
            UniqueValueLeakerState s;
            s.base = detail::marginals_from_json(state.at("marginals"));
            s.has_trigger = state.at("has_trigger").get<bool>();
            s.trigger_feature = state.at("trigger_feature").get<std::size_t>();
            s.trigger_value = state.at("trigger_value").get<std::int32_t>();
            g.state = std::move(s);
            break;
        }
    }
    return g;
}

}  // namespace dcraudit
