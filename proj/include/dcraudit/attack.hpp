#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcraudit/generators.hpp"
#include "dcraudit/parallel.hpp"
#include "dcraudit/rng.hpp"
#include "dcraudit/schema.hpp"
#include "dcraudit/split.hpp"

namespace dcraudit {

struct ClassifierConfig {
    double l2_penalty = 1e-4;
    std::size_t max_iterations = 2000;
    double tolerance = 1e-6;

    void validate() const {
        if (max_iterations < 1) throw UsageError("classifier: max_iterations must be >= 1");
        if (!(tolerance > 0.0)) throw UsageError("classifier: tolerance must be > 0");
        if (l2_penalty < 0.0) throw UsageError("classifier: l2_penalty must be >= 0");
    }
};

struct GameConfig {
    std::size_t n_shadow = 200;
    std::size_t n_eval = 200;
    std::size_t shadow_size = 0;       // 0: use |target_ds|
    std::size_t n_queries = 100;
    std::size_t query_subset_max = 0;  // 0: min(k, 4)
    ClassifierConfig classifier;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_shadow < 2 || n_shadow % 2 != 0) throw UsageError("game: n_shadow must be even, >= 2");
        if (n_eval < 2 || n_eval % 2 != 0) throw UsageError("game: n_eval must be even, >= 2");
        if (n_queries < 1) throw UsageError("game: n_queries must be >= 1");
        classifier.validate();
    }
};

struct QueryFeatureSpec {
    std::vector<std::vector<std::size_t>> subsets;  // attribute-index sets, fixed per game
};

struct AttackOutcome {
    std::size_t target_index = 0;
    std::vector<std::pair<double, int>> scores;  // (score, membership bit) per eval world
    double auc = 0.0;
    double tpr_at_fpr0 = 0.0;
};

inline nlohmann::json to_json(const AttackOutcome& o) {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& [s, label] : o.scores)
        scores.push_back(nlohmann::json{{"score", s}, {"label", label}});
    return nlohmann::json{{"target_index", o.target_index},
                          {"auc", o.auc},
                          {"tpr_at_fpr0", o.tpr_at_fpr0},
                          {"scores", scores}};
}

// ---- ROC metrics ----

// Mann-Whitney AUC with midrank tie handling.
inline double roc_auc(const std::vector<std::pair<double, int>>& scores) {
    std::size_t n1 = 0, n0 = 0;
    for (const auto& [s, y] : scores) (y ? n1 : n0)++;
    if (n1 == 0 || n0 == 0) throw DegenerateLabelsError("roc_auc: both classes required");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a].first < scores[b].first; });
    double rank_sum_members = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]].first == scores[order[i]].first) ++j;
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;  // 1-based
        for (std::size_t t = i; t < j; ++t)
            if (scores[order[t]].second) rank_sum_members += midrank;
        i = j;
    }
    double u = rank_sum_members - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
    return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

// TPR at the strictest threshold admitting zero false positives: members
// scoring strictly above the highest non-member score.
inline double tpr_at_fpr_zero(const std::vector<std::pair<double, int>>& scores) {
    std::size_t n1 = 0, n0 = 0;
    double max_non_member = -std::numeric_limits<double>::infinity();
    for (const auto& [s, y] : scores) {
        if (y) {
            ++n1;
        } else {
            ++n0;
            max_non_member = std::max(max_non_member, s);
        }
    }
    if (n1 == 0 || n0 == 0) throw DegenerateLabelsError("tpr_at_fpr_zero: both classes required");
    std::size_t hits = 0;
    for (const auto& [s, y] : scores)
        if (y && s > max_non_member) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n1);
}

// ---- query features ----

// Numeric attributes "match" when they fall in the same decile bin of the
// real target dataset's empirical distribution.
struct NumericBinning {
    std::vector<std::vector<double>> edges;  // per feature, empty for categorical

    static NumericBinning from_dataset(const Dataset& d) {
        NumericBinning b;
        b.edges.resize(d.feature_count());
        for (std::size_t f = 0; f < d.feature_count(); ++f) {
            if (d.schema.features[f].kind != FeatureKind::Numeric) continue;
            std::vector<double> vals;
            vals.reserve(d.size());
            for (const auto& r : d.rows) vals.push_back(r[f].num);
            b.edges[f] = detail::quantile_edges(std::move(vals), 10);
        }
        return b;
    }

    bool match(const Cell& a, const Cell& b, const FeatureSpec& spec, std::size_t f) const {
        if (spec.kind == FeatureKind::Categorical) return a.cat == b.cat;
        return detail::bin_of(a.num, edges[f]) == detail::bin_of(b.num, edges[f]);
    }
};

// n_queries random attribute subsets with sizes uniform in
// {1, ..., query_subset_max}; shared between shadow and evaluation phases.
inline QueryFeatureSpec draw_query_subsets(const Schema& schema, const GameConfig& cfg,
                                           std::uint64_t seed) {
    const std::size_t k = schema.feature_count();
    std::size_t max_size = cfg.query_subset_max ? std::min(cfg.query_subset_max, k) : std::min(k, std::size_t{4});
    Rng rng(derive_seed(seed, "query-subsets"));
    QueryFeatureSpec spec;
    spec.subsets.reserve(cfg.n_queries);
    std::vector<std::size_t> pool(k);
    for (std::size_t q = 0; q < cfg.n_queries; ++q) {
        std::size_t size = 1 + static_cast<std::size_t>(rng.uniform_index(max_size));
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        // partial Fisher-Yates: first `size` entries are the sample
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(k - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(subset.begin(), subset.end());
        spec.subsets.push_back(std::move(subset));
    }
    return spec;
}

// Fraction of synthetic records matching the target on each attribute
// subset, plus a final full-record exact-match fraction.
inline std::vector<double> build_query_features(const QueryFeatureSpec& spec, const Record& target,
                                                const Dataset& synthetic, const Schema& schema,
                                                const NumericBinning& binning) {
    std::vector<double> features(spec.subsets.size() + 1, 0.0);
    const auto n = static_cast<double>(synthetic.size());
    if (synthetic.size() == 0) return features;
    for (std::size_t q = 0; q < spec.subsets.size(); ++q) {
        std::size_t count = 0;
        for (const auto& rec : synthetic.rows) {
            bool all = true;
            for (std::size_t f : spec.subsets[q]) {
                if (!binning.match(rec[f], target[f], schema.features[f], f)) {
                    all = false;
                    break;
                }
            }
            if (all) ++count;
        }
        features[q] = static_cast<double>(count) / n;
    }
    std::size_t exact = 0;
    for (const auto& rec : synthetic.rows)
        if (records_equal(rec, target, schema)) ++exact;
    features.back() = static_cast<double>(exact) / n;
    return features;
}

// ---- world construction ----

// Shadow training sets sampled without replacement from aux; the target is
// planted in place of one uniform row in exactly the first half.
inline std::vector<std::pair<Dataset, int>> make_shadow_worlds(const Dataset& aux,
                                                               const Record& target,
                                                               const GameConfig& cfg,
                                                               std::size_t shadow_size) {
    cfg.validate();
    if (aux.size() < shadow_size)
        throw InsufficientRowsError("make_shadow_worlds: aux has " + std::to_string(aux.size()) +
                                    " rows, shadow_size is " + std::to_string(shadow_size));
    std::vector<std::pair<Dataset, int>> worlds(cfg.n_shadow);
    parallel_for(cfg.n_shadow, [&](std::size_t w) {
        Rng rng(derive_seed(cfg.seed, "shadow-world", w));
        std::vector<std::size_t> pool(aux.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < shadow_size; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(aux.size() - i));
            std::swap(pool[i], pool[j]);
        }
        Dataset d;
        d.schema = aux.schema;
        d.role = Role::Shadow;
        d.rows.reserve(shadow_size);
        for (std::size_t i = 0; i < shadow_size; ++i) d.rows.push_back(aux.rows[pool[i]]);
        int label = w < cfg.n_shadow / 2 ? 1 : 0;
        if (label) d.rows[static_cast<std::size_t>(rng.uniform_index(shadow_size))] = target;
        worlds[w] = {std::move(d), label};
    });
    return worlds;
}

// Model-seeded evaluation worlds: half are the target dataset itself, half
// have the target row replaced by an independently drawn holdout record.
inline std::vector<std::pair<Dataset, int>> make_eval_worlds(const Dataset& target_ds,
                                                             std::size_t target_index,
                                                             const Dataset& holdout,
                                                             const GameConfig& cfg) {
    cfg.validate();
    if (target_index >= target_ds.size())
        throw IndexOutOfRangeError("make_eval_worlds: target index out of range");
    if (holdout.size() < 1) throw InsufficientRowsError("make_eval_worlds: empty holdout");
    std::vector<std::pair<Dataset, int>> worlds;
    worlds.reserve(cfg.n_eval);
    for (std::size_t w = 0; w < cfg.n_eval; ++w) {
        if (w < cfg.n_eval / 2) {
            worlds.emplace_back(target_ds, 1);
        } else {
            Rng rng(derive_seed(cfg.seed, "eval-world", w));
            const Record& repl = holdout.rows[static_cast<std::size_t>(rng.uniform_index(holdout.size()))];
            worlds.emplace_back(replace_record(target_ds, target_index, repl), 0);
        }
    }
    return worlds;
}

// ---- meta-classifier ----

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    std::vector<double> means;  // training standardization
    std::vector<double> stds;   // 0 marks a constant column (left at 0)

    double score(const std::vector<double>& x) const {
        double z = intercept;
        for (std::size_t f = 0; f < weights.size(); ++f) {
            double v = stds[f] > 0.0 ? (x[f] - means[f]) / stds[f] : 0.0;
            z += weights[f] * v;
        }
        return 1.0 / (1.0 + std::exp(-z));
    }
};

namespace detail {

// regularized negative log-likelihood and its gradient over standardized X
inline double logistic_loss_grad(const std::vector<std::vector<double>>& X,
                                 const std::vector<int>& y, const std::vector<double>& w,
                                 double intercept, double l2, std::vector<double>& grad_w,
                                 double& grad_b) {
    const auto n = static_cast<double>(X.size());
    const std::size_t d = w.size();
    grad_w.assign(d, 0.0);
    grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = intercept;
        for (std::size_t f = 0; f < d; ++f) z += w[f] * X[i][f];
        double p = 1.0 / (1.0 + std::exp(-z));
        double t = static_cast<double>(y[i]);
        // clamp for the log only
        double pc = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
        loss -= t * std::log(pc) + (1.0 - t) * std::log(1.0 - pc);
        double err = p - t;
        for (std::size_t f = 0; f < d; ++f) grad_w[f] += err * X[i][f];
        grad_b += err;
    }
    loss /= n;
    grad_b /= n;
    for (std::size_t f = 0; f < d; ++f) {
        grad_w[f] = grad_w[f] / n + l2 * w[f];
        loss += 0.5 * l2 * w[f] * w[f];
    }
    return loss;
}

}  // namespace detail

// Deterministic full-batch L2-regularized logistic regression with
// backtracking gradient descent. Features are standardized internally;
// constant columns are zeroed out.
inline LogisticModel train_meta_classifier(const std::vector<std::vector<double>>& features,
                                           const std::vector<int>& labels,
                                           const ClassifierConfig& cfg) {
    cfg.validate();
    if (features.size() != labels.size())
        throw LengthMismatchError("train_meta_classifier: features/labels length mismatch");
    std::size_t n1 = 0, n0 = 0;
    for (int y : labels) (y ? n1 : n0)++;
    if (n1 < 2 || n0 < 2)
        throw DegenerateLabelsError("train_meta_classifier: need >= 2 examples of each class");
    const std::size_t n = features.size();
    const std::size_t d = features[0].size();

    LogisticModel model;
    model.means.assign(d, 0.0);
    model.stds.assign(d, 0.0);
    for (std::size_t f = 0; f < d; ++f) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += features[i][f];
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dlt = features[i][f] - m;
            var += dlt * dlt;
        }
        var /= static_cast<double>(n);
        model.means[f] = m;
        model.stds[f] = var > 0.0 ? std::sqrt(var) : 0.0;
    }

    std::vector<std::vector<double>> X(n, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < d; ++f)
            if (model.stds[f] > 0.0) X[i][f] = (features[i][f] - model.means[f]) / model.stds[f];

    std::vector<double> w(d, 0.0), grad_w(d), best_dir(d);
    double b = 0.0, grad_b = 0.0;
    double step = 1.0;
    double loss = detail::logistic_loss_grad(X, labels, w, b, cfg.l2_penalty, grad_w, grad_b);
    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        double gnorm = grad_b * grad_b;
        for (double g : grad_w) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm < cfg.tolerance) break;

        // backtracking line search on the current gradient direction
        double trial_step = std::min(step * 2.0, 1e6);
        std::vector<double> wt(d);
        double bt = 0.0;
        double new_loss = loss;
        std::vector<double> trial_grad_w(d);
        double trial_grad_b = 0.0;
        for (int back = 0; back < 60; ++back) {
            for (std::size_t f = 0; f < d; ++f) wt[f] = w[f] - trial_step * grad_w[f];
            bt = b - trial_step * grad_b;
            new_loss = detail::logistic_loss_grad(X, labels, wt, bt, cfg.l2_penalty, trial_grad_w,
                                                  trial_grad_b);
            if (new_loss <= loss - 0.5 * trial_step * gnorm * gnorm) break;
            trial_step *= 0.5;
        }
        w = wt;
        b = bt;
        loss = new_loss;
        grad_w = trial_grad_w;
        grad_b = trial_grad_b;
        step = trial_step;
    }
    model.weights = std::move(w);
    model.intercept = b;
    return model;
}

// ---- the full per-record game ----

using EvalObserver = std::function<void(std::size_t world_index, int label, const Dataset& synthetic)>;

// Extended-TAPAS-style game for one target record: shadow phase trains the
// meta-classifier on query features from generators fitted with/without the
// target, evaluation phase scores model-seeded worlds.
inline AttackOutcome run_game(const Dataset& target_ds, std::size_t target_index,
                              const Dataset& holdout, const Dataset& aux,
                              const GeneratorSpec& gen_spec, const GameConfig& cfg,
                              const EvalObserver& eval_observer = nullptr) {
    cfg.validate();
    require_same_schema(target_ds, holdout);
    require_same_schema(target_ds, aux);
    if (target_index >= target_ds.size())
        throw IndexOutOfRangeError("run_game: target index out of range");
    const Record target = target_ds.rows[target_index];
    const Schema& schema = target_ds.schema;
    const std::size_t shadow_size = cfg.shadow_size ? cfg.shadow_size : target_ds.size();

    QueryFeatureSpec queries = draw_query_subsets(schema, cfg, cfg.seed);
    NumericBinning binning = NumericBinning::from_dataset(target_ds);

    auto world_features = [&](const Dataset& train, std::uint64_t world_seed) {
        GeneratorSpec spec = gen_spec;
        spec.seed = derive_seed(world_seed, "fit");
        FittedGenerator g = fit(spec, train);
        Dataset synthetic = g.sample(train.size(), derive_seed(world_seed, "sample"));
        return std::make_pair(build_query_features(queries, target, synthetic, schema, binning),
                              std::move(synthetic));
    };

    // shadow phase
    auto shadow_worlds = make_shadow_worlds(aux, target, cfg, shadow_size);
    std::vector<std::vector<double>> shadow_features(cfg.n_shadow);
    std::vector<int> shadow_labels(cfg.n_shadow);
    parallel_for(cfg.n_shadow, [&](std::size_t w) {
        shadow_features[w] =
            world_features(shadow_worlds[w].first, derive_seed(cfg.seed, "shadow-gen", w)).first;
        shadow_labels[w] = shadow_worlds[w].second;
    });
    shadow_worlds.clear();

    LogisticModel model = train_meta_classifier(shadow_features, shadow_labels, cfg.classifier);

    // evaluation phase
    auto eval_worlds = make_eval_worlds(target_ds, target_index, holdout, cfg);
    AttackOutcome outcome;
    outcome.target_index = target_index;
    outcome.scores.resize(cfg.n_eval);
    std::vector<Dataset> eval_synthetic(eval_observer ? cfg.n_eval : 0);
    parallel_for(cfg.n_eval, [&](std::size_t w) {
        auto [features, synthetic] =
            world_features(eval_worlds[w].first, derive_seed(cfg.seed, "eval-gen", w));
        outcome.scores[w] = {model.score(features), eval_worlds[w].second};
        if (eval_observer) eval_synthetic[w] = std::move(synthetic);
    });
    if (eval_observer)
        for (std::size_t w = 0; w < cfg.n_eval; ++w)
            eval_observer(w, eval_worlds[w].second, eval_synthetic[w]);

    outcome.auc = roc_auc(outcome.scores);
    outcome.tpr_at_fpr0 = tpr_at_fpr_zero(outcome.scores);
    return outcome;
}

}  // namespace dcraudit
