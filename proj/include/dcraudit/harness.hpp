#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcraudit/attack.hpp"
#include "dcraudit/csv.hpp"
#include "dcraudit/generators.hpp"
#include "dcraudit/privacy.hpp"
#include "dcraudit/split.hpp"
#include "dcraudit/vulnerability.hpp"

namespace dcraudit {

// Sample Pearson coefficient; nullopt when either side has zero variance.
inline std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw LengthMismatchError("pearson: length mismatch");
    if (xs.size() < 2) throw UsageError("pearson: need >= 2 points");
    const auto n = static_cast<long double>(xs.size());
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        long double dx = xs[i] - mx;
        long double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

struct ExperimentConfig {
    std::string data_csv;
    std::string schema_path;
    SplitSpec split;
    GeneratorSpec generator;
    DistanceConfig distance;
    GameConfig game;
    std::size_t n_targets = 20;
    std::size_t achilles_k = 5;
    double auc_leak_threshold = 0.6;
    std::string output_dir;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_targets < 1) throw UsageError("experiment: n_targets must be >= 1");
        if (!(auc_leak_threshold >= 0.5 && auc_leak_threshold <= 1.0))
            throw UsageError("experiment: auc_leak_threshold must be in [0.5, 1]");
        generator.validate();
        distance.validate();
        game.validate();
    }
};

inline NumericScaling scaling_from_name(const std::string& s) {
    if (s == "none" || s == "None") return NumericScaling::None;
    if (s == "minmax" || s == "MinMaxOnTarget") return NumericScaling::MinMaxOnTarget;
    throw UsageError("unknown numeric scaling '" + s + "'");
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto& data = j.at("data");
    cfg.data_csv = data.at("csv").get<std::string>();
    cfg.schema_path = data.at("schema").get<std::string>();
    const auto& sp = j.at("split");
    cfg.split.target_size = sp.at("target_size").get<std::size_t>();
    cfg.split.holdout_size = sp.at("holdout_size").get<std::size_t>();
    cfg.split.aux_size = sp.at("aux_size").get<std::size_t>();
    if (sp.contains("seed")) cfg.split.seed = sp["seed"].get<std::uint64_t>();
    cfg.generator = generator_spec_from_json(j.at("generator"));
    if (j.contains("distance")) {
        const auto& dj = j["distance"];
        if (dj.contains("numeric_scaling"))
            cfg.distance.numeric_scaling = scaling_from_name(dj["numeric_scaling"].get<std::string>());
        if (dj.contains("percentile_p")) cfg.distance.percentile_p = dj["percentile_p"].get<double>();
    }
    if (j.contains("game")) {
        const auto& gj = j["game"];
        if (gj.contains("n_shadow")) cfg.game.n_shadow = gj["n_shadow"].get<std::size_t>();
        if (gj.contains("n_eval")) cfg.game.n_eval = gj["n_eval"].get<std::size_t>();
        if (gj.contains("shadow_size")) cfg.game.shadow_size = gj["shadow_size"].get<std::size_t>();
        if (gj.contains("n_queries")) cfg.game.n_queries = gj["n_queries"].get<std::size_t>();
        if (gj.contains("query_subset_max"))
            cfg.game.query_subset_max = gj["query_subset_max"].get<std::size_t>();
        if (gj.contains("classifier")) {
            const auto& cj = gj["classifier"];
            if (cj.contains("l2_penalty")) cfg.game.classifier.l2_penalty = cj["l2_penalty"].get<double>();
            if (cj.contains("max_iterations"))
                cfg.game.classifier.max_iterations = cj["max_iterations"].get<std::size_t>();
            if (cj.contains("tolerance")) cfg.game.classifier.tolerance = cj["tolerance"].get<double>();
        }
    }
    if (j.contains("n_targets")) cfg.n_targets = j["n_targets"].get<std::size_t>();
    if (j.contains("achilles_k")) cfg.achilles_k = j["achilles_k"].get<std::size_t>();
    if (j.contains("auc_leak_threshold")) cfg.auc_leak_threshold = j["auc_leak_threshold"].get<double>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    return experiment_config_from_json(j);
}

struct PerTargetResult {
    std::size_t record_index = 0;
    double achilles_score = 0.0;
    double mia_auc = 0.0;
    double tpr_at_fpr0 = 0.0;
    double mean_mu_dcr = 0.0;
    double pct_fail_tau_dcr = 0.0;       // fraction in [0,1]
    double pct_fail_tau_combined = 0.0;  // fraction in [0,1]
};

struct ExperimentReport {
    std::vector<PerTargetResult> per_target;
    double frac_private_tau_dcr = 0.0;
    double frac_private_tau_combined = 0.0;
    double frac_targets_auc_ge_threshold = 0.0;
    std::optional<double> pearson_mu_dcr_vs_auc;
    std::optional<double> pearson_mu_dcr_vs_tpr;
    double auc_leak_threshold = 0.6;
    // margin sweep rows: (dataset_id, p, margin); dataset_id = "<record>:<eval world>"
    std::vector<std::tuple<std::string, double, double>> margin_sweep;
    // per-eval-dataset detail used by compare_private_vs_all
    struct EvalDataset {
        std::size_t record_index;
        std::size_t world_index;
        int label;
        double score;
        int tau_dcr;
        int tau_combined;
        double mu_dcr;
    };
    std::vector<EvalDataset> eval_datasets;
};

inline nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : r.per_target) {
        targets.push_back(nlohmann::json{{"record_index", t.record_index},
                                         {"achilles_score", t.achilles_score},
                                         {"mia_auc", t.mia_auc},
                                         {"tpr_at_fpr0", t.tpr_at_fpr0},
                                         {"mean_mu_dcr", t.mean_mu_dcr},
                                         {"pct_fail_tau_dcr", t.pct_fail_tau_dcr},
                                         {"pct_fail_tau_combined", t.pct_fail_tau_combined}});
    }
    nlohmann::json aggregate{
        {"frac_private_tau_dcr", r.frac_private_tau_dcr},
        {"frac_private_tau_combined", r.frac_private_tau_combined},
        {"frac_targets_auc_ge_threshold", r.frac_targets_auc_ge_threshold},
        {"auc_leak_threshold", r.auc_leak_threshold},
    };
    aggregate["pearson_mu_dcr_vs_auc"] =
        r.pearson_mu_dcr_vs_auc ? nlohmann::json(*r.pearson_mu_dcr_vs_auc) : nlohmann::json(nullptr);
    aggregate["pearson_mu_dcr_vs_tpr"] =
        r.pearson_mu_dcr_vs_tpr ? nlohmann::json(*r.pearson_mu_dcr_vs_tpr) : nlohmann::json(nullptr);
    return nlohmann::json{{"per_target", targets}, {"aggregate", aggregate}};
}

// AUC over all evaluation datasets vs. only those whose proxy verdict was
// "private" (tau_combined = 1).
struct PrivateVsAll {
    double auc_all = 0.0;
    double auc_private_only = 0.0;
};

inline PrivateVsAll compare_private_vs_all(
    const std::vector<ExperimentReport::EvalDataset>& eval_datasets) {
    std::vector<std::pair<double, int>> all, private_only;
    for (const auto& e : eval_datasets) {
        all.emplace_back(e.score, e.label);
        if (e.tau_combined) private_only.emplace_back(e.score, e.label);
    }
    if (private_only.empty())
        throw DegenerateLabelsError("compare_private_vs_all: no datasets passed the privacy test");
    PrivateVsAll out;
    out.auc_all = roc_auc(all);
    out.auc_private_only = roc_auc(private_only);
    return out;
}

namespace detail {

inline void write_report_files(const std::filesystem::path& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "report.json", std::ios::binary);
        out << to_json(report).dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "per_target.csv", std::ios::binary);
        out << "record_index,achilles_score,mia_auc,tpr_at_fpr0,mean_mu_dcr,pct_fail_tau_dcr,"
               "pct_fail_tau_combined\n";
        for (const auto& t : report.per_target)
            out << t.record_index << ',' << format_real(t.achilles_score) << ','
                << format_real(t.mia_auc) << ',' << format_real(t.tpr_at_fpr0) << ','
                << format_real(t.mean_mu_dcr) << ',' << format_real(t.pct_fail_tau_dcr) << ','
                << format_real(t.pct_fail_tau_combined) << '\n';
    }
    {
        std::ofstream out(dir / "mu_dcr_vs_auc.csv", std::ios::binary);
        out << "record_index,mean_mu_dcr,mia_auc\n";
        for (const auto& t : report.per_target)
            out << t.record_index << ',' << format_real(t.mean_mu_dcr) << ','
                << format_real(t.mia_auc) << '\n';
    }
    {
        std::ofstream out(dir / "margin_sweep.csv", std::ios::binary);
        out << "dataset_id,p,margin\n";
        for (const auto& [id, p, margin] : report.margin_sweep)
            out << id << ',' << format_real(p) << ',' << format_real(margin) << '\n';
    }
}

}  // namespace detail

// Full pipeline: load, split, select vulnerable targets, per-target MIA
// games with per-evaluation-dataset proxy privacy tests, then the
// comparison statistics of the report. Deterministic given the config.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       std::ostream* progress = nullptr,
                                       const std::vector<double>& p_grid = default_p_grid()) {
    cfg.validate();
    Dataset source = load_csv(cfg.data_csv, cfg.schema_path);
    SplitResult splits = split(source, cfg.split);
    const Dataset& target_ds = splits.target;

    auto scores = achilles_scores(target_ds, cfg.achilles_k, cfg.distance);
    auto targets = select_targets(scores, cfg.n_targets);

    // holdout-side distances against the target split are fixed across all
    // evaluation datasets; compute once
    DistanceBundle holdout_bundle = distance_bundle(splits.holdout, target_ds, cfg.distance);

    ExperimentReport report;
    report.auc_leak_threshold = cfg.auc_leak_threshold;

    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::size_t record_index = targets[t];
        if (progress)
            (*progress) << "[experiment] target " << (t + 1) << "/" << targets.size() << " (record "
                        << record_index << ")\n"
                        << std::flush;
        GameConfig game = cfg.game;
        game.seed = derive_seed(cfg.seed, "game", record_index);

        std::size_t fails_dcr = 0, fails_combined = 0;
        double mu_sum = 0.0;
        std::vector<ExperimentReport::EvalDataset> local_evals;
        std::vector<std::tuple<std::string, double, double>> local_margins;

        auto observer = [&](std::size_t world, int label, const Dataset& synthetic) {
            DistanceBundle syn = distance_bundle(synthetic, target_ds, cfg.distance);
            PrivacyReport pr = privacy_report_from_bundles(syn, holdout_bundle, cfg.distance.percentile_p);
            if (!pr.tau_dcr) ++fails_dcr;
            if (!pr.tau_combined) ++fails_combined;
            mu_sum += pr.mu_dcr;
            local_evals.push_back({record_index, world, label, 0.0, pr.tau_dcr, pr.tau_combined, pr.mu_dcr});
            std::string id = std::to_string(record_index) + ":" + std::to_string(world);
            auto margins = margins_from_vectors(syn.dcr, holdout_bundle.dcr, p_grid);
            for (std::size_t g = 0; g < p_grid.size(); ++g)
                local_margins.emplace_back(id, p_grid[g], margins[g]);
        };

        AttackOutcome outcome = run_game(target_ds, record_index, splits.holdout, splits.aux,
                                         cfg.generator, game, observer);
        for (auto& e : local_evals) e.score = outcome.scores[e.world_index].first;

        PerTargetResult row;
        row.record_index = record_index;
        row.achilles_score = scores[record_index].score;
        row.mia_auc = outcome.auc;
        row.tpr_at_fpr0 = outcome.tpr_at_fpr0;
        row.mean_mu_dcr = mu_sum / static_cast<double>(game.n_eval);
        row.pct_fail_tau_dcr = static_cast<double>(fails_dcr) / static_cast<double>(game.n_eval);
        row.pct_fail_tau_combined =
            static_cast<double>(fails_combined) / static_cast<double>(game.n_eval);
        report.per_target.push_back(row);
        report.eval_datasets.insert(report.eval_datasets.end(), local_evals.begin(),
                                    local_evals.end());
        report.margin_sweep.insert(report.margin_sweep.end(), local_margins.begin(),
                                   local_margins.end());
    }

    // aggregates
    std::size_t n_eval_total = report.eval_datasets.size();
    std::size_t pass_dcr = 0, pass_combined = 0;
    for (const auto& e : report.eval_datasets) {
        if (e.tau_dcr) ++pass_dcr;
        if (e.tau_combined) ++pass_combined;
    }
    if (n_eval_total > 0) {
        report.frac_private_tau_dcr = static_cast<double>(pass_dcr) / static_cast<double>(n_eval_total);
        report.frac_private_tau_combined =
            static_cast<double>(pass_combined) / static_cast<double>(n_eval_total);
    }
    std::size_t leaky = 0;
    std::vector<double> mus, aucs, tprs;
    for (const auto& t : report.per_target) {
        if (t.mia_auc >= cfg.auc_leak_threshold) ++leaky;
        mus.push_back(t.mean_mu_dcr);
        aucs.push_back(t.mia_auc);
        tprs.push_back(t.tpr_at_fpr0);
    }
    report.frac_targets_auc_ge_threshold =
        static_cast<double>(leaky) / static_cast<double>(report.per_target.size());
    if (report.per_target.size() >= 2) {
        report.pearson_mu_dcr_vs_auc = pearson(mus, aucs);
        report.pearson_mu_dcr_vs_tpr = pearson(mus, tprs);
    }

    if (!cfg.output_dir.empty()) detail::write_report_files(cfg.output_dir, report);
    return report;
}

// Margin curves only: the dcr_margin_sweep of every evaluation synthetic
// dataset, as (dataset_id, p, margin) rows.
inline std::vector<std::tuple<std::string, double, double>> sweep_report(
    const ExperimentConfig& cfg, const std::vector<double>& p_grid, std::ostream* progress = nullptr) {
    if (p_grid.empty()) return {};
    ExperimentConfig local = cfg;
    local.output_dir.clear();
    ExperimentReport report = run_experiment(local, progress, p_grid);
    return report.margin_sweep;
}

}  // namespace dcraudit
