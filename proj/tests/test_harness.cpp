#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "dcraudit/harness.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dcraudit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("dcraudit-test-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

ExperimentConfig tiny_config(const TempDir& dir) {
    Dataset pop = fixtures::toy_population(160, 11, false);
    write_csv((dir.path / "toy.csv").string(), pop);
    std::ofstream((dir.path / "toy_schema.json").string()) << schema_to_json(pop.schema).dump(2);

    ExperimentConfig cfg;
    cfg.data_csv = (dir.path / "toy.csv").string();
    cfg.schema_path = (dir.path / "toy_schema.json").string();
    cfg.split = SplitSpec{40, 40, 80, 5};
    cfg.generator.kind = GeneratorKind::IndHist;
    cfg.game.n_shadow = 8;
    cfg.game.n_eval = 8;
    cfg.game.n_queries = 12;
    cfg.n_targets = 3;
    cfg.achilles_k = 5;
    cfg.seed = 123;
    return cfg;
}

}  // namespace

TEST_CASE("pearson basics and oracle") {
    CHECK(*pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_FALSE(pearson({1, 1, 1}, {2, 4, 6}).has_value());
    CHECK_FALSE(pearson({2, 4, 6}, {3, 3, 3}).has_value());
    CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), LengthMismatchError);
    CHECK_THROWS_AS(pearson({1}, {2}), UsageError);

    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + rng.uniform_index(30);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = rng.uniform_real(-10.0, 10.0);
            ys[i] = 0.3 * xs[i] + rng.uniform_real(-5.0, 5.0);
        }
        auto r = pearson(xs, ys);
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(oracles::pearson(xs, ys)).epsilon(1e-12));
        CHECK(std::abs(*r) <= 1.0 + 1e-12);
    }
}

TEST_CASE("experiment config json parsing and validation") {
    nlohmann::json j = {
        {"data", {{"csv", "d.csv"}, {"schema", "s.json"}}},
        {"split", {{"target_size", 10}, {"holdout_size", 10}, {"aux_size", 20}, {"seed", 7}}},
        {"generator", {{"kind", "BayNet"}, {"max_parents", 1}, {"bins", 8}}},
        {"distance", {{"numeric_scaling", "minmax"}, {"percentile_p", 0.1}}},
        {"game", {{"n_shadow", 10}, {"n_eval", 12}, {"n_queries", 30}}},
        {"n_targets", 4},
        {"achilles_k", 3},
        {"auc_leak_threshold", 0.7},
        {"seed", 99},
    };
    ExperimentConfig cfg = experiment_config_from_json(j);
    CHECK(cfg.data_csv == "d.csv");
    CHECK(cfg.split.seed == 7);
    CHECK(cfg.generator.kind == GeneratorKind::BayNet);
    CHECK(cfg.generator.max_parents == 1);
    CHECK(cfg.distance.percentile_p == 0.1);
    CHECK(cfg.game.n_eval == 12);
    CHECK(cfg.n_targets == 4);
    CHECK(cfg.auc_leak_threshold == 0.7);

    nlohmann::json bad = j;
    bad["n_targets"] = 0;
    CHECK_THROWS_AS(experiment_config_from_json(bad), UsageError);
    bad = j;
    bad["game"]["n_shadow"] = 7;  // odd
    CHECK_THROWS_AS(experiment_config_from_json(bad), UsageError);
    bad = j;
    bad["distance"]["numeric_scaling"] = "log";
    CHECK_THROWS_AS(experiment_config_from_json(bad), UsageError);
}

TEST_CASE("run_experiment report is internally consistent") {
    TempDir dir;
    ExperimentConfig cfg = tiny_config(dir);
    ExperimentReport r = run_experiment(cfg);

    REQUIRE(r.per_target.size() == 3);
    REQUIRE(r.eval_datasets.size() == 3 * 8);
    REQUIRE(r.margin_sweep.size() == 3 * 8 * default_p_grid().size());

    // per-target rows describe distinct records that really are the most
    // vulnerable ones in the target split
    Dataset source = load_csv(cfg.data_csv, cfg.schema_path);
    Dataset target_ds = split(source, cfg.split).target;
    auto scores = achilles_scores(target_ds, cfg.achilles_k, cfg.distance);
    auto expected_targets = select_targets(scores, cfg.n_targets);
    for (std::size_t t = 0; t < r.per_target.size(); ++t) {
        const auto& row = r.per_target[t];
        CHECK(row.record_index == expected_targets[t]);
        CHECK(row.achilles_score == scores[row.record_index].score);
        CHECK(row.mia_auc >= 0.0);
        CHECK(row.mia_auc <= 1.0);
        CHECK(row.tpr_at_fpr0 >= 0.0);
        CHECK(row.tpr_at_fpr0 <= 1.0);
        CHECK(row.pct_fail_tau_dcr >= 0.0);
        CHECK(row.pct_fail_tau_dcr <= 1.0);
        // failing tau_dcr implies failing tau_combined
        CHECK(row.pct_fail_tau_combined >= row.pct_fail_tau_dcr);
    }

    // aggregates recompute from the per-dataset detail
    std::size_t pass_dcr = 0, pass_combined = 0;
    for (const auto& e : r.eval_datasets) {
        CHECK((e.label == 0 || e.label == 1));
        CHECK(e.tau_combined <= e.tau_dcr);
        pass_dcr += static_cast<std::size_t>(e.tau_dcr);
        pass_combined += static_cast<std::size_t>(e.tau_combined);
    }
    CHECK(r.frac_private_tau_dcr == doctest::Approx(pass_dcr / 24.0).epsilon(1e-12));
    CHECK(r.frac_private_tau_combined == doctest::Approx(pass_combined / 24.0).epsilon(1e-12));
    CHECK(r.frac_private_tau_combined <= r.frac_private_tau_dcr);

    std::size_t leaky = 0;
    for (const auto& t : r.per_target)
        if (t.mia_auc >= cfg.auc_leak_threshold) ++leaky;
    CHECK(r.frac_targets_auc_ge_threshold == doctest::Approx(leaky / 3.0).epsilon(1e-12));

    // per-target mean mu_dcr equals the mean over its evaluation datasets
    for (const auto& row : r.per_target) {
        double sum = 0;
        std::size_t count = 0;
        for (const auto& e : r.eval_datasets)
            if (e.record_index == row.record_index) {
                sum += e.mu_dcr;
                ++count;
            }
        REQUIRE(count == 8);
        CHECK(row.mean_mu_dcr == doctest::Approx(sum / 8.0).epsilon(1e-12));
    }

    // margin sign at the configured p agrees with the tau_dcr verdict
    for (const auto& e : r.eval_datasets) {
        std::string id = std::to_string(e.record_index) + ":" + std::to_string(e.world_index);
        for (const auto& [mid, p, margin] : r.margin_sweep) {
            if (mid != id || p != cfg.distance.percentile_p) continue;
            CHECK((margin >= 0.0) == (e.tau_dcr == 1));
        }
    }
}

TEST_CASE("run_experiment is reproducible and writes its outputs") {
    TempDir dir;
    ExperimentConfig cfg = tiny_config(dir);
    cfg.output_dir = (dir.path / "out").string();
    ExperimentReport a = run_experiment(cfg);
    ExperimentReport b = run_experiment(cfg);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(a.margin_sweep == b.margin_sweep);

    for (const char* name : {"report.json", "per_target.csv", "mu_dcr_vs_auc.csv", "margin_sweep.csv"})
        CHECK(fs::exists(dir.path / "out" / name));
    std::ifstream in(dir.path / "out" / "report.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.dump() == to_json(a).dump());
}

TEST_CASE("sweep_report matches the experiment's margin rows") {
    TempDir dir;
    ExperimentConfig cfg = tiny_config(dir);
    std::vector<double> grid = {0.0, 0.05, 0.1};
    auto rows = sweep_report(cfg, grid);
    auto full = run_experiment(cfg, nullptr, grid);
    CHECK(rows == full.margin_sweep);
    CHECK(sweep_report(cfg, {}).empty());
}

TEST_CASE("compare_private_vs_all") {
    using E = ExperimentReport::EvalDataset;
    std::vector<E> evals = {
        {0, 0, 1, 0.9, 1, 1, 0.0}, {0, 1, 1, 0.8, 1, 1, 0.0},
        {0, 2, 0, 0.2, 1, 1, 0.0}, {0, 3, 0, 0.1, 1, 1, 0.0},
    };
    SUBCASE("all private: both AUCs coincide") {
        auto out = compare_private_vs_all(evals);
        CHECK(out.auc_all == 1.0);
        CHECK(out.auc_private_only == 1.0);
    }
    SUBCASE("subset changes only the private-side AUC") {
        // the best-scoring member and the worst non-member fail the test
        evals[0].tau_combined = 0;
        evals[3].tau_combined = 0;
        auto out = compare_private_vs_all(evals);
        CHECK(out.auc_all == 1.0);
        CHECK(out.auc_private_only == 1.0);  // 0.8 vs 0.2 still separates
        evals[1].score = 0.15;               // now the private member ranks below
        out = compare_private_vs_all(evals);
        CHECK(out.auc_private_only == 0.0);
    }
    SUBCASE("no private datasets is an error") {
        for (auto& e : evals) e.tau_combined = 0;
        CHECK_THROWS_AS(compare_private_vs_all(evals), DegenerateLabelsError);
    }
}
