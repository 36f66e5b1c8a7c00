// dcraudit: privacy auditing for synthetic tabular data.
//
// stdout carries machine-readable payload only; diagnostics go to stderr.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dcraudit/attack.hpp"
#include "dcraudit/csv.hpp"
#include "dcraudit/generators.hpp"
#include "dcraudit/harness.hpp"
#include "dcraudit/privacy.hpp"
#include "dcraudit/vulnerability.hpp"

namespace {

using namespace dcraudit;

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        try {
            grid.push_back(std::stod(s.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw UsageError("sweep: bad grid value '" + s.substr(pos, comma - pos) + "'");
        }
        pos = comma + 1;
    }
    return grid;
}

int run(int argc, char** argv) {
    CLI::App app{"privacy auditing toolkit for synthetic tabular data"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "worker pool size (0 = available parallelism)");

    // audit
    auto* audit = app.add_subcommand("audit", "run the proxy privacy tests on a synthetic dataset");
    std::string a_synthetic, a_target, a_holdout, a_schema, a_scaling = "minmax";
    double a_p = 0.05;
    audit->add_option("--synthetic", a_synthetic, "synthetic CSV")->required();
    audit->add_option("--target", a_target, "target (training) CSV")->required();
    audit->add_option("--holdout", a_holdout, "holdout CSV")->required();
    audit->add_option("--schema", a_schema, "schema JSON")->required();
    audit->add_option("--p", a_p, "comparison percentile (default 0.05)");
    audit->add_option("--scaling", a_scaling, "numeric scaling: minmax|none");

    // generate
    auto* generate = app.add_subcommand("generate", "fit a generator and sample a synthetic CSV");
    std::string g_train, g_schema, g_kind = "IndHist", g_out, g_model_out;
    std::size_t g_n = 0, g_bins = 10, g_max_parents = 2;
    double g_alpha = 1.0, g_emit = 0.9;
    std::uint64_t g_seed = 0;
    generate->add_option("--train", g_train, "training CSV")->required();
    generate->add_option("--schema", g_schema, "schema JSON")->required();
    generate->add_option("--kind", g_kind, "IndHist|BayNet|PerfectLeaker|NullModel|UniqueValueLeaker");
    generate->add_option("--n", g_n, "number of synthetic rows")->required();
    generate->add_option("--seed", g_seed, "sampling seed");
    generate->add_option("--bins", g_bins, "discretization bins");
    generate->add_option("--max-parents", g_max_parents, "BayNet max parents");
    generate->add_option("--alpha", g_alpha, "BayNet CPT smoothing");
    generate->add_option("--emit-prob", g_emit, "UniqueValueLeaker emit probability");
    generate->add_option("--out", g_out, "output CSV path")->required();
    generate->add_option("--model-out", g_model_out, "optional fitted-model JSON cache path");

    // score
    auto* score = app.add_subcommand("score", "Achilles vulnerability scores for a dataset");
    std::string s_data, s_schema, s_scaling = "minmax", s_out;
    std::size_t s_k = 5;
    score->add_option("--data", s_data, "CSV")->required();
    score->add_option("--schema", s_schema, "schema JSON")->required();
    score->add_option("--k", s_k, "nearest neighbors per score");
    score->add_option("--scaling", s_scaling, "numeric scaling: minmax|none");
    score->add_option("--out", s_out, "output CSV (default stdout)");

    // attack
    auto* attack = app.add_subcommand("attack", "run the MIA game for one target record");
    std::string at_config, at_outdir;
    std::size_t at_index = 0;
    attack->add_option("--config", at_config, "experiment config JSON")->required();
    attack->add_option("--target-index", at_index, "record index within the target split")->required();
    attack->add_option("--out", at_outdir, "output directory for the scores CSV");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run the full proxy-vs-MIA experiment");
    std::string e_config;
    experiment->add_option("--config", e_config, "experiment config JSON")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "tau_DCR margin across percentile thresholds");
    std::string sw_config, sw_grid;
    sweep->add_option("--config", sw_config, "experiment config JSON")->required();
    sweep->add_option("--grid", sw_grid, "comma-separated percentiles (default 0,0.01,...,0.1)");

    // infer-schema
    auto* infer = app.add_subcommand("infer-schema", "infer a schema JSON from a CSV");
    std::string i_csv;
    double i_threshold = 1.0;
    infer->add_option("--csv", i_csv, "input CSV")->required();
    infer->add_option("--numeric-threshold", i_threshold, "fraction of parseable reals required");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    thread_count() = threads;

    if (*audit) {
        Schema schema = load_schema(a_schema);
        DistanceConfig cfg;
        cfg.numeric_scaling = scaling_from_name(a_scaling);
        cfg.percentile_p = a_p;
        cfg.validate();
        std::ifstream fs(a_synthetic, std::ios::binary), ft(a_target, std::ios::binary),
            fh(a_holdout, std::ios::binary);
        if (!fs) throw UsageError("cannot open csv file: " + a_synthetic);
        if (!ft) throw UsageError("cannot open csv file: " + a_target);
        if (!fh) throw UsageError("cannot open csv file: " + a_holdout);
        Dataset synthetic = load_csv(fs, schema, a_synthetic);
        Dataset target = load_csv(ft, schema, a_target);
        Dataset holdout = load_csv(fh, schema, a_holdout);
        PrivacyReport report = privacy_tests(synthetic, target, holdout, cfg);
        std::cout << to_json(report).dump(2) << '\n';
    } else if (*generate) {
        if (g_n == 0) throw UsageError("generate: --n must be >= 1");
        Dataset train = load_csv(g_train, g_schema);
        GeneratorSpec spec;
        spec.kind = generator_kind_from_name(g_kind);
        spec.bins = g_bins;
        spec.max_parents = g_max_parents;
        spec.laplace_alpha = g_alpha;
        spec.emit_probability = g_emit;
        spec.seed = g_seed;
        spec.validate();
        FittedGenerator g = fit(spec, train);
        if (!g_model_out.empty()) {
            std::ofstream mo(g_model_out, std::ios::binary);
            if (!mo) throw UsageError("cannot open output file: " + g_model_out);
            mo << to_json(g).dump(2) << '\n';
        }
        write_csv(g_out, g.sample(g_n, g_seed));
    } else if (*score) {
        Dataset data = load_csv(s_data, s_schema);
        DistanceConfig cfg;
        cfg.numeric_scaling = scaling_from_name(s_scaling);
        auto scores = achilles_scores(data, s_k, cfg);
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!s_out.empty()) {
            file.open(s_out, std::ios::binary);
            if (!file) throw UsageError("cannot open output file: " + s_out);
            out = &file;
        }
        (*out) << "record_index,score\n";
        for (const auto& s : scores)
            (*out) << s.record_index << ',' << detail::format_real(s.score) << '\n';
    } else if (*attack) {
        ExperimentConfig cfg = load_experiment_config(at_config);
        Dataset source = load_csv(cfg.data_csv, cfg.schema_path);
        SplitResult splits = split(source, cfg.split);
        GameConfig game = cfg.game;
        game.seed = derive_seed(cfg.seed, "game", at_index);
        AttackOutcome outcome =
            run_game(splits.target, at_index, splits.holdout, splits.aux, cfg.generator, game);
        std::cout << to_json(outcome).dump(2) << '\n';
        if (!at_outdir.empty()) {
            std::filesystem::create_directories(at_outdir);
            std::ofstream out(std::filesystem::path(at_outdir) /
                                  ("scores_" + std::to_string(at_index) + ".csv"),
                              std::ios::binary);
            out << "world_index,label,score\n";
            for (std::size_t w = 0; w < outcome.scores.size(); ++w)
                out << w << ',' << outcome.scores[w].second << ','
                    << detail::format_real(outcome.scores[w].first) << '\n';
        }
    } else if (*experiment) {
        ExperimentConfig cfg = load_experiment_config(e_config);
        if (cfg.output_dir.empty()) throw UsageError("experiment: config must set output_dir");
        auto parent = std::filesystem::path(cfg.output_dir).parent_path();
        if (!parent.empty() && !std::filesystem::exists(parent))
            throw UsageError("experiment: output_dir parent does not exist: " + parent.string());
        run_experiment(cfg, &std::cerr);
    } else if (*sweep) {
        ExperimentConfig cfg = load_experiment_config(sw_config);
        std::vector<double> grid = sw_grid.empty() ? default_p_grid() : parse_grid(sw_grid);
        auto rows = sweep_report(cfg, grid, &std::cerr);
        std::cout << "dataset_id,p,margin\n";
        for (const auto& [id, p, margin] : rows)
            std::cout << id << ',' << detail::format_real(p) << ',' << detail::format_real(margin)
                      << '\n';
    } else if (*infer) {
        Schema schema = infer_schema(i_csv, i_threshold);
        std::cout << schema_to_json(schema).dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dcraudit::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const dcraudit::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
