#include <doctest.h>

#include <cmath>

#include "dcraudit/distance.hpp"
#include "dcraudit/generators.hpp"
#include "fixtures.hpp"

using namespace dcraudit;

namespace {

Dataset all_same_cat(std::size_t n) {
    Schema s;
    s.features = {FeatureSpec{"c", FeatureKind::Categorical, {"A", "B"}, 0, 0}};
    Dataset d;
    d.schema = s;
    d.rows.assign(n, {Cell::categorical(0)});
    return d;
}

}  // namespace

TEST_CASE("IndHist reproduces a degenerate marginal") {
    Dataset train = all_same_cat(10);
    GeneratorSpec spec;
    spec.kind = GeneratorKind::IndHist;
    FittedGenerator g = fit(spec, train);
    const auto& state = std::get<IndHistState>(g.state);
    CHECK(state.marginals[0].weights[0] == 10.0);
    CHECK(state.marginals[0].weights[1] == 0.0);

    Dataset sample = g.sample(100, 7);
    REQUIRE(sample.size() == 100);
    CHECK(sample.role == Role::Synthetic);
    for (const auto& r : sample.rows) CHECK(r[0].cat == 0);
}

TEST_CASE("fit rejects tiny training sets") {
    GeneratorSpec spec;
    CHECK_THROWS_AS(fit(spec, all_same_cat(1)), InsufficientDataError);
}

TEST_CASE("mutual_information basic cases") {
    SUBCASE("independent features stay near zero") {
        Rng rng(5);
        Schema s;
        s.features = {FeatureSpec{"a", FeatureKind::Categorical, {"0", "1"}, 0, 0},
                      FeatureSpec{"b", FeatureKind::Categorical, {"0", "1"}, 0, 0}};
        Dataset d;
        d.schema = s;
        for (int i = 0; i < 10000; ++i)
            d.rows.push_back({Cell::categorical(static_cast<std::int32_t>(rng.uniform_index(2))),
                              Cell::categorical(static_cast<std::int32_t>(rng.uniform_index(2)))});
        CHECK(mutual_information(d, 0, 1) <= 0.01);
    }
    SUBCASE("deterministic copy gives ln 2; MI(f,f) is the entropy") {
        Dataset d = fixtures::correlated_binary(2000, 1.0, 9);
        CHECK(mutual_information(d, 0, 1) == doctest::Approx(std::log(2.0)).epsilon(0.01));
        CHECK(mutual_information(d, 0, 0) == doctest::Approx(std::log(2.0)).epsilon(0.01));
    }
    SUBCASE("fixed 3x3 contingency table matches direct evaluation") {
        Schema s;
        s.features = {FeatureSpec{"a", FeatureKind::Categorical, {"0", "1", "2"}, 0, 0},
                      FeatureSpec{"b", FeatureKind::Categorical, {"0", "1", "2"}, 0, 0}};
        // counts[a][b]
        int counts[3][3] = {{5, 1, 0}, {2, 7, 1}, {0, 3, 6}};
        Dataset d;
        d.schema = s;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < counts[a][b]; ++c)
                    d.rows.push_back({Cell::categorical(a), Cell::categorical(b)});
        double n = 25.0;
        double expected = 0.0;
        for (int a = 0; a < 3; ++a) {
            double pa = (counts[a][0] + counts[a][1] + counts[a][2]) / n;
            for (int b = 0; b < 3; ++b) {
                double pb = (counts[0][b] + counts[1][b] + counts[2][b]) / n;
                double pab = counts[a][b] / n;
                if (pab > 0) expected += pab * std::log(pab / (pa * pb));
            }
        }
        CHECK(mutual_information(d, 0, 1) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("BayNet links perfectly correlated binary features") {
    Dataset train = fixtures::correlated_binary(500, 1.0, 21);
    GeneratorSpec spec;
    spec.kind = GeneratorKind::BayNet;
    spec.max_parents = 1;
    FittedGenerator g = fit(spec, train);
    const auto& state = std::get<BayNetState>(g.state);
    REQUIRE(state.nodes.size() == 2);
    CHECK(state.nodes[0].parents.empty());
    REQUIRE(state.nodes[1].parents.size() == 1);  // MI > 0 beats the empty parent set
    CHECK(state.nodes[1].parents[0] == state.nodes[0].feature);
}

TEST_CASE("generator dependence properties on correlated data") {
    Dataset train = fixtures::correlated_binary(20000, 0.89, 33);
    double train_mi = mutual_information(train, 0, 1);
    CHECK(train_mi == doctest::Approx(0.346).epsilon(0.15));  // approx 0.35 nats by construction

    GeneratorSpec ih;
    ih.kind = GeneratorKind::IndHist;
    Dataset ih_sample = fit(ih, train).sample(20000, 1);
    CHECK(mutual_information(ih_sample, 0, 1) <= 0.01);

    GeneratorSpec bn;
    bn.kind = GeneratorKind::BayNet;
    Dataset bn_sample = fit(bn, train).sample(20000, 2);
    CHECK(mutual_information(bn_sample, 0, 1) >= 0.5 * train_mi);
}

TEST_CASE("PerfectLeaker emits only training rows") {
    Rng rng(3);
    Dataset train = fixtures::random_mixed(rng, 20, fixtures::mixed_schema());
    GeneratorSpec spec;
    spec.kind = GeneratorKind::PerfectLeaker;
    FittedGenerator g = fit(spec, train);
    CHECK(std::get<PerfectLeakerState>(g.state).rows.size() == train.size());

    Dataset sample = g.sample(train.size(), 99);
    for (const auto& r : sample.rows) {
        bool found = false;
        for (const auto& t : train.rows)
            if (records_equal(r, t, train.schema)) {
                found = true;
                break;
            }
        CHECK(found);
    }
    // at n = |train| every training row is present exactly once
    CHECK(ims_count(train, sample) == train.size());
}

TEST_CASE("NullModel state is independent of training row identities") {
    Rng rng(13);
    Schema schema = fixtures::mixed_schema();
    Dataset train_a = fixtures::random_mixed(rng, 30, schema);
    Dataset train_b = fixtures::random_mixed(rng, 30, schema);
    GeneratorSpec spec;
    spec.kind = GeneratorKind::NullModel;
    spec.seed = 5;
    FittedGenerator ga = fit(spec, train_a);
    FittedGenerator gb = fit(spec, train_b);
    Dataset sa = ga.sample(50, 77);
    Dataset sb = gb.sample(50, 77);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i)
        CHECK(records_equal(sa.rows[i], sb.rows[i], schema));
}

TEST_CASE("UniqueValueLeaker stores and emits the unique-category trigger") {
    Rng rng(41);
    Dataset train = fixtures::toy_population(300, 7, true);  // last row holds the only ZZ
    GeneratorSpec spec;
    spec.kind = GeneratorKind::UniqueValueLeaker;
    spec.emit_probability = 0.9;
    FittedGenerator g = fit(spec, train);
    const auto& state = std::get<UniqueValueLeakerState>(g.state);
    REQUIRE(state.has_trigger);
    CHECK(train.schema.features[state.trigger_feature].name == "country");
    CHECK(train.schema.features[state.trigger_feature].domain[state.trigger_value] == "ZZ");

    Dataset sample = g.sample(1000, 11);
    std::size_t hits = 0;
    for (const auto& r : sample.rows)
        if (r[state.trigger_feature].cat == state.trigger_value) ++hits;
    double frac = static_cast<double>(hits) / 1000.0;
    CHECK(frac == doctest::Approx(0.9).epsilon(0.034));  // binomial band

    // without a unique category there is no trigger
    Dataset no_unique = fixtures::toy_population(300, 7, false);
    FittedGenerator g2 = fit(spec, no_unique);
    CHECK_FALSE(std::get<UniqueValueLeakerState>(g2.state).has_trigger);
}

TEST_CASE("trigger overwrite shifts distances by at most one Hamming unit") {
    Dataset train = fixtures::toy_population(200, 19, true);
    GeneratorSpec spec;
    spec.kind = GeneratorKind::UniqueValueLeaker;
    FittedGenerator g = fit(spec, train);
    const auto& state = std::get<UniqueValueLeakerState>(g.state);
    REQUIRE(state.has_trigger);
    Dataset sample = g.sample(100, 3);
    DistanceConfig cfg;
    for (const auto& rec : sample.rows) {
        Record reverted = rec;
        reverted[state.trigger_feature] = Cell::categorical(0);
        for (const auto& t : train.rows) {
            double with = record_distance(rec, t, train.schema, cfg);
            double without = record_distance(reverted, t, train.schema, cfg);
            CHECK(std::abs(with - without) <= 1.0 + 1e-12);
        }
        if (sample.rows.size() > 5) break;  // a handful of rows is enough
    }
}

TEST_CASE("fit and sample are deterministic and schema-conformant") {
    Rng rng(55);
    Dataset train = fixtures::random_mixed(rng, 50, fixtures::mixed_schema());
    for (auto kind : {GeneratorKind::IndHist, GeneratorKind::BayNet, GeneratorKind::PerfectLeaker,
                      GeneratorKind::NullModel, GeneratorKind::UniqueValueLeaker}) {
        GeneratorSpec spec;
        spec.kind = kind;
        spec.seed = 42;
        Dataset a = fit(spec, train).sample(30, 9);
        Dataset b = fit(spec, train).sample(30, 9);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(records_equal(a.rows[i], b.rows[i], train.schema));
        CHECK_NOTHROW(a.validate());
    }
}

TEST_CASE("fitted model json round-trips through sampling") {
    Rng rng(61);
    Dataset train = fixtures::random_mixed(rng, 40, fixtures::mixed_schema());
    for (auto kind : {GeneratorKind::IndHist, GeneratorKind::BayNet, GeneratorKind::PerfectLeaker,
                      GeneratorKind::NullModel, GeneratorKind::UniqueValueLeaker}) {
        GeneratorSpec spec;
        spec.kind = kind;
        FittedGenerator g = fit(spec, train);
        FittedGenerator back = fitted_generator_from_json(to_json(g));
        Dataset a = g.sample(20, 4);
        Dataset b = back.sample(20, 4);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(records_equal(a.rows[i], b.rows[i], train.schema));
    }
}
