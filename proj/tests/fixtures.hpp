#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcraudit/rng.hpp"
#include "dcraudit/schema.hpp"

namespace fixtures {

using namespace dcraudit;

inline Schema mixed_schema() {
    Schema s;
    s.features = {
        FeatureSpec{"x", FeatureKind::Numeric, {}, 0.0, 10.0},
        FeatureSpec{"y", FeatureKind::Numeric, {}, -5.0, 5.0},
        FeatureSpec{"color", FeatureKind::Categorical, {"red", "green", "blue"}, 0, 0},
        FeatureSpec{"shape", FeatureKind::Categorical, {"circle", "square", "triangle", "star"}, 0, 0},
    };
    return s;
}

inline Dataset random_mixed(Rng& rng, std::size_t n, const Schema& schema) {
    Dataset d;
    d.schema = schema;
    d.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Record r(schema.feature_count());
        for (std::size_t f = 0; f < schema.feature_count(); ++f) {
            const auto& spec = schema.features[f];
            if (spec.kind == FeatureKind::Numeric)
                r[f] = Cell::numeric(rng.uniform_real(spec.min, spec.max));
            else
                r[f] = Cell::categorical(static_cast<std::int32_t>(rng.uniform_index(spec.domain.size())));
        }
        d.rows.push_back(std::move(r));
    }
    return d;
}

// Correlated toy population used across acceptance runs and bundled as
// data/toy.csv: age and income share a latent factor, sector follows it
// noisily, country is an independent weighted draw. With plant_unique, the
// last row is an isolated outlier holding the only "ZZ" country value.
inline Schema toy_schema() {
    Schema s;
    s.features = {
        FeatureSpec{"age", FeatureKind::Numeric, {}, 15.0, 100.0},
        FeatureSpec{"income", FeatureKind::Numeric, {}, 0.0, 1000.0},
        FeatureSpec{"sector", FeatureKind::Categorical, {"edu", "health", "retail", "tech"}, 0, 0},
        FeatureSpec{"country", FeatureKind::Categorical, {"DE", "FR", "UK", "US", "ZZ"}, 0, 0},
    };
    return s;
}

inline Dataset toy_population(std::size_t n, std::uint64_t seed, bool plant_unique) {
    Schema schema = toy_schema();
    Rng rng(derive_seed(seed, "toy-population"));
    Dataset d;
    d.schema = schema;
    d.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform_real();
        double age = 20.0 + 55.0 * u + 1.0 * (rng.uniform_real() - 0.5);
        double income = 100.0 + 700.0 * u + 10.0 * (rng.uniform_real() - 0.5);
        std::int32_t sector;
        if (rng.bernoulli(0.05))
            sector = static_cast<std::int32_t>(rng.uniform_index(4));
        else
            sector = static_cast<std::int32_t>(std::min(3.0, std::floor(u * 4.0)));
        double c = rng.uniform_real();
        std::int32_t country = c < 0.4 ? 3 : c < 0.7 ? 2 : c < 0.9 ? 1 : 0;  // US/UK/FR/DE
        Record r(4);
        r[0] = Cell::numeric(age);
        r[1] = Cell::numeric(income);
        r[2] = Cell::categorical(sector);
        r[3] = Cell::categorical(country);
        d.rows.push_back(std::move(r));
    }
    if (plant_unique && n > 0) {
        Record r(4);
        r[0] = Cell::numeric(98.5);
        r[1] = Cell::numeric(995.0);
        r[2] = Cell::categorical(3);  // tech
        r[3] = Cell::categorical(4);  // the only ZZ
        d.rows.back() = std::move(r);
    }
    return d;
}

// two correlated binary categorical features: b copies a with probability q
inline Dataset correlated_binary(std::size_t n, double q, std::uint64_t seed) {
    Schema s;
    s.features = {
        FeatureSpec{"a", FeatureKind::Categorical, {"0", "1"}, 0, 0},
        FeatureSpec{"b", FeatureKind::Categorical, {"0", "1"}, 0, 0},
    };
    Rng rng(derive_seed(seed, "correlated-binary"));
    Dataset d;
    d.schema = s;
    d.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto a = static_cast<std::int32_t>(rng.uniform_index(2));
        std::int32_t b = rng.bernoulli(q) ? a : (1 - a);
        d.rows.push_back({Cell::categorical(a), Cell::categorical(b)});
    }
    return d;
}

}  // namespace fixtures
