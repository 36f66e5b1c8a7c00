#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <unordered_set>
#include <vector>

#include "dcraudit/parallel.hpp"
#include "dcraudit/schema.hpp"

namespace dcraudit {

enum class NumericScaling { None, MinMaxOnTarget };
enum class NnTieBreak { LowestIndex };

struct DistanceConfig {
    NumericScaling numeric_scaling = NumericScaling::MinMaxOnTarget;
    NnTieBreak nn_tie_break = NnTieBreak::LowestIndex;
    double percentile_p = 0.05;

    void validate() const {
        if (!(percentile_p >= 0.0 && percentile_p <= 1.0))
            throw UsageError("percentile_p must be in [0,1]");
    }
};

enum class DistanceMetric { DCR, NNDR };

struct DistanceVector {
    std::vector<double> values;
    DistanceMetric metric = DistanceMetric::DCR;
};

namespace detail {

// Per-feature numeric scale factors (1/(max-min), or 0 for a zero range so
// the delta collapses to 0).
inline std::vector<double> numeric_scales(const Schema& schema, const DistanceConfig& cfg) {
    std::vector<double> s(schema.feature_count(), 1.0);
    if (cfg.numeric_scaling == NumericScaling::MinMaxOnTarget) {
        for (std::size_t f = 0; f < schema.feature_count(); ++f) {
            const auto& spec = schema.features[f];
            if (spec.kind == FeatureKind::Numeric) {
                double range = spec.max - spec.min;
                s[f] = range > 0.0 ? 1.0 / range : 0.0;
            }
        }
    }
    return s;
}

inline double record_distance_scaled(const Record& a, const Record& b, const Schema& schema,
                                     const std::vector<double>& scales) {
    double sq = 0.0;
    double hamming = 0.0;
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
        if (schema.features[f].kind == FeatureKind::Numeric) {
            double d = (a[f].num - b[f].num) * scales[f];
            sq += d * d;
        } else {
            hamming += (a[f].cat != b[f].cat) ? 1.0 : 0.0;
        }
    }
    return std::sqrt(sq) + hamming;
}

struct RecordHash {
    const Schema* schema;
    std::size_t operator()(const Record* r) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ULL;
        };
        for (std::size_t f = 0; f < schema->features.size(); ++f) {
            if (schema->features[f].kind == FeatureKind::Categorical) {
                mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>((*r)[f].cat)));
            } else {
                double v = (*r)[f].num == 0.0 ? 0.0 : (*r)[f].num;  // normalize -0.0
                std::uint64_t bits;
                std::memcpy(&bits, &v, sizeof bits);
                mix(bits);
            }
        }
        return static_cast<std::size_t>(h);
    }
};

struct RecordEq {
    const Schema* schema;
    bool operator()(const Record* a, const Record* b) const {
        return records_equal(*a, *b, *schema);
    }
};

}  // namespace detail

// Joint L2 over scaled numeric features plus Hamming count over categorical
// ones.
inline double record_distance(const Record& a, const Record& b, const Schema& schema,
                              const DistanceConfig& cfg) {
    if (a.size() != schema.feature_count() || b.size() != schema.feature_count())
        throw SchemaMismatchError("record_distance: record arity does not match schema");
    return detail::record_distance_scaled(a, b, schema, detail::numeric_scales(schema, cfg));
}

// Two smallest distances from each record of d1 into d2, in one scan.
// nn2[i] is +inf when |d2| == 1. Ties keep the lowest d2 index.
struct NearestTwo {
    std::vector<double> nn1;
    std::vector<double> nn2;
};

inline NearestTwo nearest_two(const Dataset& d1, const Dataset& d2, const DistanceConfig& cfg) {
    require_same_schema(d1, d2);
    if (d2.size() == 0) throw EmptyReferenceError("nearest-neighbor scan: empty reference dataset");
    const auto scales = detail::numeric_scales(d1.schema, cfg);
    NearestTwo out;
    out.nn1.assign(d1.size(), std::numeric_limits<double>::infinity());
    out.nn2.assign(d1.size(), std::numeric_limits<double>::infinity());
    const Schema& schema = d1.schema;
    parallel_for(d1.size(), [&](std::size_t i) {
        double best1 = std::numeric_limits<double>::infinity();
        double best2 = std::numeric_limits<double>::infinity();
        for (const auto& ref : d2.rows) {
            double d = detail::record_distance_scaled(d1.rows[i], ref, schema, scales);
            if (d < best1) {
                best2 = best1;
                best1 = d;
            } else if (d < best2) {
                best2 = d;
            }
        }
        out.nn1[i] = best1;
        out.nn2[i] = best2;
    });
    return out;
}

inline DistanceVector dcr_vector(const Dataset& d1, const Dataset& d2, const DistanceConfig& cfg) {
    if (d2.size() < 1) throw EmptyReferenceError("dcr_vector: reference dataset is empty");
    DistanceVector v;
    v.metric = DistanceMetric::DCR;
    v.values = nearest_two(d1, d2, cfg).nn1;
    return v;
}

inline double nndr_ratio(double nn1, double nn2) {
    if (nn2 == 0.0) return 1.0;  // duplicate of two reference records
    return nn1 / nn2;
}

inline DistanceVector nndr_vector(const Dataset& d1, const Dataset& d2, const DistanceConfig& cfg) {
    if (d2.size() < 2) throw EmptyReferenceError("nndr_vector: reference dataset needs >= 2 records");
    auto nt = nearest_two(d1, d2, cfg);
    DistanceVector v;
    v.metric = DistanceMetric::NNDR;
    v.values.resize(nt.nn1.size());
    for (std::size_t i = 0; i < nt.nn1.size(); ++i) v.values[i] = nndr_ratio(nt.nn1[i], nt.nn2[i]);
    return v;
}

// Number of records in d1 with an exact (all-feature) match in d2;
// duplicates in d1 count once each.
inline std::size_t ims_count(const Dataset& d1, const Dataset& d2) {
    require_same_schema(d1, d2);
    detail::RecordHash hash{&d2.schema};
    detail::RecordEq eq{&d2.schema};
    std::unordered_set<const Record*, detail::RecordHash, detail::RecordEq> lookup(
        d2.size() * 2 + 1, hash, eq);
    for (const auto& r : d2.rows) lookup.insert(&r);
    std::size_t n = 0;
    for (const auto& r : d1.rows)
        if (lookup.count(&r)) ++n;
    return n;
}

// Inclusive linear-interpolation percentile over a sorted copy.
inline double percentile(std::vector<double> v, double p) {
    if (v.empty()) throw EmptyVectorError("percentile: empty vector");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("percentile: p must be in [0,1]");
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    double pos = p * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= v.size() - 1) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace dcraudit
