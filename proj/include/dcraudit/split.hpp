#pragma once

#include <cstdint>
#include <numeric>
#include <tuple>

#include "dcraudit/rng.hpp"
#include "dcraudit/schema.hpp"

namespace dcraudit {

struct SplitSpec {
    std::size_t target_size = 0;
    std::size_t holdout_size = 0;
    std::size_t aux_size = 0;
    std::uint64_t seed = 0;

    void validate(std::size_t source_size) const {
        if (target_size < 1 || holdout_size < 1 || aux_size < 1)
            throw UsageError("split: all sizes must be >= 1");
        if (target_size + holdout_size + aux_size > source_size)
            throw InsufficientRowsError("split: sizes " + std::to_string(target_size) + "+" +
                                        std::to_string(holdout_size) + "+" + std::to_string(aux_size) +
                                        " exceed source size " + std::to_string(source_size));
    }
};

struct SplitResult {
    Dataset target;
    Dataset holdout;
    Dataset aux;
};

// Disjoint target/holdout/aux samples without replacement, via a seeded
// Fisher-Yates shuffle of the row indices.
inline SplitResult split(const Dataset& source, const SplitSpec& spec) {
    spec.validate(source.size());
    std::vector<std::size_t> order(source.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(spec.seed, "split"));
    rng.shuffle(order);

    auto take = [&](std::size_t offset, std::size_t count, Role role) {
        Dataset d;
        d.schema = source.schema;
        d.role = role;
        d.rows.reserve(count);
        for (std::size_t i = 0; i < count; ++i) d.rows.push_back(source.rows[order[offset + i]]);
        return d;
    };

    SplitResult r;
    r.target = take(0, spec.target_size, Role::Target);
    r.holdout = take(spec.target_size, spec.holdout_size, Role::Holdout);
    r.aux = take(spec.target_size + spec.holdout_size, spec.aux_size, Role::Aux);
    return r;
}

// Copy of d with the row at index replaced; d itself is untouched.
inline Dataset replace_record(const Dataset& d, std::size_t index, const Record& r) {
    if (index >= d.size())
        throw IndexOutOfRangeError("replace_record: index " + std::to_string(index) +
                                   " out of range for dataset of size " + std::to_string(d.size()));
    if (r.size() != d.feature_count())
        throw SchemaMismatchError("replace_record: record has wrong arity");
    Dataset out = d;
    out.rows[index] = r;
    return out;
}

}  // namespace dcraudit
