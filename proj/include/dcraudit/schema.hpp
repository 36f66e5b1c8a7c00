#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace dcraudit {

// Error taxonomy. DataError maps to CLI exit code 2, UsageError to 1,
// anything else to 3.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingValueError : DataError { using DataError::DataError; };
struct UnknownCategoryError : DataError { using DataError::DataError; };
struct MalformedError : DataError { using DataError::DataError; };
struct SchemaMismatchError : DataError { using DataError::DataError; };
struct InsufficientRowsError : DataError { using DataError::DataError; };
struct IndexOutOfRangeError : DataError { using DataError::DataError; };
struct EmptyReferenceError : DataError { using DataError::DataError; };
struct EmptyVectorError : DataError { using DataError::DataError; };
struct InsufficientDataError : DataError { using DataError::DataError; };
struct DegenerateLabelsError : DataError { using DataError::DataError; };
struct CountExceedsDatasetError : DataError { using DataError::DataError; };
struct LengthMismatchError : DataError { using DataError::DataError; };

enum class FeatureKind { Categorical, Numeric };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Categorical;
    std::vector<std::string> domain;  // Categorical only
    double min = 0.0;                 // Numeric only
    double max = 0.0;

    bool operator==(const FeatureSpec&) const = default;

    // index of a category in the domain, -1 if absent
    int category_index(const std::string& value) const {
        for (std::size_t i = 0; i < domain.size(); ++i)
            if (domain[i] == value) return static_cast<int>(i);
        return -1;
    }
};

struct Schema {
    std::vector<FeatureSpec> features;

    bool operator==(const Schema&) const = default;

    std::size_t feature_count() const { return features.size(); }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < features.size(); ++i)
            if (features[i].name == name) return static_cast<int>(i);
        return -1;
    }

    void validate() const {
        std::unordered_set<std::string> names;
        for (const auto& f : features) {
            if (f.name.empty()) throw SchemaMismatchError("schema: empty feature name");
            if (!names.insert(f.name).second)
                throw SchemaMismatchError("schema: duplicate feature name '" + f.name + "'");
            if (f.kind == FeatureKind::Categorical) {
                if (f.domain.empty())
                    throw SchemaMismatchError("schema: feature '" + f.name + "' has empty domain");
                std::unordered_set<std::string> vals;
                for (const auto& v : f.domain)
                    if (!vals.insert(v).second)
                        throw SchemaMismatchError("schema: feature '" + f.name +
                                                  "' has duplicate domain value '" + v + "'");
            } else {
                if (!(f.min <= f.max))
                    throw SchemaMismatchError("schema: feature '" + f.name + "' has min > max");
            }
        }
    }
};

// One table cell. The active member is implied by the schema position:
// cat is a domain index for categorical features, num a finite real for
// numeric ones.
struct Cell {
    double num = 0.0;
    std::int32_t cat = -1;

    static Cell categorical(std::int32_t index) {
        Cell c;
        c.cat = index;
        return c;
    }
    static Cell numeric(double value) {
        Cell c;
        c.num = value;
        return c;
    }
};

using Record = std::vector<Cell>;

inline bool records_equal(const Record& a, const Record& b, const Schema& schema) {
    if (a.size() != b.size()) return false;
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
        if (schema.features[f].kind == FeatureKind::Categorical) {
            if (a[f].cat != b[f].cat) return false;
        } else {
            if (a[f].num != b[f].num) return false;
        }
    }
    return true;
}

enum class Role { Target, Holdout, Aux, Synthetic, Shadow, Unlabeled };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Target: return "target";
        case Role::Holdout: return "holdout";
        case Role::Aux: return "aux";
        case Role::Synthetic: return "synthetic";
        case Role::Shadow: return "shadow";
        default: return "unlabeled";
    }
}

struct Dataset {
    Schema schema;
    std::vector<Record> rows;
    Role role = Role::Unlabeled;

    std::size_t size() const { return rows.size(); }
    std::size_t feature_count() const { return schema.feature_count(); }

    void validate() const {
        schema.validate();
        const std::size_t k = schema.feature_count();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != k)
                throw MalformedError("row " + std::to_string(i) + ": expected " +
                                     std::to_string(k) + " values, got " +
                                     std::to_string(rows[i].size()));
            for (std::size_t f = 0; f < k; ++f) {
                const auto& spec = schema.features[f];
                if (spec.kind == FeatureKind::Categorical) {
                    if (rows[i][f].cat < 0 ||
                        rows[i][f].cat >= static_cast<std::int32_t>(spec.domain.size()))
                        throw UnknownCategoryError("row " + std::to_string(i) + ", column '" +
                                                   spec.name + "': category index out of domain");
                } else {
                    if (!std::isfinite(rows[i][f].num))
                        throw MalformedError("row " + std::to_string(i) + ", column '" +
                                             spec.name + "': non-finite numeric value");
                }
            }
        }
    }
};

inline void require_same_schema(const Dataset& a, const Dataset& b) {
    if (!(a.schema == b.schema)) throw SchemaMismatchError("datasets have different schemas");
}

}  // namespace dcraudit
