#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcraudit/schema.hpp"

namespace dcraudit {

namespace detail {

// RFC 4180 line split with quoted fields. Returns false at end of stream.
inline bool read_csv_row(std::istream& in, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in.get()) != EOF) {
        saw_any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r') {
            // swallow; \r\n handled at \n
        } else if (ch == '\n') {
            out.push_back(std::move(field));
            return true;
        } else {
            field.push_back(ch);
        }
    }
    if (!saw_any) return false;
    out.push_back(std::move(field));
    return true;
}

inline bool parse_real(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q.push_back(c);
    }
    q.push_back('"');
    return q;
}

inline std::string format_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

inline Schema schema_from_json(const nlohmann::json& j) {
    Schema schema;
    if (!j.contains("features") || !j["features"].is_array())
        throw SchemaMismatchError("schema json: missing 'features' array");
    for (const auto& jf : j["features"]) {
        FeatureSpec f;
        f.name = jf.at("name").get<std::string>();
        std::string kind = jf.at("kind").get<std::string>();
        if (kind == "categorical") {
            f.kind = FeatureKind::Categorical;
            f.domain = jf.at("domain").get<std::vector<std::string>>();
        } else if (kind == "numeric") {
            f.kind = FeatureKind::Numeric;
            f.min = jf.at("min").get<double>();
            f.max = jf.at("max").get<double>();
        } else {
            throw SchemaMismatchError("schema json: unknown kind '" + kind + "'");
        }
        schema.features.push_back(std::move(f));
    }
    schema.validate();
    return schema;
}

inline nlohmann::json schema_to_json(const Schema& schema) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : schema.features) {
        nlohmann::json jf;
        jf["name"] = f.name;
        if (f.kind == FeatureKind::Categorical) {
            jf["kind"] = "categorical";
            jf["domain"] = f.domain;
        } else {
            jf["kind"] = "numeric";
            jf["min"] = f.min;
            jf["max"] = f.max;
        }
        features.push_back(std::move(jf));
    }
    return nlohmann::json{{"features", features}};
}

inline Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open schema file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatchError("schema file " + path + ": " + e.what());
    }
    return schema_from_json(j);
}

// Parse a CSV against an explicit schema. Rows come back in file order with
// role Unlabeled; any missing or out-of-domain value is a hard error.
inline Dataset load_csv(std::istream& in, const Schema& schema, const std::string& origin = "csv") {
    schema.validate();
    std::vector<std::string> row;
    if (!detail::read_csv_row(in, row)) throw MalformedError(origin + ": empty file");
    const std::size_t k = schema.feature_count();
    if (row.size() != k)
        throw SchemaMismatchError(origin + ": header has " + std::to_string(row.size()) +
                                  " columns, schema has " + std::to_string(k));
    for (std::size_t f = 0; f < k; ++f)
        if (row[f] != schema.features[f].name)
            throw SchemaMismatchError(origin + ": header column " + std::to_string(f + 1) + " is '" +
                                      row[f] + "', schema expects '" + schema.features[f].name + "'");

    Dataset d;
    d.schema = schema;
    std::size_t line = 1;
    while (detail::read_csv_row(in, row)) {
        ++line;
        if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
        if (row.size() != k)
            throw MalformedError(origin + ": row " + std::to_string(line - 1) + " has " +
                                 std::to_string(row.size()) + " values, expected " + std::to_string(k));
        Record rec(k);
        for (std::size_t f = 0; f < k; ++f) {
            const auto& spec = schema.features[f];
            if (row[f].empty())
                throw MissingValueError(origin + ": row " + std::to_string(line - 1) + ", column '" +
                                        spec.name + "': missing value");
            if (spec.kind == FeatureKind::Categorical) {
                int idx = spec.category_index(row[f]);
                if (idx < 0)
                    throw UnknownCategoryError(origin + ": row " + std::to_string(line - 1) + ", column '" +
                                               spec.name + "': unknown category '" + row[f] + "'");
                rec[f] = Cell::categorical(idx);
            } else {
                double v;
                if (!detail::parse_real(row[f], v))
                    throw MalformedError(origin + ": row " + std::to_string(line - 1) + ", column '" +
                                         spec.name + "': non-numeric value '" + row[f] + "'");
                rec[f] = Cell::numeric(v);
            }
        }
        d.rows.push_back(std::move(rec));
    }
    return d;
}

inline Dataset load_csv(const std::string& path, const std::string& schema_path) {
    Schema schema = load_schema(schema_path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open csv file: " + path);
    return load_csv(in, schema, path);
}

inline void write_csv(std::ostream& out, const Dataset& d) {
    const std::size_t k = d.feature_count();
    for (std::size_t f = 0; f < k; ++f) {
        if (f) out << ',';
        out << detail::csv_escape(d.schema.features[f].name);
    }
    out << '\n';
    for (const auto& rec : d.rows) {
        for (std::size_t f = 0; f < k; ++f) {
            if (f) out << ',';
            const auto& spec = d.schema.features[f];
            if (spec.kind == FeatureKind::Categorical)
                out << detail::csv_escape(spec.domain[static_cast<std::size_t>(rec[f].cat)]);
            else
                out << detail::format_real(rec[f].num);
        }
        out << '\n';
    }
}

inline void write_csv(const std::string& path, const Dataset& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file: " + path);
    write_csv(out, d);
}

// Schema inference: a column is numeric when at least numeric_threshold of
// its values parse as reals, otherwise categorical over the observed values
// sorted lexicographically.
inline Schema infer_schema(std::istream& in, double numeric_threshold = 1.0,
                           const std::string& origin = "csv") {
    std::vector<std::string> header;
    if (!detail::read_csv_row(in, header)) throw MalformedError(origin + ": empty file");
    const std::size_t k = header.size();
    std::vector<std::vector<std::string>> columns(k);
    std::vector<std::string> row;
    std::size_t line = 1;
    while (detail::read_csv_row(in, row)) {
        ++line;
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != k)
            throw MalformedError(origin + ": row " + std::to_string(line - 1) + " has " +
                                 std::to_string(row.size()) + " values, expected " + std::to_string(k));
        for (std::size_t f = 0; f < k; ++f) {
            if (row[f].empty())
                throw MissingValueError(origin + ": row " + std::to_string(line - 1) + ", column '" +
                                        header[f] + "': missing value");
            columns[f].push_back(row[f]);
        }
    }
    if (columns.empty() || columns[0].empty()) throw MalformedError(origin + ": no data rows");

    Schema schema;
    for (std::size_t f = 0; f < k; ++f) {
        FeatureSpec spec;
        spec.name = header[f];
        std::size_t numeric_count = 0;
        double lo = 0, hi = 0;
        bool first = true;
        for (const auto& s : columns[f]) {
            double v;
            if (detail::parse_real(s, v)) {
                ++numeric_count;
                if (first) {
                    lo = hi = v;
                    first = false;
                } else {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        double frac = static_cast<double>(numeric_count) / static_cast<double>(columns[f].size());
        if (numeric_count > 0 && frac >= numeric_threshold) {
            spec.kind = FeatureKind::Numeric;
            spec.min = lo;
            spec.max = hi;
        } else {
            spec.kind = FeatureKind::Categorical;
            spec.domain = columns[f];
            std::sort(spec.domain.begin(), spec.domain.end());
            spec.domain.erase(std::unique(spec.domain.begin(), spec.domain.end()), spec.domain.end());
        }
        schema.features.push_back(std::move(spec));
    }
    schema.validate();
    return schema;
}

inline Schema infer_schema(const std::string& path, double numeric_threshold = 1.0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open csv file: " + path);
    return infer_schema(in, numeric_threshold, path);
}

}  // namespace dcraudit
