#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardest/schema.hpp"
#include "cardest/value.hpp"

namespace cardest {

struct CsvError : std::runtime_error {
    CsvError(std::string msg, std::size_t row, std::size_t col)
        : std::runtime_error(std::move(msg)), row(row), col(col) {}
    std::size_t row;  // 1-based data row, 0 = header
    std::size_t col;  // 0-based column
};

// Column-major table of values. Immutable after ingestion: builders hand out
// fresh objects, readers share freely.
struct Relation {
    Schema schema;
    std::vector<std::vector<Value>> columns;
    std::size_t row_count = 0;

    const std::vector<Value>& column(std::size_t i) const { return columns[i]; }

    Value cell(std::size_t row, std::size_t col) const { return columns[col][row]; }
};

namespace detail {

// RFC-4180 record reader: comma separator, double-quote quoting, quotes
// escaped by doubling, newlines allowed inside quoted fields. CR before LF
// is stripped.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    if (in.peek() == EOF) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
    if (!any) return false;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    return true;
}

inline Value parse_cell(const std::string& text, ValueType type, std::size_t row, std::size_t col) {
    if (text.empty()) return Value::null();
    switch (type) {
        case ValueType::Int: {
            char* end = nullptr;
            errno = 0;
            const long long v = std::strtoll(text.c_str(), &end, 10);
            if (errno != 0 || end != text.c_str() + text.size())
                throw CsvError("cannot parse '" + text + "' as int", row, col);
            return Value{static_cast<std::int64_t>(v)};
        }
        case ValueType::Float: {
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(text.c_str(), &end);
            if (errno != 0 || end != text.c_str() + text.size())
                throw CsvError("cannot parse '" + text + "' as float", row, col);
            return Value{v};
        }
        case ValueType::Text:
            return Value{text};
    }
    return Value::null();
}

inline std::string escape_csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace detail

inline Relation ingest_csv(std::istream& in, const Schema& schema) {
    Relation rel;
    rel.schema = schema;
    rel.columns.assign(schema.size(), {});

    std::vector<std::string> fields;
    if (!detail::read_csv_record(in, fields))
        throw CsvError("missing header row", 0, 0);
    if (fields.size() != schema.size())
        throw CsvError("header has " + std::to_string(fields.size()) + " columns, schema has " +
                           std::to_string(schema.size()),
                       0, 0);
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != schema.attributes[i].name)
            throw CsvError("header column '" + fields[i] + "' does not match schema attribute '" +
                               schema.attributes[i].name + "'",
                           0, i);

    std::size_t row = 0;
    while (detail::read_csv_record(in, fields)) {
        ++row;
        if (fields.size() != schema.size())
            throw CsvError("row has " + std::to_string(fields.size()) + " fields", row, 0);
        for (std::size_t i = 0; i < fields.size(); ++i)
            rel.columns[i].push_back(detail::parse_cell(fields[i], schema.attributes[i].type, row, i));
    }
    rel.row_count = row;
    return rel;
}

inline Relation ingest_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open CSV file: " + path, 0, 0);
    return ingest_csv(in, schema);
}

// Nulls render as empty cells; floats use round-trip precision so a generated
// file reloads bit-identically.
inline void write_csv(std::ostream& out, const Relation& rel) {
    for (std::size_t i = 0; i < rel.schema.size(); ++i) {
        if (i) out << ',';
        out << detail::escape_csv_field(rel.schema.attributes[i].name);
    }
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < rel.row_count; ++r) {
        for (std::size_t c = 0; c < rel.schema.size(); ++c) {
            if (c) out << ',';
            const Value& v = rel.columns[c][r];
            if (v.is_null()) continue;
            if (v.is_int()) {
                out << v.as_int();
            } else if (v.is_float()) {
                std::snprintf(buf, sizeof(buf), "%.17g", v.as_float());
                out << buf;
            } else {
                out << detail::escape_csv_field(v.as_text());
            }
        }
        out << '\n';
    }
}

inline void write_csv(const std::string& path, const Relation& rel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open CSV file for writing: " + path, 0, 0);
    write_csv(out, rel);
}

}  // namespace cardest
