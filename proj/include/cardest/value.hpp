#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>

namespace cardest {

enum class ValueType { Int, Float, Text };

inline const char* to_string(ValueType t) {
    switch (t) {
        case ValueType::Int: return "int";
        case ValueType::Float: return "float";
        case ValueType::Text: return "text";
    }
    return "?";
}

// A typed scalar: the atom of every column and predicate. The null sentinel
// sorts below everything, numbers compare numerically across int/float, and
// text compares byte-lexicographically above all numbers.
class Value {
public:
    Value() = default;  // null sentinel
    explicit Value(std::int64_t v) : data_(v) {}
    explicit Value(double v) : data_(v) {}
    explicit Value(std::string v) : data_(std::move(v)) {}

    static Value null() { return Value{}; }

    bool is_null() const { return std::holds_alternative<std::monostate>(data_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_float() const { return std::holds_alternative<double>(data_); }
    bool is_text() const { return std::holds_alternative<std::string>(data_); }
    bool is_numeric() const { return is_int() || is_float(); }

    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_float() const { return std::get<double>(data_); }
    const std::string& as_text() const { return std::get<std::string>(data_); }

    // Numeric payload widened to long double. The x86-64 long double has a
    // 64-bit mantissa, so every int64 is represented exactly and int/float
    // comparisons are never lossy.
    long double as_number() const {
        return is_int() ? static_cast<long double>(as_int())
                        : static_cast<long double>(as_float());
    }

    // Total order: null < numeric < text. Returns <0, 0, >0.
    friend int compare(const Value& a, const Value& b) {
        const int ra = a.rank(), rb = b.rank();
        if (ra != rb) return ra < rb ? -1 : 1;
        switch (ra) {
            case 0: return 0;  // both null
            case 1: {
                if (a.is_int() && b.is_int()) {
                    const auto x = a.as_int(), y = b.as_int();
                    return x < y ? -1 : (x > y ? 1 : 0);
                }
                const long double x = a.as_number(), y = b.as_number();
                return x < y ? -1 : (x > y ? 1 : 0);
            }
            default: return a.as_text().compare(b.as_text()) < 0    ? -1
                            : (a.as_text() == b.as_text() ? 0 : 1);
        }
    }

    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Value& a, const Value& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Value& a, const Value& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Value& a, const Value& b) { return compare(a, b) >= 0; }

    std::string to_display() const {
        if (is_null()) return "NULL";
        if (is_int()) return std::to_string(as_int());
        if (is_float()) return std::to_string(as_float());
        return as_text();
    }

private:
    int rank() const {
        if (is_null()) return 0;
        if (is_numeric()) return 1;
        return 2;
    }

    std::variant<std::monostate, std::int64_t, double, std::string> data_;
};

// Hash consistent with numeric cross-type equality: an integral double hashes
// like the int64 it equals.
struct ValueHash {
    std::size_t operator()(const Value& v) const {
        if (v.is_null()) return 0x9e3779b97f4a7c15ULL;
        if (v.is_text()) return std::hash<std::string>{}(v.as_text());
        if (v.is_int()) return std::hash<std::int64_t>{}(v.as_int());
        const double d = v.as_float();
        if (std::floor(d) == d && d >= -9.2233720368547758e18 && d < 9.2233720368547758e18)
            return std::hash<std::int64_t>{}(static_cast<std::int64_t>(d));
        return std::hash<double>{}(d);
    }
};

struct ValueLess {
    bool operator()(const Value& a, const Value& b) const { return compare(a, b) < 0; }
};

}  // namespace cardest
