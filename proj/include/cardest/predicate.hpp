#pragma once

#include <optional>

#include "cardest/value.hpp"

namespace cardest {

// Value-level test: an equality or a (possibly half-open) range. The null
// sentinel never matches anything, mirroring SQL comparison semantics.
struct ValuePredicate {
    enum class Kind { Equality, Range };

    Kind kind = Kind::Equality;
    Value value;                // equality payload
    std::optional<Value> lo;    // absent = -inf
    std::optional<Value> hi;    // absent = +inf
    bool lo_inclusive = true;
    bool hi_inclusive = true;

    static ValuePredicate equals(Value v) {
        ValuePredicate p;
        p.kind = Kind::Equality;
        p.value = std::move(v);
        return p;
    }

    static ValuePredicate range(std::optional<Value> lo, std::optional<Value> hi,
                                bool lo_inclusive = true, bool hi_inclusive = true) {
        ValuePredicate p;
        p.kind = Kind::Range;
        p.lo = std::move(lo);
        p.hi = std::move(hi);
        p.lo_inclusive = lo_inclusive;
        p.hi_inclusive = hi_inclusive;
        return p;
    }

    bool matches(const Value& v) const {
        if (v.is_null()) return false;
        if (kind == Kind::Equality) return !value.is_null() && v == value;
        if (lo) {
            const int c = compare(v, *lo);
            if (c < 0 || (c == 0 && !lo_inclusive)) return false;
        }
        if (hi) {
            const int c = compare(v, *hi);
            if (c > 0 || (c == 0 && !hi_inclusive)) return false;
        }
        return true;
    }

    // A range whose bounds cross matches nothing.
    bool is_empty_range() const {
        if (kind != Kind::Range || !lo || !hi) return false;
        const int c = compare(*lo, *hi);
        return c > 0 || (c == 0 && !(lo_inclusive && hi_inclusive));
    }
};

// Intersection of two predicates on the same attribute; nullopt when the
// conjunction is unsatisfiable.
inline std::optional<ValuePredicate> intersect(const ValuePredicate& a, const ValuePredicate& b) {
    auto as_range = [](const ValuePredicate& p) {
        if (p.kind == ValuePredicate::Kind::Range) return p;
        return ValuePredicate::range(p.value, p.value, true, true);
    };
    const ValuePredicate ra = as_range(a), rb = as_range(b);

    ValuePredicate out;
    out.kind = ValuePredicate::Kind::Range;
    out.lo = ra.lo;
    out.lo_inclusive = ra.lo_inclusive;
    if (rb.lo) {
        if (!out.lo || compare(*rb.lo, *out.lo) > 0) {
            out.lo = rb.lo;
            out.lo_inclusive = rb.lo_inclusive;
        } else if (compare(*rb.lo, *out.lo) == 0) {
            out.lo_inclusive = out.lo_inclusive && rb.lo_inclusive;
        }
    }
    out.hi = ra.hi;
    out.hi_inclusive = ra.hi_inclusive;
    if (rb.hi) {
        if (!out.hi || compare(*rb.hi, *out.hi) < 0) {
            out.hi = rb.hi;
            out.hi_inclusive = rb.hi_inclusive;
        } else if (compare(*rb.hi, *out.hi) == 0) {
            out.hi_inclusive = out.hi_inclusive && rb.hi_inclusive;
        }
    }
    if (out.is_empty_range()) return std::nullopt;
    // Collapse a closed point interval back to an equality.
    if (out.lo && out.hi && compare(*out.lo, *out.hi) == 0 && out.lo_inclusive && out.hi_inclusive)
        return ValuePredicate::equals(*out.lo);
    return out;
}

}  // namespace cardest
