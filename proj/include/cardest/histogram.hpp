#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cardest/predicate.hpp"
#include "cardest/value.hpp"

namespace cardest {

struct HistogramMcv {
    Value value;
    double prob;
};

// Equi-height interval: carries no explicit frequency, only the number of
// distinct values it holds. Its mass is the shared residual slice.
struct HistogramBucket {
    Value lo;
    Value hi;
    std::size_t distinct_count = 0;
};

// End-biased histogram: exact probabilities for the k most common values,
// the remaining mass split equally across at most j intervals over the
// residual values. MCVs are stored in value order; buckets partition the
// residual values contiguously in value order and never contain an MCV.
struct EndBiasedHistogram {
    std::vector<HistogramMcv> mcvs;
    std::vector<HistogramBucket> buckets;
    std::size_t total_rows = 0;
    std::size_t k_config = 0;
    std::size_t j_config = 0;

    static EndBiasedHistogram empty_hist(std::size_t k, std::size_t j) {
        EndBiasedHistogram h;
        h.k_config = k;
        h.j_config = j;
        return h;
    }

    bool is_empty() const { return total_rows == 0; }

    double mcv_mass() const {
        double s = 0.0;
        for (const auto& m : mcvs) s += m.prob;
        return s;
    }

    double residual_mass() const { return buckets.empty() ? 0.0 : 1.0 - mcv_mass(); }

    // Mass carried by each bucket (equi-height by construction).
    double bucket_mass() const {
        if (buckets.empty()) return 0.0;
        return residual_mass() / static_cast<double>(buckets.size());
    }

    // Cells are indexed MCVs first (value order), then buckets.
    std::size_t cell_count() const { return mcvs.size() + buckets.size(); }

    bool cell_is_mcv(std::size_t cell) const { return cell < mcvs.size(); }

    double cell_mass(std::size_t cell) const {
        if (cell < mcvs.size()) return mcvs[cell].prob;
        return bucket_mass();
    }

    // Cell containing the value, if any.
    std::optional<std::size_t> locate(const Value& v) const {
        auto it = std::lower_bound(mcvs.begin(), mcvs.end(), v,
                                   [](const HistogramMcv& m, const Value& x) { return m.value < x; });
        if (it != mcvs.end() && it->value == v)
            return static_cast<std::size_t>(it - mcvs.begin());
        auto bit = std::upper_bound(buckets.begin(), buckets.end(), v,
                                    [](const Value& x, const HistogramBucket& b) { return x < b.lo; });
        if (bit != buckets.begin()) {
            --bit;
            if (v >= bit->lo && v <= bit->hi)
                return mcvs.size() + static_cast<std::size_t>(bit - buckets.begin());
        }
        return std::nullopt;
    }

    // Values stored on disk: one slot per MCV, one per bucket.
    std::size_t stored_values() const { return mcvs.size() + buckets.size(); }
};

namespace detail {

inline bool span_is_numeric(const Value& lo, const Value& hi) {
    return lo.is_numeric() && hi.is_numeric();
}

// Fraction of a bucket's mass matched by a range predicate. Numeric spans are
// interpolated linearly on the value axis; text spans contribute half the
// bucket when a range boundary falls inside; the null sentinel (only ever the
// low end of the first bucket) is never matched.
inline double bucket_range_fraction(const HistogramBucket& b, const ValuePredicate& pred) {
    const std::size_t d = b.distinct_count;
    if (d == 0) return 0.0;
    const bool has_null = b.lo.is_null();
    const double matchable = static_cast<double>(d - (has_null ? 1 : 0));
    if (matchable <= 0.0) return 0.0;

    if (has_null) {
        // Low end of the span is unknown; only the upper bound is usable.
        if (pred.lo && compare(*pred.lo, b.hi) > 0) return 0.0;
        const bool full = !pred.lo && pred.matches(b.hi);
        const double f = full ? 1.0 : 0.5;
        return f * matchable / static_cast<double>(d);
    }

    if (pred.matches(b.lo) && pred.matches(b.hi)) return 1.0;

    Value olo = b.lo, ohi = b.hi;
    if (pred.lo && compare(*pred.lo, olo) > 0) olo = *pred.lo;
    if (pred.hi && compare(*pred.hi, ohi) < 0) ohi = *pred.hi;
    const int c = compare(olo, ohi);
    if (c >= 0) return 0.0;  // empty or measure-zero point overlap

    if (span_is_numeric(b.lo, b.hi)) {
        const long double span = b.hi.as_number() - b.lo.as_number();
        if (span <= 0.0L) return 0.0;
        const long double f = (ohi.as_number() - olo.as_number()) / span;
        return std::clamp(static_cast<double>(f), 0.0, 1.0);
    }
    return 0.5;
}

}  // namespace detail

// Mass of one histogram cell matched by a predicate. Equality inside a bucket
// follows the uniform-within-interval rule: bucket mass divided by its
// distinct count.
inline double cell_pred_mass(const EndBiasedHistogram& h, std::size_t cell,
                             const ValuePredicate& pred) {
    if (cell < h.mcvs.size()) {
        const auto& m = h.mcvs[cell];
        return pred.matches(m.value) ? m.prob : 0.0;
    }
    const auto& b = h.buckets[cell - h.mcvs.size()];
    if (pred.kind == ValuePredicate::Kind::Equality) {
        if (pred.value.is_null()) return 0.0;
        if (pred.value >= b.lo && pred.value <= b.hi && b.distinct_count > 0)
            return h.bucket_mass() / static_cast<double>(b.distinct_count);
        return 0.0;
    }
    return h.bucket_mass() * detail::bucket_range_fraction(b, pred);
}

// P(predicate) under the histogram's distribution.
inline double histogram_prob(const EndBiasedHistogram& h, const ValuePredicate& pred) {
    if (h.is_empty()) return 0.0;
    if (pred.kind == ValuePredicate::Kind::Equality) {
        if (pred.value.is_null()) return 0.0;
        const auto cell = h.locate(pred.value);
        if (!cell) return 0.0;
        return cell_pred_mass(h, *cell, pred);
    }
    if (pred.is_empty_range()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < h.cell_count(); ++i) acc += cell_pred_mass(h, i, pred);
    return std::clamp(acc, 0.0, 1.0);
}

// Builds the end-biased histogram of a column. Top-k selection breaks
// frequency ties toward the smaller value; residual values are cut into at
// most j buckets of near-equal row mass, the last bucket absorbing any
// remainder.
inline EndBiasedHistogram build_end_biased(const std::vector<Value>& column, std::size_t k,
                                           std::size_t j) {
    if (column.empty()) throw std::invalid_argument("cannot build histogram of an empty column");
    if (k < 1) throw std::invalid_argument("histogram requires k >= 1");

    std::unordered_map<Value, std::size_t, ValueHash> counts;
    counts.reserve(column.size() / 4 + 8);
    for (const Value& v : column) ++counts[v];

    std::vector<std::pair<Value, std::size_t>> by_value(counts.begin(), counts.end());
    std::sort(by_value.begin(), by_value.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Rank by (count desc, value asc); by_value is already value-ascending so
    // a stable sort on count keeps the tie-break.
    std::vector<std::size_t> order(by_value.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return by_value[a].second > by_value[b].second;
    });

    EndBiasedHistogram h;
    h.k_config = k;
    h.j_config = j;
    h.total_rows = column.size();
    const double total = static_cast<double>(column.size());

    const std::size_t n_mcv = std::min(k, by_value.size());
    std::vector<char> is_mcv(by_value.size(), 0);
    for (std::size_t r = 0; r < n_mcv; ++r) is_mcv[order[r]] = 1;

    for (std::size_t i = 0; i < by_value.size(); ++i)
        if (is_mcv[i])
            h.mcvs.push_back({by_value[i].first, static_cast<double>(by_value[i].second) / total});

    std::vector<std::size_t> residual;
    std::size_t residual_rows = 0;
    for (std::size_t i = 0; i < by_value.size(); ++i) {
        if (!is_mcv[i]) {
            residual.push_back(i);
            residual_rows += by_value[i].second;
        }
    }
    if (residual.empty()) return h;
    if (j == 0)
        throw std::invalid_argument(
            "column has more distinct values than k and no buckets are allowed (j = 0)");

    const double target = static_cast<double>(residual_rows) / static_cast<double>(j);
    std::size_t acc = 0;
    std::size_t first = 0;
    for (std::size_t pos = 0; pos < residual.size(); ++pos) {
        acc += by_value[residual[pos]].second;
        const bool last = pos + 1 == residual.size();
        if ((static_cast<double>(acc) >= target || last) && h.buckets.size() < j) {
            HistogramBucket b;
            b.lo = by_value[residual[first]].first;
            b.hi = by_value[residual[pos]].first;
            b.distinct_count = pos - first + 1;
            h.buckets.push_back(std::move(b));
            first = pos + 1;
            acc = 0;
        }
    }
    if (first < residual.size()) {
        // Remainder after the j-th cut is absorbed by the last bucket.
        auto& b = h.buckets.back();
        b.hi = by_value[residual.back()].first;
        b.distinct_count += residual.size() - first;
    }
    return h;
}

// Exact number of distinct values; the null sentinel counts as one.
inline std::size_t distinct_count(const std::vector<Value>& column) {
    std::unordered_set<Value, ValueHash> seen;
    seen.reserve(column.size() / 4 + 8);
    for (const Value& v : column) seen.insert(v);
    return seen.size();
}

}  // namespace cardest
