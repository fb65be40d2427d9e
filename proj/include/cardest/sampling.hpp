#pragma once

#include <stdexcept>

#include "cardest/relation.hpp"
#include "cardest/rng.hpp"

namespace cardest {

// Row-level Bernoulli sample. Each row is kept independently with the given
// rate, decided by a counter-based draw keyed on (seed, row index): the result
// is a pure function of (relation, rate, seed) and independent of row order
// processing.
inline Relation bernoulli_sample(const Relation& rel, double rate, std::uint64_t seed) {
    if (!(rate > 0.0) || rate > 1.0)
        throw std::invalid_argument("sample rate must be in (0, 1]");

    Relation out;
    out.schema = rel.schema;
    out.columns.assign(rel.schema.size(), {});

    std::vector<std::size_t> kept;
    kept.reserve(static_cast<std::size_t>(static_cast<double>(rel.row_count) * rate) + 16);
    for (std::size_t r = 0; r < rel.row_count; ++r)
        if (keyed_uniform(seed, r) < rate) kept.push_back(r);

    for (std::size_t c = 0; c < rel.schema.size(); ++c) {
        out.columns[c].reserve(kept.size());
        for (std::size_t r : kept) out.columns[c].push_back(rel.columns[c][r]);
    }
    out.row_count = kept.size();
    return out;
}

}  // namespace cardest
