#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cardest/chow_liu.hpp"
#include "cardest/histogram.hpp"
#include "cardest/relation.hpp"

namespace cardest {

// Conditional distribution of one child attribute, one end-biased histogram
// per parent cell. Parent cells mirror the parent's own marginal histogram
// (same MCVs, same bucket boundaries), so `rows` aligns index-for-index with
// `parent_hist`'s cells.
struct CompressedCpd {
    std::size_t child = 0;
    std::size_t parent = 0;
    EndBiasedHistogram parent_hist;
    std::vector<EndBiasedHistogram> rows;

    std::size_t stored_values() const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.stored_values();
        return n;
    }
};

// Tree-shaped network for one relation: root marginal plus one compressed
// CPD per non-root attribute.
struct BayesNet {
    TreeStructure structure;
    EndBiasedHistogram root_hist;
    std::vector<std::optional<CompressedCpd>> cpds;  // indexed by child attribute, none at root
    std::size_t sample_row_count = 0;
    std::size_t k_config = 0;
    std::size_t j_config = 0;

    std::size_t attribute_count() const { return structure.size(); }

    std::size_t stored_values() const {
        std::size_t n = root_hist.stored_values();
        for (const auto& c : cpds)
            if (c) n += c->stored_values();
        return n;
    }
};

// GROUP BY parent cell, COUNT child values: one child histogram per parent
// cell, built with the same (k, j). Cells no sample row falls into keep an
// all-zero histogram.
inline CompressedCpd estimate_cpd(const Relation& sample, std::size_t child, std::size_t parent,
                                  const EndBiasedHistogram& parent_hist, std::size_t k,
                                  std::size_t j) {
    if (child >= sample.schema.size() || parent >= sample.schema.size())
        throw std::out_of_range("estimate_cpd: attribute index out of range");

    CompressedCpd cpd;
    cpd.child = child;
    cpd.parent = parent;
    cpd.parent_hist = parent_hist;

    std::vector<std::vector<Value>> groups(parent_hist.cell_count());
    const auto& pcol = sample.columns[parent];
    const auto& ccol = sample.columns[child];
    for (std::size_t r = 0; r < sample.row_count; ++r) {
        const auto cell = parent_hist.locate(pcol[r]);
        if (!cell)
            throw std::invalid_argument("estimate_cpd: parent value not covered by parent histogram");
        groups[*cell].push_back(ccol[r]);
    }

    cpd.rows.reserve(groups.size());
    for (auto& g : groups) {
        if (g.empty())
            cpd.rows.push_back(EndBiasedHistogram::empty_hist(k, j));
        else
            cpd.rows.push_back(build_end_biased(g, k, j));
    }
    return cpd;
}

// Root histogram plus CPDs along the tree edges.
inline BayesNet build_network(const Relation& sample, const TreeStructure& structure,
                              std::size_t k, std::size_t j) {
    const std::size_t n = sample.schema.size();
    if (structure.size() != n)
        throw std::invalid_argument("build_network: structure does not match the sample's attributes");
    if (sample.row_count == 0) throw std::invalid_argument("build_network: empty sample");

    std::vector<EndBiasedHistogram> hists;
    hists.reserve(n);
    for (std::size_t i = 0; i < n; ++i) hists.push_back(build_end_biased(sample.columns[i], k, j));

    BayesNet net;
    net.structure = structure;
    net.root_hist = hists[structure.root];
    net.sample_row_count = sample.row_count;
    net.k_config = k;
    net.j_config = j;
    net.cpds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == structure.root) continue;
        const int p = structure.parent[i];
        if (p < 0) throw std::invalid_argument("build_network: non-root node without parent");
        net.cpds[i] = estimate_cpd(sample, i, static_cast<std::size_t>(p),
                                   hists[static_cast<std::size_t>(p)], k, j);
    }
    return net;
}

// Minimal connected subtree containing the root and every target: each
// target's root-ward path is marked in one walk. Returns sorted node indices.
inline std::vector<std::size_t> extract_steiner(const TreeStructure& structure,
                                                const std::vector<std::size_t>& targets) {
    if (targets.empty()) throw std::invalid_argument("extract_steiner: empty target set");
    std::vector<char> mark(structure.size(), 0);
    mark[structure.root] = 1;
    for (std::size_t t : targets) {
        if (t >= structure.size()) throw std::out_of_range("extract_steiner: unknown attribute");
        std::size_t u = t;
        while (!mark[u]) {
            mark[u] = 1;
            u = static_cast<std::size_t>(structure.parent[u]);
        }
    }
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < mark.size(); ++i)
        if (mark[i]) nodes.push_back(i);
    return nodes;
}

struct InferenceStats {
    std::size_t cpd_rows_touched = 0;
    std::size_t steiner_nodes = 0;
};

namespace detail {

// Fraction of a cell's own span covered by a clipped sub-span, under the same
// interpolation rules as range predicates.
inline double span_fraction(const Value& lo, const Value& hi, const Value& olo, const Value& ohi) {
    if (compare(olo, lo) <= 0 && compare(ohi, hi) >= 0) return 1.0;
    if (span_is_numeric(lo, hi)) {
        const long double span = hi.as_number() - lo.as_number();
        if (span <= 0.0L) return 1.0;
        const long double f = (ohi.as_number() - olo.as_number()) / span;
        return std::clamp(static_cast<double>(f), 0.0, 1.0);
    }
    return 0.5;
}

// Matched fraction of a piece of bucket mass spanning [lo, hi] and holding
// roughly `capacity` distinct values.
inline double piece_pred_fraction(const Value& lo, const Value& hi, double capacity,
                                  const ValuePredicate& pred) {
    if (pred.kind == ValuePredicate::Kind::Equality) {
        if (pred.value.is_null()) return 0.0;
        if (pred.value >= lo && pred.value <= hi) return 1.0 / std::max(capacity, 1.0);
        return 0.0;
    }
    if (pred.matches(lo) && pred.matches(hi)) return 1.0;
    Value clo = lo, chi = hi;
    if (pred.lo && compare(*pred.lo, clo) > 0) clo = *pred.lo;
    if (pred.hi && compare(*pred.hi, chi) < 0) chi = *pred.hi;
    const int c = compare(clo, chi);
    if (c >= 0) return 0.0;
    if (span_is_numeric(lo, hi)) {
        const long double span = hi.as_number() - lo.as_number();
        if (span <= 0.0L) return 0.0;
        const long double f = (chi.as_number() - clo.as_number()) / span;
        return std::clamp(static_cast<double>(f), 0.0, 1.0);
    }
    return 0.5;
}

// Distributes one CPD row's mass over the node's marginal cells and folds in
// the node's own predicate and the children's message weights. Row MCVs land
// in the one marginal cell containing them; row bucket mass is split over the
// overlapped marginal cells proportionally to their distinct-value capacity
// inside the overlap, so an unconstrained node with unit weights passes
// exactly its総 mass (factor 1) upward.
inline double transport_row_mass(const EndBiasedHistogram& row, const EndBiasedHistogram& cells,
                                 const ValuePredicate* pred, const std::vector<double>& weight) {
    if (row.is_empty()) return 0.0;
    double acc = 0.0;

    for (const auto& m : row.mcvs) {
        const auto c = cells.locate(m.value);
        if (!c) continue;
        double frac = 1.0;
        if (pred) frac = pred->matches(m.value) ? 1.0 : 0.0;
        if (frac > 0.0) acc += m.prob * frac * weight[*c];
    }

    const double bmass = row.bucket_mass();
    if (bmass <= 0.0) return acc;

    struct Piece {
        std::size_t cell;
        double capacity;
        Value lo, hi;  // lo == hi for point pieces
    };
    std::vector<Piece> pieces;
    for (const auto& rb : row.buckets) {
        pieces.clear();
        double total_cap = 0.0;
        for (std::size_t c = 0; c < cells.cell_count(); ++c) {
            if (cells.cell_is_mcv(c)) {
                const Value& v = cells.mcvs[c].value;
                if (v >= rb.lo && v <= rb.hi) {
                    pieces.push_back({c, 1.0, v, v});
                    total_cap += 1.0;
                }
            } else {
                const auto& mb = cells.buckets[c - cells.mcvs.size()];
                Value olo = mb.lo, ohi = mb.hi;
                if (compare(rb.lo, olo) > 0) olo = rb.lo;
                if (compare(rb.hi, ohi) < 0) ohi = rb.hi;
                if (compare(olo, ohi) > 0) continue;
                const double cap = static_cast<double>(mb.distinct_count) *
                                   span_fraction(mb.lo, mb.hi, olo, ohi);
                if (cap <= 0.0) continue;
                pieces.push_back({c, cap, olo, ohi});
                total_cap += cap;
            }
        }
        if (pieces.empty() || total_cap <= 0.0) {
            // No marginal cell overlaps; park the mass on the cell holding lo.
            const auto c = cells.locate(rb.lo);
            if (c) {
                double frac = 1.0;
                if (pred)
                    frac = piece_pred_fraction(rb.lo, rb.hi,
                                               static_cast<double>(rb.distinct_count), *pred);
                acc += bmass * frac * weight[*c];
            }
            continue;
        }
        for (const Piece& p : pieces) {
            const double share = p.capacity / total_cap;
            double frac = 1.0;
            if (pred) {
                if (compare(p.lo, p.hi) == 0)
                    frac = pred->matches(p.lo) ? 1.0 : 0.0;
                else
                    frac = piece_pred_fraction(p.lo, p.hi, p.capacity, *pred);
            }
            if (frac > 0.0) acc += bmass * share * frac * weight[p.cell];
        }
    }
    return acc;
}

}  // namespace detail

// P(conjunction of per-attribute predicates) by post-order message passing
// over the Steiner tree spanned by the predicate attributes. Each node sends
// its parent one scalar per parent cell; attributes outside the Steiner tree
// are never visited because their CPD rows each carry unit mass.
inline double variable_eliminate(const BayesNet& net,
                                 const std::map<std::size_t, ValuePredicate>& predicates,
                                 InferenceStats* stats = nullptr) {
    const std::size_t n = net.attribute_count();
    for (const auto& [attr, pred] : predicates)
        if (attr >= n) throw std::out_of_range("variable_eliminate: predicate on unknown attribute");
    if (predicates.empty()) {
        if (stats) stats->steiner_nodes = 0;
        return 1.0;
    }

    std::vector<std::size_t> targets;
    for (const auto& [attr, pred] : predicates) targets.push_back(attr);
    const std::vector<std::size_t> steiner = extract_steiner(net.structure, targets);
    if (stats) stats->steiner_nodes = steiner.size();

    std::vector<char> in_steiner(n, 0);
    for (std::size_t u : steiner) in_steiner[u] = 1;
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t u : steiner)
        if (u != net.structure.root)
            children[static_cast<std::size_t>(net.structure.parent[u])].push_back(u);

    // Post-order: children's messages are ready before the parent needs them.
    std::vector<std::size_t> order;
    order.reserve(steiner.size());
    std::vector<std::size_t> stack{net.structure.root};
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (std::size_t v : children[u]) stack.push_back(v);
    }

    std::vector<std::vector<double>> message(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t u = *it;
        const auto pit = predicates.find(u);
        const ValuePredicate* pred = pit == predicates.end() ? nullptr : &pit->second;

        // Cell structure of this node's marginal histogram.
        const EndBiasedHistogram& cells =
            u == net.structure.root ? net.root_hist : net.cpds[u]->parent_hist;
        const EndBiasedHistogram* node_cells = nullptr;
        std::vector<double> weight;
        if (!children[u].empty()) {
            node_cells = u == net.structure.root ? &net.root_hist
                                                 : &net.cpds[children[u].front()]->parent_hist;
            weight.assign(node_cells->cell_count(), 1.0);
            for (std::size_t v : children[u])
                for (std::size_t c = 0; c < weight.size(); ++c) weight[c] *= message[v][c];
        }
        (void)cells;

        if (u == net.structure.root) {
            double acc = 0.0;
            for (std::size_t c = 0; c < net.root_hist.cell_count(); ++c) {
                const double w = children[u].empty() ? 1.0 : weight[c];
                if (w == 0.0) continue;
                const double m = pred ? cell_pred_mass(net.root_hist, c, *pred)
                                      : net.root_hist.cell_mass(c);
                acc += m * w;
            }
            return std::clamp(acc, 0.0, 1.0);
        }

        const CompressedCpd& cpd = *net.cpds[u];
        std::vector<double> mu(cpd.parent_hist.cell_count(), 0.0);
        for (std::size_t p = 0; p < cpd.rows.size(); ++p) {
            if (stats) ++stats->cpd_rows_touched;
            const EndBiasedHistogram& row = cpd.rows[p];
            if (children[u].empty()) {
                // Leaf: probability mass of the predicate under this row.
                mu[p] = pred ? histogram_prob(row, *pred) : 1.0;
            } else {
                mu[p] = detail::transport_row_mass(row, *node_cells, pred, weight);
            }
        }
        message[u] = std::move(mu);
    }
    return 0.0;  // unreachable: the root is always last in reverse order
}

}  // namespace cardest
