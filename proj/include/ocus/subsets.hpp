#pragma once

// Baseline deletion-based MUS extraction plus brute-force enumerators
// for MUSes, MCSes and logical consequences. The enumerators do
// exhaustive subset checking and are capped by a clause limit; they
// exist as correctness oracles and for the MUS-baseline quality
// comparison, not for large inputs.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ocus/core.hpp"
#include "ocus/problem.hpp"
#include "ocus/sat.hpp"

namespace ocus {

// Shrinks an unsatisfiable subset to a subset-minimal one by attempting
// to delete clauses in descending index order.
inline IndexSet mus_deletion(const CnfFormula& f, const IndexSet& s0) {
    SatSolver solver(f);
    if (solver.solve(s0)) throw std::invalid_argument("mus_deletion: seed subset is satisfiable");
    IndexSet mus = s0;
    std::vector<int> order(s0.indices().rbegin(), s0.indices().rend());
    for (int i : order) {
        IndexSet candidate = mus.minus(IndexSet{i});
        if (!solver.solve(candidate)) mus = std::move(candidate);
    }
    return mus;
}

namespace detail {

// Satisfying-assignment bitmasks per clause over all 2^atoms
// assignments; a clause subset is satisfiable iff the AND of its masks
// is non-zero. Viable up to ~20 atoms.
class TruthTable {
public:
    explicit TruthTable(const CnfFormula& f) : atoms_(f.atom_count()) {
        if (atoms_ > 20) throw std::invalid_argument("truth table limited to 20 atoms");
        words_ = std::max<size_t>(1, (size_t{1} << atoms_) / 64);
        full_.assign(words_, ~uint64_t{0});
        if (atoms_ < 6) full_[0] = (uint64_t{1} << (size_t{1} << atoms_)) - 1;
        for (int i = 0; i < f.size(); ++i) {
            std::vector<uint64_t> mask(words_, 0);
            const auto& lits = f.clause(i).literals();
            for (size_t a = 0; a < (size_t{1} << atoms_); ++a) {
                for (Lit l : lits) {
                    bool atom_true = (a >> (l.atom() - 1)) & 1;
                    if (atom_true == l.positive()) {
                        mask[a / 64] |= uint64_t{1} << (a % 64);
                        break;
                    }
                }
            }
            clause_masks_.push_back(std::move(mask));
        }
    }

    // Fills sat-status for every clause subset (bit k of the subset id =
    // clause k included).
    std::vector<uint8_t> all_subset_sat() const {
        size_t n = clause_masks_.size();
        std::vector<uint8_t> sat(size_t{1} << n, 0);
        std::vector<uint64_t> acc = full_;
        fill(sat, 0, 0, acc);
        return sat;
    }

private:
    void fill(std::vector<uint8_t>& sat, size_t idx, size_t id, std::vector<uint64_t>& acc) const {
        if (idx == clause_masks_.size()) {
            bool any = false;
            for (uint64_t w : acc) any = any || w != 0;
            sat[id] = any;
            return;
        }
        fill(sat, idx + 1, id, acc);
        std::vector<uint64_t> next(acc.size());
        bool any = false;
        for (size_t w = 0; w < acc.size(); ++w) {
            next[w] = acc[w] & clause_masks_[idx][w];
            any = any || next[w] != 0;
        }
        // An empty accumulator means every superset is unsatisfiable;
        // the table is zero-initialized, so nothing to write.
        if (any) fill(sat, idx + 1, id | (size_t{1} << idx), next);
    }

    int atoms_;
    size_t words_;
    std::vector<uint64_t> full_;
    std::vector<std::vector<uint64_t>> clause_masks_;
};

inline std::vector<uint8_t> subset_sat_table(const CnfFormula& f) {
    if (f.atom_count() <= 20) return detail::TruthTable(f).all_subset_sat();
    // Fallback for wide formulas: one solver call per subset.
    SatSolver solver(f);
    size_t n = static_cast<size_t>(f.size());
    std::vector<uint8_t> sat(size_t{1} << n, 0);
    for (size_t id = 0; id < sat.size(); ++id) {
        std::vector<int> idx;
        for (size_t k = 0; k < n; ++k)
            if (id & (size_t{1} << k)) idx.push_back(static_cast<int>(k));
        sat[id] = solver.solve(IndexSet(std::move(idx))).has_value();
    }
    return sat;
}

inline IndexSet indexset_from_bits(size_t id, size_t n) {
    std::vector<int> idx;
    for (size_t k = 0; k < n; ++k)
        if (id & (size_t{1} << k)) idx.push_back(static_cast<int>(k));
    return IndexSet(std::move(idx));
}

}  // namespace detail

// All minimal unsatisfiable subsets by exhaustive subset checking.
inline std::vector<IndexSet> enumerate_mus(const CnfFormula& f, int limit = 14) {
    if (f.size() > limit) throw std::invalid_argument("enumerate_mus: clause limit exceeded");
    size_t n = static_cast<size_t>(f.size());
    auto sat = detail::subset_sat_table(f);
    std::vector<IndexSet> out;
    for (size_t id = 0; id < sat.size(); ++id) {
        if (sat[id]) continue;
        bool minimal = true;
        for (size_t k = 0; k < n && minimal; ++k)
            if ((id & (size_t{1} << k)) && !sat[id & ~(size_t{1} << k)]) minimal = false;
        if (minimal) out.push_back(detail::indexset_from_bits(id, n));
    }
    return out;
}

// All minimal correction subsets; for a satisfiable formula this is
// exactly { {} }, the empty correction subset being uniquely minimal.
inline std::vector<IndexSet> enumerate_mcs(const CnfFormula& f, int limit = 14) {
    if (f.size() > limit) throw std::invalid_argument("enumerate_mcs: clause limit exceeded");
    size_t n = static_cast<size_t>(f.size());
    auto sat = detail::subset_sat_table(f);
    size_t full = (size_t{1} << n) - 1;
    std::vector<IndexSet> out;
    for (size_t id = 0; id < sat.size(); ++id) {
        if (!sat[full & ~id]) continue;  // removal must leave F satisfiable
        bool minimal = true;
        for (size_t k = 0; k < n && minimal; ++k)
            if ((id & (size_t{1} << k)) && sat[full & ~(id & ~(size_t{1} << k))]) minimal = false;
        if (minimal) out.push_back(detail::indexset_from_bits(id, n));
    }
    return out;
}

// The backbone of constraints & initial: literals true in every model.
// Takes one model, then tests each of its literals l by a solve with
// the added assumption ~l.
inline Interpretation consequences(const CnfFormula& constraints, const Interpretation& initial) {
    SatSolver solver(constraints);
    IndexSet all = constraints.all_indices();
    SatResult seed = solver.solve(all, initial);
    if (!seed) throw std::invalid_argument("consequences: constraints and initial facts unsatisfiable");

    Interpretation backbone;
    for (Lit l : seed->literals()) {
        if (initial.contains(l)) {
            backbone.insert(l);
            continue;
        }
        Interpretation assume = initial;
        assume.insert(l.negated());
        if (!solver.solve(all, assume)) backbone.insert(l);
    }
    return backbone;
}

// Target interpretation of a problem: the declared one, or else the
// consequences of constraints & initial.
inline Interpretation resolve_target(const ExplanationProblem& p) {
    if (p.target) return *p.target;
    return consequences(p.constraints, p.initial);
}

}  // namespace ocus
