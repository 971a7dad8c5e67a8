#pragma once

// Shared test fixtures and independent brute-force oracles. The oracles
// here deliberately avoid the library's solving code paths: truth-table
// satisfiability walks all assignments directly, and subset optima come
// from plain enumeration.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ocus/core.hpp"
#include "ocus/hitting_set.hpp"
#include "ocus/problem.hpp"

namespace testutil {

using ocus::ClauseGroup;
using ocus::CnfFormula;
using ocus::Cost;
using ocus::IndexSet;
using ocus::Interpretation;
using ocus::Lit;

// The worked three-atom example used across the test suite:
//   c1 = ~x1 v ~x2 v x3   (agnostic, 60)
//   c2 = ~x1 v  x2 v x3   (agnostic, 60)
//   c3 =  x1               (specific, 100)
//   c4 = ~x2 v ~x3         (specific, 100)
// initial {x1}; target (the unique consequence set) {x1, ~x2, x3}.
inline ocus::ExplanationProblem example_problem() {
    ocus::ExplanationProblem p;
    p.constraints.add_clause(ocus::Clause{-1, -2, 3}, 60, ClauseGroup::PuzzleAgnostic);
    p.constraints.add_clause(ocus::Clause{-1, 2, 3}, 60, ClauseGroup::PuzzleAgnostic);
    p.constraints.add_clause(ocus::Clause{1}, 100, ClauseGroup::PuzzleSpecific);
    p.constraints.add_clause(ocus::Clause{-2, -3}, 100, ClauseGroup::PuzzleSpecific);
    p.constraints.set_atom_count(3);
    p.initial = Interpretation{1};
    p.atom_names = {"", "x1", "x2", "x3"};
    return p;
}

// The seven-clause formula of the worked example at interpretation
// {x1}: constraints c1..c4 plus c5=(x1) derived fact, c6=(x2) and
// c7=(~x3) negated targets. Index i holds clause c(i+1).
inline CnfFormula example_assembled() {
    CnfFormula f;
    f.add_clause(ocus::Clause{-1, -2, 3}, 60, ClauseGroup::PuzzleAgnostic);
    f.add_clause(ocus::Clause{-1, 2, 3}, 60, ClauseGroup::PuzzleAgnostic);
    f.add_clause(ocus::Clause{1}, 100, ClauseGroup::PuzzleSpecific);
    f.add_clause(ocus::Clause{-2, -3}, 100, ClauseGroup::PuzzleSpecific);
    f.add_clause(ocus::Clause{1}, 1, ClauseGroup::DerivedFact);
    f.add_clause(ocus::Clause{2}, 1, ClauseGroup::NegatedTarget);
    f.add_clause(ocus::Clause{-3}, 1, ClauseGroup::NegatedTarget);
    f.set_atom_count(3);
    return f;
}

// Truth-table satisfiability: tries every assignment, no solver code.
inline bool brute_sat(const CnfFormula& f, const IndexSet& subset,
                      const Interpretation& assumptions = {}) {
    int n = f.atom_count();
    for (uint64_t a = 0; a < (uint64_t{1} << n); ++a) {
        auto atom_true = [&](int atom) { return (a >> (atom - 1)) & 1; };
        bool ok = true;
        for (Lit l : assumptions.literals())
            if (atom_true(l.atom()) != l.positive()) {
                ok = false;
                break;
            }
        for (int i : subset) {
            if (!ok) break;
            bool clause_sat = false;
            for (Lit l : f.clause(i).literals())
                if (atom_true(l.atom()) == l.positive()) {
                    clause_sat = true;
                    break;
                }
            ok = ok && clause_sat;
        }
        if (ok) return true;
    }
    return false;
}

// Minimum cost over all unsatisfiable subsets satisfying the
// constraint; nullopt when none exists. Enumeration over all 2^|F|
// subsets.
inline std::optional<Cost> brute_optimal_unsat_cost(const CnfFormula& f,
                                                    const ocus::MetaConstraint& p) {
    size_t n = static_cast<size_t>(f.size());
    std::optional<Cost> best;
    for (uint64_t id = 0; id < (uint64_t{1} << n); ++id) {
        std::vector<int> idx;
        for (size_t k = 0; k < n; ++k)
            if (id & (uint64_t{1} << k)) idx.push_back(static_cast<int>(k));
        IndexSet s(std::move(idx));
        if (!p.holds(s)) continue;
        if (brute_sat(f, s)) continue;
        Cost c = ocus::cost(f, s);
        if (!best || c < *best) best = c;
    }
    return best;
}

// Minimum-cost hitting set by exhaustive subset enumeration; ties to
// the lexicographically smallest set.
inline std::optional<ocus::HsSolution> brute_hitting_set(const IndexSet& active,
                                                         const std::vector<Cost>& weights,
                                                         const std::vector<IndexSet>& sets,
                                                         const ocus::MetaConstraint& p) {
    const auto& elems = active.indices();
    size_t n = elems.size();
    std::optional<ocus::HsSolution> best;
    for (uint64_t id = 0; id < (uint64_t{1} << n); ++id) {
        std::vector<int> idx;
        for (size_t k = 0; k < n; ++k)
            if (id & (uint64_t{1} << k)) idx.push_back(elems[k]);
        IndexSet s(std::move(idx));
        if (!p.holds(s)) continue;
        bool hits_all = true;
        for (const auto& h : sets)
            if (!s.intersects(h)) {
                hits_all = false;
                break;
            }
        if (!hits_all) continue;
        Cost c = 0;
        for (int e : s) c += weights[static_cast<size_t>(e)];
        if (!best || c < best->cost || (c == best->cost && s < best->set))
            best = ocus::HsSolution{std::move(s), c};
    }
    return best;
}

// All minimal hitting sets of a collection, by enumeration over the
// union of the sets' elements.
inline std::vector<IndexSet> brute_minimal_hitting_sets(const std::vector<IndexSet>& sets) {
    IndexSet universe;
    for (const auto& s : sets) universe = universe.united(s);
    const auto& elems = universe.indices();
    size_t n = elems.size();
    std::vector<IndexSet> hitting;
    for (uint64_t id = 0; id < (uint64_t{1} << n); ++id) {
        std::vector<int> idx;
        for (size_t k = 0; k < n; ++k)
            if (id & (uint64_t{1} << k)) idx.push_back(elems[k]);
        IndexSet s(std::move(idx));
        bool hits_all = true;
        for (const auto& h : sets)
            if (!s.intersects(h)) {
                hits_all = false;
                break;
            }
        if (hits_all) hitting.push_back(std::move(s));
    }
    std::vector<IndexSet> minimal;
    for (const auto& s : hitting) {
        bool is_min = true;
        for (const auto& t : hitting)
            if (!(t == s) && t.subset_of(s)) {
                is_min = false;
                break;
            }
        if (is_min) minimal.push_back(s);
    }
    return minimal;
}

// Random k-ish CNF over few atoms; mixed clause lengths, no tautologies.
inline CnfFormula random_formula(std::mt19937& rng, int max_atoms, int max_clauses,
                                 bool random_weights = false) {
    std::uniform_int_distribution<int> atoms_dist(2, max_atoms);
    std::uniform_int_distribution<int> clauses_dist(1, max_clauses);
    int atoms = atoms_dist(rng);
    int clauses = clauses_dist(rng);
    std::uniform_int_distribution<int> len_dist(1, 3);
    std::uniform_int_distribution<int> weight_dist(1, 100);
    CnfFormula f;
    for (int c = 0; c < clauses; ++c) {
        int len = len_dist(rng);
        std::vector<Lit> lits;
        std::vector<int> used;
        for (int k = 0; k < len; ++k) {
            std::uniform_int_distribution<int> atom_dist(1, atoms);
            int atom = atom_dist(rng);
            bool dup = false;
            for (int u : used) dup = dup || u == atom;
            if (dup) continue;
            used.push_back(atom);
            lits.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? Lit::pos(atom)
                                                                         : Lit::neg(atom));
        }
        if (lits.empty()) lits.push_back(Lit::pos(1));
        f.add_clause(ocus::Clause(std::move(lits)),
                     random_weights ? weight_dist(rng) : 1, ClauseGroup::PuzzleSpecific);
    }
    f.set_atom_count(atoms);
    return f;
}

}  // namespace testutil
