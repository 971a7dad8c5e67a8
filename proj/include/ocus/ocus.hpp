#pragma once

// The implicit hitting-set loop for cost-optimal constrained
// unsatisfiable subsets, its bounded variant, and the pluggable grow
// strategies that turn satisfiable hitting sets into strong sets-to-hit.
//
// Complements are taken against the hitting-set instance's universe,
// not the currently active clause set: the complement of a satisfiable
// subset w.r.t. the universe stays a sound constraint under any later
// activation mask (any unsatisfiable subset must leave the cached
// satisfiable one), which is what makes shared and per-literal
// incremental instances safe across calls. Per solve, only the active
// portion of a stored set can be hit, so within one call the behavior
// is identical to complementing against the active formula.

#include <cassert>
#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ocus/core.hpp"
#include "ocus/hitting_set.hpp"
#include "ocus/maxsat.hpp"
#include "ocus/sat.hpp"

namespace ocus {

enum class GrowKind { NoGrow, ModelExtension, SatLoopGreedy, MaxSat };
enum class MaxSatDomain { Full, Actual };
enum class SoftScheme { Unif, Pos, Inv };

struct GrowStrategy {
    GrowKind kind = GrowKind::MaxSat;
    MaxSatDomain domain = MaxSatDomain::Actual;
    SoftScheme scheme = SoftScheme::Unif;

    static GrowStrategy no_grow() { return {GrowKind::NoGrow, {}, {}}; }
    static GrowStrategy model_extension() { return {GrowKind::ModelExtension, {}, {}}; }
    static GrowStrategy sat_loop_greedy() { return {GrowKind::SatLoopGreedy, {}, {}}; }
    static GrowStrategy maxsat(MaxSatDomain d, SoftScheme s) { return {GrowKind::MaxSat, d, s}; }

    std::string label() const {
        switch (kind) {
            case GrowKind::NoGrow: return "nogrow";
            case GrowKind::ModelExtension: return "model";
            case GrowKind::SatLoopGreedy: return "greedy";
            case GrowKind::MaxSat: {
                std::string l = "max-";
                l += domain == MaxSatDomain::Full ? "full" : "actual";
                l += scheme == SoftScheme::Unif ? "-unif" : (scheme == SoftScheme::Pos ? "-pos" : "-inv");
                return l;
            }
        }
        return "?";
    }
};

// Satisfiable subsets learned so far, over a shared index universe.
// Satisfiability survives restriction to subformulas, which is why
// entries transfer between calls.
class SatSubsetCache {
public:
    void push(IndexSet s) { subsets_.push_back(std::move(s)); }
    const std::vector<IndexSet>& subsets() const { return subsets_; }
    bool empty() const { return subsets_.empty(); }
    size_t size() const { return subsets_.size(); }

private:
    std::vector<IndexSet> subsets_;
};

struct OcusResult {
    enum class Kind { Found, NoneExists, ExceedsBound };
    Kind kind = Kind::NoneExists;
    IndexSet subset;
    Cost cost = 0;

    static OcusResult found(IndexSet s, Cost c) {
        return {Kind::Found, std::move(s), c};
    }
    static OcusResult none_exists() { return {Kind::NoneExists, {}, 0}; }
    static OcusResult exceeds_bound() { return {Kind::ExceedsBound, {}, 0}; }
};

struct OcusTraceRecord {
    int iteration = 0;
    IndexSet hitting_set;
    Cost cost = 0;
    std::string verdict;  // "sat" | "unsat" | "exceeds-bound" | "infeasible" | "covers-active"
    IndexSet grown;
    IndexSet added_to_hit;
};

using OcusTrace = std::vector<OcusTraceRecord>;

// Expands a satisfiable subset. All strategies return a satisfiable
// superset of `s`; the MaxSat strategies additionally report every
// clause of the formula the optimal model happens to satisfy, which
// keeps the resulting correction subset small.
inline IndexSet grow(const CnfFormula& f, const IndexSet& s, const Interpretation& model,
                     const GrowStrategy& strategy, const IndexSet& active,
                     const IndexSet& actual_domain, const PolarityHint& hint,
                     SatSolver& solver) {
    switch (strategy.kind) {
        case GrowKind::NoGrow:
            return s;
        case GrowKind::ModelExtension:
            return model_satisfied_clauses(f, model).united(s);
        case GrowKind::SatLoopGreedy: {
            IndexSet current = s;
            for (int i : active.minus(s)) {
                IndexSet tentative = current;
                tentative.insert(i);
                if (solver.solve(tentative, {}, hint)) current = std::move(tentative);
            }
            return current;
        }
        case GrowKind::MaxSat: {
            IndexSet candidates =
                (strategy.domain == MaxSatDomain::Full ? active : actual_domain.intersect(active))
                    .minus(s);
            Cost max_w = 0;
            for (int i : candidates) max_w = std::max(max_w, f.weight(i));
            MaxSatInstance inst;
            inst.formula = &f;
            inst.hard = s;
            inst.hint = hint;
            for (int i : candidates) {
                Cost w = 1;
                if (strategy.scheme == SoftScheme::Pos) w = f.weight(i);
                if (strategy.scheme == SoftScheme::Inv) w = max_w + 1 - f.weight(i);
                if (w > 0) inst.soft[i] = w;  // zero-weight softs cannot affect the optimum
            }
            MaxSatResult res = maximize(inst);
            return model_satisfied_clauses(f, res.model).united(s);
        }
    }
    return s;
}

class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OcusParams {
    GrowStrategy strategy;
    PolarityHint hint;
    IndexSet actual_domain;  // constraints plus derived-fact units, for MaxSat{Actual}
    OcusTrace* trace = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

inline OcusResult hitting_set_loop(const CnfFormula& f, HittingSetInstance& hs,
                                   SatSubsetCache& cache, SatSolver& solver,
                                   const OcusParams& params, bool bounded, Cost ub) {
    if (!f.all_indices().subset_of(hs.universe()))
        throw std::invalid_argument("ocus: hitting-set universe does not cover the formula");
    const IndexSet& active = hs.active();

    // Bootstrap: every cached satisfiable subset contributes its
    // complement. An empty complement w.r.t. the active formula means
    // the active formula itself is satisfiable, hence no OCUS exists.
    for (const IndexSet& cached : cache.subsets()) {
        if (active.subset_of(cached)) return OcusResult::none_exists();
        hs.add_set(hs.universe().minus(cached));
    }

    int iteration = 0;
    for (;;) {
        ++iteration;
        if (params.deadline && std::chrono::steady_clock::now() > *params.deadline)
            throw TimeoutError("hitting-set loop exceeded its deadline");
        auto sol = hs.solve();
        if (!sol) {
            if (params.trace)
                params.trace->push_back({iteration, {}, 0, "infeasible", {}, {}});
            return OcusResult::none_exists();
        }
        if (bounded && sol->cost > ub) {
            if (params.trace)
                params.trace->push_back({iteration, sol->set, sol->cost, "exceeds-bound", {}, {}});
            return OcusResult::exceeds_bound();
        }
        SatResult verdict = solver.solve(sol->set, {}, params.hint);
        if (!verdict) {
            if (params.trace)
                params.trace->push_back({iteration, sol->set, sol->cost, "unsat", {}, {}});
            if (!hs.constraint().holds(sol->set))
                throw std::logic_error("ocus: hitting set violates the meta-constraint");
            return OcusResult::found(sol->set, sol->cost);
        }
        IndexSet grown = grow(f, sol->set, *verdict, params.strategy, active,
                              params.actual_domain, params.hint, solver);
        cache.push(grown);
        if (active.subset_of(grown)) {
            if (params.trace)
                params.trace->push_back({iteration, sol->set, sol->cost, "covers-active", grown, {}});
            return OcusResult::none_exists();
        }
        IndexSet added = hs.universe().minus(grown);
        hs.add_set(added);
        if (params.trace)
            params.trace->push_back({iteration, sol->set, sol->cost, "sat", grown, added});
    }
}

}  // namespace detail

// Cost-optimal unsatisfiable subset of the active formula satisfying
// the instance's meta-constraint; NoneExists iff there is none. The
// hitting-set instance and the cache keep everything learned.
inline OcusResult ocus(const CnfFormula& f, HittingSetInstance& hs, SatSubsetCache& cache,
                       SatSolver& solver, const OcusParams& params) {
    return detail::hitting_set_loop(f, hs, cache, solver, params, false, 0);
}

// Bounded optimal unsatisfiable subset (trivially-true constraint
// only): returns ExceedsBound as soon as a hitting-set optimum goes
// above `ub`, keeping all learned state.
inline OcusResult ous_bounded(const CnfFormula& f, HittingSetInstance& hs, SatSubsetCache& cache,
                              SatSolver& solver, const OcusParams& params, Cost ub) {
    if (hs.constraint().kind() != MetaConstraint::Kind::TriviallyTrue)
        throw std::invalid_argument("ous_bounded: meta-constraint must be trivially true");
    return detail::hitting_set_loop(f, hs, cache, solver, params, true, ub);
}

}  // namespace ocus
