#pragma once

// Explanation-sequence generation: the per-step searches (deletion-MUS
// baseline, one constrained-OCUS call, bounded-OUS per literal) and the
// greedy sequence loop with all incrementality configurations.
//
// All step algorithms work over one shared index space built once per
// problem: the constraint clauses, then a derived-fact unit for every
// target literal, then a negation unit for every literal left to
// explain at the start. Indices are stable across the whole run, so
// hitting-set instances and satisfiable-subset caches transfer soundly
// between steps, and candidate explanations from different literals
// compare under one lexicographic order. Every step algorithm settles
// cost ties the same way -- smallest index set wins -- which keeps the
// derived literal, and therefore the entire sequence, identical across
// configurations.

#include <chrono>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocus/core.hpp"
#include "ocus/hitting_set.hpp"
#include "ocus/ocus.hpp"
#include "ocus/problem.hpp"
#include "ocus/sat.hpp"
#include "ocus/subsets.hpp"

namespace ocus {

struct ExplanationStep {
    Interpretation derived;     // newly explained literals
    Interpretation facts_used;  // derived facts the implication uses
    IndexSet constraints_used;  // indices into problem.constraints
    Cost cost = 0;
    double wall_ms = 0;
    int exceeds_bound_prunes = 0;  // bounded-OUS short-circuits (OUSb only)
};

struct ExplanationSequence {
    std::vector<ExplanationStep> steps;
    Cost total_cost = 0;
    double total_ms = 0;
    bool timed_out = false;
    Interpretation reached;
};

enum class StepAlgorithm { MusBaseline, OcusStep, OusBoundedPerLiteral };
enum class Incrementality { NoneMode, SsCaching, SharedIncrementalHs, PerLiteralIncrementalHs };

struct SequenceConfig {
    StepAlgorithm step_algorithm = StepAlgorithm::OcusStep;
    GrowStrategy grow = GrowStrategy::maxsat(MaxSatDomain::Actual, SoftScheme::Unif);
    Incrementality incrementality = Incrementality::NoneMode;

    void validate() const {
        if (step_algorithm == StepAlgorithm::MusBaseline &&
            incrementality != Incrementality::NoneMode)
            throw std::invalid_argument("the MUS baseline supports no incrementality mode");
        if (incrementality == Incrementality::PerLiteralIncrementalHs &&
            step_algorithm != StepAlgorithm::OusBoundedPerLiteral)
            throw std::invalid_argument(
                "per-literal incremental hitting sets require the bounded-OUS step algorithm");
    }

    std::string label() const {
        if (step_algorithm == StepAlgorithm::MusBaseline) return "mus";
        std::string algo = step_algorithm == StepAlgorithm::OcusStep ? "ocus" : "ousb";
        std::string incr;
        switch (incrementality) {
            case Incrementality::NoneMode: incr = "none"; break;
            case Incrementality::SsCaching: incr = "ss"; break;
            case Incrementality::SharedIncrementalHs: incr = "shared"; break;
            case Incrementality::PerLiteralIncrementalHs: incr = "perlit"; break;
        }
        return algo + "-" + incr + ":" + grow.label();
    }
};

// Shared index space for one explanation run. Layout: the constraint
// clauses under their own indices, then one DerivedFact unit per target
// literal, then one NegatedTarget unit (the literal's negation) per
// initially-unexplained target literal, both unit blocks in canonical
// literal order.
struct ExplanationSpace {
    CnfFormula formula;
    int num_constraints = 0;
    std::map<Lit, int> fact_index;
    std::map<Lit, int> neg_index;
    std::map<int, Lit> neg_literal;
    Interpretation initial;
    Interpretation target;
    Cost fact_cost = 1;

    IndexSet constraint_indices() const { return IndexSet::range(num_constraints); }

    IndexSet all_negation_indices() const {
        std::vector<int> v;
        for (const auto& [l, i] : neg_index) v.push_back(i);
        return IndexSet(std::move(v));
    }

    void check_interpretation(const Interpretation& interp) const {
        if (!initial.subset_of(interp) || !interp.subset_of(target))
            throw std::invalid_argument(
                "interpretation must lie between the initial and target interpretations");
    }

    IndexSet active_for(const Interpretation& interp) const {
        check_interpretation(interp);
        std::vector<int> v;
        for (int i = 0; i < num_constraints; ++i) v.push_back(i);
        for (Lit l : interp.literals()) v.push_back(fact_index.at(l));
        for (Lit l : target.minus(interp)) v.push_back(neg_index.at(l));
        return IndexSet(std::move(v));
    }

    // Constraints plus current derived-fact units; what the Actual
    // MaxSat grow domain optimizes over.
    IndexSet actual_domain_for(const Interpretation& interp) const {
        std::vector<int> v;
        for (int i = 0; i < num_constraints; ++i) v.push_back(i);
        for (Lit l : interp.literals()) v.push_back(fact_index.at(l));
        return IndexSet(std::move(v));
    }

    IndexSet active_for_literal(const Interpretation& interp, Lit l) const {
        IndexSet s = actual_domain_for(interp);
        s.insert(neg_index.at(l));
        return s;
    }
};

inline ExplanationSpace build_explanation_space(const ExplanationProblem& p,
                                                const Interpretation& target) {
    if (!p.initial.subset_of(target))
        throw std::invalid_argument("target does not contain the initial interpretation");
    ExplanationSpace space;
    space.initial = p.initial;
    space.target = target;
    space.fact_cost = p.weights.fact;
    space.num_constraints = p.constraints.size();
    for (int i = 0; i < p.constraints.size(); ++i)
        space.formula.add_clause(p.constraints.clause(i), p.constraints.weight(i),
                                 p.constraints.group(i));
    for (Lit l : target.literals())
        space.fact_index[l] =
            space.formula.add_clause(Clause({l.code()}), p.weights.fact, ClauseGroup::DerivedFact);
    for (Lit l : target.minus(p.initial)) {
        int idx = space.formula.add_clause(Clause({l.negated().code()}), p.weights.fact,
                                           ClauseGroup::NegatedTarget);
        space.neg_index[l] = idx;
        space.neg_literal[idx] = l;
    }
    space.formula.set_atom_count(p.constraints.atom_count());
    return space;
}

// Drives one configured explanation run; owns every piece of state the
// configuration's incrementality mode carries across steps.
class Explainer {
public:
    Explainer(const ExplanationProblem& problem, SequenceConfig config)
        : problem_(&problem), config_(config) {
        config_.validate();
        target_ = resolve_target(problem);
        space_ = build_explanation_space(problem, target_);
        sat_.emplace(space_.formula);
        hint_ = PolarityHint::from_interpretation(target_);
        if (target_ != problem.initial)
            initial_bound_ = cost(space_.formula, space_.active_for(problem.initial));
        for (Lit l : target_.minus(problem.initial)) bounds_[l] = initial_bound_;
        if (config_.incrementality == Incrementality::SharedIncrementalHs) {
            MetaConstraint p = config_.step_algorithm == StepAlgorithm::OcusStep
                                   ? MetaConstraint::exactly_one(space_.all_negation_indices())
                                   : MetaConstraint::trivially_true();
            shared_hs_.emplace(HittingSetInstance::for_formula(space_.formula, std::move(p)));
        }
    }

    const Interpretation& target() const { return target_; }
    const ExplanationSpace& space() const { return space_; }
    const std::map<Lit, Cost>& literal_bounds() const { return bounds_; }
    void set_trace(OcusTrace* trace) { trace_ = trace; }

    ExplanationStep step(const Interpretation& interp) {
        switch (config_.step_algorithm) {
            case StepAlgorithm::MusBaseline: return step_mus(interp);
            case StepAlgorithm::OcusStep: return step_ocus(interp);
            case StepAlgorithm::OusBoundedPerLiteral: return step_ous(interp);
        }
        throw std::logic_error("unreachable");
    }

    // Alg.-1 style baseline: one deletion-MUS per remaining literal,
    // cheapest kept (first in canonical literal order on ties).
    ExplanationStep step_mus(const Interpretation& interp) {
        require_open(interp);
        std::optional<IndexSet> best;
        Cost best_cost = 0;
        for (Lit l : target_.minus(interp)) {
            IndexSet seed = space_.active_for_literal(interp, l);
            IndexSet mus = mus_deletion_with(*sat_, seed);
            Cost c = cost(space_.formula, mus);
            if (!best || c < best_cost) {
                best = std::move(mus);
                best_cost = c;
            }
        }
        return make_step(*best, best_cost, interp);
    }

    // One constrained-OCUS call per step: exactly one negation unit may
    // appear, and its unit identifies the explained literal.
    ExplanationStep step_ocus(const Interpretation& interp) {
        require_open(interp);
        IndexSet active = space_.active_for(interp);

        std::optional<HittingSetInstance> local_hs;
        HittingSetInstance* hs;
        if (config_.incrementality == Incrementality::SharedIncrementalHs) {
            shared_hs_->set_active(active);
            hs = &*shared_hs_;
        } else {
            std::vector<int> negs;
            for (Lit l : target_.minus(interp)) negs.push_back(space_.neg_index.at(l));
            local_hs.emplace(HittingSetInstance::for_formula(
                space_.formula, MetaConstraint::exactly_one(IndexSet(std::move(negs)))));
            local_hs->set_active(active);
            hs = &*local_hs;
        }
        SatSubsetCache local_cache;
        SatSubsetCache* cache =
            config_.incrementality == Incrementality::NoneMode ? &local_cache : &shared_cache_;

        OcusParams params{config_.grow, hint_, space_.actual_domain_for(interp), trace_, deadline_};
        OcusResult res = ocus(space_.formula, *hs, *cache, *sat_, params);
        if (res.kind != OcusResult::Kind::Found)
            throw std::runtime_error("explanation step failed: a target literal is not entailed");
        return make_step(res.subset, res.cost, interp);
    }

    // Bounded-OUS per literal, in order of increasing stored upper
    // bounds; the bound of the best step so far prunes the rest. Cost
    // ties between literals fall back to the smallest explanation set
    // under the shared index order, matching the OCUS tie-break.
    ExplanationStep step_ous(const Interpretation& interp) {
        require_open(interp);
        std::vector<Lit> order;
        for (Lit l : target_.minus(interp)) order.push_back(l);
        std::stable_sort(order.begin(), order.end(), [&](Lit a, Lit b) {
            Cost ba = bounds_.at(a), bb = bounds_.at(b);
            if (ba != bb) return ba < bb;
            return a < b;
        });

        std::optional<IndexSet> best_set;
        Cost best_cost = 0;
        int prunes = 0;
        for (Lit l : order) {
            IndexSet active = space_.active_for_literal(interp, l);
            std::optional<HittingSetInstance> local_hs;
            HittingSetInstance* hs;
            SatSubsetCache local_cache;
            SatSubsetCache* cache;
            switch (config_.incrementality) {
                case Incrementality::PerLiteralIncrementalHs: {
                    auto it = per_literal_.find(l);
                    if (it == per_literal_.end()) {
                        it = per_literal_
                                 .emplace(l, PerLiteralEntry{HittingSetInstance::for_formula(
                                                                 space_.formula,
                                                                 MetaConstraint::trivially_true()),
                                                             SatSubsetCache{}})
                                 .first;
                    }
                    hs = &it->second.hs;
                    cache = &it->second.cache;
                    break;
                }
                case Incrementality::SharedIncrementalHs:
                    hs = &*shared_hs_;
                    cache = &shared_cache_;
                    break;
                case Incrementality::SsCaching:
                    local_hs.emplace(HittingSetInstance::for_formula(
                        space_.formula, MetaConstraint::trivially_true()));
                    hs = &*local_hs;
                    cache = &shared_cache_;
                    break;
                case Incrementality::NoneMode:
                default:
                    local_hs.emplace(HittingSetInstance::for_formula(
                        space_.formula, MetaConstraint::trivially_true()));
                    hs = &*local_hs;
                    cache = &local_cache;
                    break;
            }
            hs->set_active(active);

            OcusParams params{config_.grow, hint_, space_.actual_domain_for(interp), trace_, deadline_};
            Cost ub = best_set ? best_cost : kNoBound;
            OcusResult res = ous_bounded(space_.formula, *hs, *cache, *sat_, params, ub);
            if (res.kind == OcusResult::Kind::ExceedsBound) {
                ++prunes;
                continue;
            }
            if (res.kind != OcusResult::Kind::Found)
                throw std::runtime_error(
                    "explanation step failed: a target literal is not entailed");
            auto bit = bounds_.find(l);
            if (bit != bounds_.end() && res.cost < bit->second) bit->second = res.cost;
            if (!best_set || res.cost < best_cost ||
                (res.cost == best_cost && res.subset < *best_set)) {
                best_set = res.subset;
                best_cost = res.cost;
            }
        }
        ExplanationStep step = make_step(*best_set, best_cost, interp);
        step.exceeds_bound_prunes = prunes;
        return step;
    }

    // Greedy sequence loop: repeat the configured step with a growing
    // interpretation until the target is reached. A positive timeout is
    // enforced inside the hitting-set loops as well, so one oversized
    // step cannot overshoot it arbitrarily.
    ExplanationSequence run(double timeout_ms = 0) {
        ExplanationSequence seq;
        Interpretation interp = problem_->initial;
        auto start = std::chrono::steady_clock::now();
        if (timeout_ms > 0)
            deadline_ = start + std::chrono::microseconds(static_cast<int64_t>(timeout_ms * 1000));
        else
            deadline_.reset();
        while (!(interp == target_)) {
            auto t0 = std::chrono::steady_clock::now();
            ExplanationStep st;
            try {
                st = step(interp);
            } catch (const TimeoutError&) {
                seq.timed_out = true;
                break;
            }
            auto t1 = std::chrono::steady_clock::now();
            st.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            seq.total_cost += st.cost;
            for (Lit l : st.derived.literals()) {
                interp.insert(l);
                bounds_.erase(l);
                per_literal_.erase(l);
            }
            seq.steps.push_back(std::move(st));
            seq.total_ms = std::chrono::duration<double, std::milli>(t1 - start).count();
            if (timeout_ms > 0 && seq.total_ms > timeout_ms) {
                seq.timed_out = true;
                break;
            }
        }
        seq.reached = interp;
        deadline_.reset();
        return seq;
    }

private:
    static constexpr Cost kNoBound = std::numeric_limits<Cost>::max() / 8;

    struct PerLiteralEntry {
        HittingSetInstance hs;
        SatSubsetCache cache;
    };

    void require_open(const Interpretation& interp) const {
        space_.check_interpretation(interp);
        if (interp == target_) throw std::invalid_argument("nothing left to explain");
    }

    // Deletion MUS reusing the engine's solver instance.
    static IndexSet mus_deletion_with(SatSolver& solver, const IndexSet& seed) {
        if (solver.solve(seed))
            throw std::invalid_argument("mus_deletion: seed subset is satisfiable");
        IndexSet mus = seed;
        std::vector<int> order(seed.indices().rbegin(), seed.indices().rend());
        for (int i : order) {
            IndexSet candidate = mus.minus(IndexSet{i});
            if (!solver.solve(candidate)) mus = std::move(candidate);
        }
        return mus;
    }

    // Converts an unsatisfiable subset of the shared space into a step:
    // the single negation unit names the explained literal, the rest
    // split into facts and constraints. Any other remaining target
    // literal already entailed by the same facts and constraints joins
    // the derived set, checked by one unsat call each.
    ExplanationStep make_step(const IndexSet& subset, Cost step_cost,
                              const Interpretation& interp) {
        ExplanationStep step;
        step.cost = step_cost;

        std::optional<Lit> explained;
        std::vector<int> fact_units;
        for (int i : subset) {
            if (i < space_.num_constraints) {
                step.constraints_used.insert(i);
            } else if (auto it = space_.neg_literal.find(i); it != space_.neg_literal.end()) {
                if (explained)
                    throw std::logic_error("explanation subset holds two negation units");
                explained = it->second;
            } else {
                fact_units.push_back(i);
                step.facts_used.insert(space_.formula.clause(i).literals().front());
            }
        }
        if (!explained) throw std::logic_error("explanation subset holds no negation unit");
        step.derived.insert(*explained);

        IndexSet base = step.constraints_used.united(IndexSet(std::move(fact_units)));
        for (Lit n : target_.minus(interp)) {
            if (n == *explained) continue;
            IndexSet check = base;
            check.insert(space_.neg_index.at(n));
            if (!sat_->solve(check)) step.derived.insert(n);
        }
        return step;
    }

    const ExplanationProblem* problem_;
    SequenceConfig config_;
    Interpretation target_;
    ExplanationSpace space_;
    std::optional<SatSolver> sat_;
    PolarityHint hint_;
    Cost initial_bound_ = 0;

    std::map<Lit, Cost> bounds_;
    std::map<Lit, PerLiteralEntry> per_literal_;
    std::optional<HittingSetInstance> shared_hs_;
    SatSubsetCache shared_cache_;
    OcusTrace* trace_ = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

inline ExplanationStep explain_one_step_mus(const ExplanationProblem& p,
                                            const Interpretation& interp) {
    SequenceConfig cfg;
    cfg.step_algorithm = StepAlgorithm::MusBaseline;
    cfg.incrementality = Incrementality::NoneMode;
    return Explainer(p, cfg).step_mus(interp);
}

inline ExplanationStep explain_one_step_ocus(const ExplanationProblem& p,
                                             const Interpretation& interp,
                                             SequenceConfig cfg = {}) {
    cfg.step_algorithm = StepAlgorithm::OcusStep;
    return Explainer(p, cfg).step_ocus(interp);
}

inline ExplanationSequence explain_full(const ExplanationProblem& p, const SequenceConfig& cfg,
                                        double timeout_ms = 0) {
    return Explainer(p, cfg).run(timeout_ms);
}

struct VerifyReport {
    bool valid = true;
    std::string message = "valid";
    Cost total_cost = 0;
};

// Independent checker: replays the sequence against the problem with
// fresh formulas and fresh solver state, re-checking fact availability,
// entailment of every derived literal and the step cost arithmetic.
inline VerifyReport verify_sequence(const ExplanationProblem& p, const ExplanationSequence& seq) {
    VerifyReport report;
    Interpretation interp = p.initial;
    for (size_t k = 0; k < seq.steps.size(); ++k) {
        const ExplanationStep& st = seq.steps[k];
        auto fail = [&](const std::string& why) {
            report.valid = false;
            report.message = "step " + std::to_string(k) + ": " + why;
            return report;
        };
        if (st.derived.empty()) return fail("derives nothing");
        if (!st.facts_used.subset_of(interp)) return fail("uses facts not yet derived");
        for (Lit l : st.derived.literals())
            if (interp.contains(l)) return fail("re-derives literal " + std::to_string(l.code()));
        if (!st.constraints_used.empty() &&
            st.constraints_used.indices().back() >= p.constraints.size())
            return fail("constraint index out of range");

        Cost recomputed = 0;
        for (int ci : st.constraints_used) recomputed += p.constraints.weight(ci);
        recomputed += p.weights.fact * static_cast<Cost>(st.facts_used.size() + 1);
        if (recomputed != st.cost)
            return fail("cost mismatch: recorded " + std::to_string(st.cost) + ", recomputed " +
                        std::to_string(recomputed));

        for (Lit n : st.derived.literals()) {
            CnfFormula check;
            for (int ci : st.constraints_used)
                check.add_clause(p.constraints.clause(ci), 1, ClauseGroup::PuzzleSpecific);
            for (Lit f : st.facts_used.literals())
                check.add_clause(Clause({f.code()}), 1, ClauseGroup::DerivedFact);
            check.add_clause(Clause({n.negated().code()}), 1, ClauseGroup::NegatedTarget);
            check.set_atom_count(p.constraints.atom_count());
            if (solve_subset(check, check.all_indices()))
                return fail("derived literal " + std::to_string(n.code()) +
                            " is not entailed by the step");
        }
        for (Lit l : st.derived.literals()) interp.insert(l);
        report.total_cost += st.cost;
    }
    return report;
}

// Machine-readable sequence document with deterministic field order.
inline nlohmann::ordered_json sequence_to_json(const ExplanationProblem& p,
                                               const ExplanationSequence& seq,
                                               const std::string& problem_label,
                                               const std::string& config_label) {
    nlohmann::ordered_json doc;
    doc["problem"] = problem_label;
    doc["config"] = config_label;
    doc["steps"] = nlohmann::ordered_json::array();
    for (size_t k = 0; k < seq.steps.size(); ++k) {
        const ExplanationStep& st = seq.steps[k];
        nlohmann::ordered_json js;
        js["index"] = k;
        js["derived"] = nlohmann::ordered_json::array();
        js["derived_names"] = nlohmann::ordered_json::array();
        for (Lit l : st.derived.literals()) {
            js["derived"].push_back(l.code());
            js["derived_names"].push_back(p.literal_name(l));
        }
        js["facts_used"] = nlohmann::ordered_json::array();
        js["fact_names"] = nlohmann::ordered_json::array();
        for (Lit l : st.facts_used.literals()) {
            js["facts_used"].push_back(l.code());
            js["fact_names"].push_back(p.literal_name(l));
        }
        js["constraints_used"] = nlohmann::ordered_json::array();
        js["constraint_clauses"] = nlohmann::ordered_json::array();
        for (int ci : st.constraints_used) {
            js["constraints_used"].push_back(ci);
            js["constraint_clauses"].push_back(p.constraints.clause(ci).str());
        }
        js["cost"] = st.cost;
        js["ms"] = st.wall_ms;
        js["exceeds_bound_prunes"] = st.exceeds_bound_prunes;
        doc["steps"].push_back(std::move(js));
    }
    doc["steps_count"] = seq.steps.size();
    doc["total_cost"] = seq.total_cost;
    doc["total_ms"] = seq.total_ms;
    doc["timed_out"] = seq.timed_out;
    return doc;
}

}  // namespace ocus
