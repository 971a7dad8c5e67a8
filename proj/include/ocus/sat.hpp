#pragma once

// Complete SAT decision procedure over clause subsets, with unit
// assumptions, full model extraction and polarity hints. Verdicts are
// always definite and, thanks to the fixed branching discipline of the
// underlying engine, the returned model is a pure function of
// (formula, subset, assumptions, hint).

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ocus/core.hpp"
#include "ocus/detail/cdcl.hpp"

namespace ocus {

// Preferred branching value per atom; atoms without an entry fall back
// to the solver default (negative).
class PolarityHint {
public:
    PolarityHint() = default;

    static PolarityHint from_interpretation(const Interpretation& interp) {
        PolarityHint h;
        for (Lit l : interp.literals()) h.set(l.atom(), l.positive());
        return h;
    }

    void set(int atom, bool preferred) {
        if (atom < 1) throw std::invalid_argument("atom id must be positive");
        map_[atom] = preferred;
    }
    // +1 prefer true, -1 prefer false, 0 no preference.
    int preferred(int atom) const {
        auto it = map_.find(atom);
        return it == map_.end() ? 0 : (it->second ? 1 : -1);
    }
    bool empty() const { return map_.empty(); }

    std::vector<int8_t> as_table(int atom_count) const {
        std::vector<int8_t> t(static_cast<size_t>(atom_count) + 1, 0);
        for (auto [atom, val] : map_)
            if (atom <= atom_count) t[static_cast<size_t>(atom)] = val ? 1 : -1;
        return t;
    }

private:
    std::map<int, bool> map_;
};

// Sat carries a model that is total over the formula's atoms.
using SatResult = std::optional<Interpretation>;

// Stateful solver bound to one formula; clause subsets are activated
// per call through selector assumptions, so learned clauses carry over
// between calls on the same instance.
class SatSolver {
public:
    explicit SatSolver(const CnfFormula& f) : formula_(&f), core_(f) {}

    SatResult solve(const IndexSet& active, const Interpretation& assumptions = {},
                    const PolarityHint& hint = {}) {
        formula_->check_subset(active);
        assumption_buf_.clear();
        auto it = active.begin();
        for (int i = 0; i < formula_->size(); ++i) {
            bool on = it != active.end() && *it == i;
            if (on) ++it;
            assumption_buf_.push_back(on ? core_.selector_var(i) : -core_.selector_var(i));
        }
        for (Lit l : assumptions.literals()) {
            if (l.atom() > formula_->atom_count())
                throw std::invalid_argument("assumption atom outside formula");
            assumption_buf_.push_back(l.code());
        }
        if (!core_.solve(assumption_buf_, hint.as_table(formula_->atom_count())))
            return std::nullopt;

        Interpretation model;
        for (int a = 1; a <= formula_->atom_count(); ++a)
            model.insert(core_.value_of_atom(a) > 0 ? Lit::pos(a) : Lit::neg(a));
        // Replay the verdict; a model that misses an active clause is an
        // engine defect, not an input error.
        for (int i : active) {
            if (!model.satisfies(formula_->clause(i)))
                throw std::logic_error("solver returned model violating active clause " +
                                       std::to_string(i));
        }
        return model;
    }

    const CnfFormula& formula() const { return *formula_; }

private:
    const CnfFormula* formula_;
    detail::CdclCore core_;
    std::vector<int> assumption_buf_;
};

// One-shot convenience around SatSolver.
inline SatResult solve_subset(const CnfFormula& f, const IndexSet& subset,
                              const Interpretation& assumptions = {},
                              const PolarityHint& hint = {}) {
    SatSolver solver(f);
    return solver.solve(subset, assumptions, hint);
}

// Indices of all clauses a total model satisfies.
inline IndexSet model_satisfied_clauses(const CnfFormula& f, const Interpretation& model) {
    for (int a = 1; a <= f.atom_count(); ++a)
        if (!model.contains_atom(a))
            throw std::invalid_argument("model is partial: atom " + std::to_string(a) +
                                        " unassigned");
    std::vector<int> sat;
    for (int i = 0; i < f.size(); ++i)
        if (model.satisfies(f.clause(i))) sat.push_back(i);
    return IndexSet(std::move(sat));
}

}  // namespace ocus
