#pragma once

// Exact weighted partial MaxSAT by model-improving search: solve, score
// the model against the soft clauses, then demand strictly more soft
// weight through the engine's linear selector bound until unsat. The
// deterministic engine makes the final model the lexicographically
// smallest among the optimal ones under the given hint.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocus/core.hpp"
#include "ocus/detail/cdcl.hpp"
#include "ocus/sat.hpp"

namespace ocus {

struct MaxSatInstance {
    const CnfFormula* formula = nullptr;
    IndexSet hard;                 // clause indices that must be satisfied
    std::map<int, Cost> soft;      // clause index -> positive soft weight
    PolarityHint hint;
};

struct MaxSatResult {
    Interpretation model;
    IndexSet satisfied;  // hard plus every satisfied soft index
    Cost soft_weight = 0;
};

inline MaxSatResult maximize(const MaxSatInstance& inst) {
    if (!inst.formula) throw std::invalid_argument("maximize: no formula");
    const CnfFormula& f = *inst.formula;
    f.check_subset(inst.hard);

    std::vector<std::pair<int, Cost>> softs;
    Cost total_soft = 0;
    for (auto [i, w] : inst.soft) {
        if (i < 0 || i >= f.size()) throw std::out_of_range("soft index outside formula");
        if (inst.hard.contains(i))
            throw std::invalid_argument("clause " + std::to_string(i) + " is both hard and soft");
        if (w <= 0) throw std::invalid_argument("soft weight must be positive");
        softs.emplace_back(i, w);
        total_soft += w;
    }

    detail::CdclCore core(f);
    core.set_objective(softs);

    std::vector<int> assumptions;
    assumptions.reserve(static_cast<size_t>(f.size()));
    for (int i = 0; i < f.size(); ++i) {
        if (inst.hard.contains(i))
            assumptions.push_back(core.selector_var(i));
        else if (!inst.soft.count(i))
            assumptions.push_back(-core.selector_var(i));
        // soft selectors stay free
    }
    auto hint_table = inst.hint.as_table(f.atom_count());

    bool found = false;
    Interpretation best_model;
    Cost best_weight = 0;
    for (;;) {
        if (!core.solve(assumptions, hint_table)) break;
        Interpretation model;
        for (int a = 1; a <= f.atom_count(); ++a)
            model.insert(core.value_of_atom(a) > 0 ? Lit::pos(a) : Lit::neg(a));
        Cost w = 0;
        for (auto [i, wi] : softs)
            if (model.satisfies(f.clause(i))) w += wi;
        found = true;
        best_model = std::move(model);
        best_weight = w;
        if (w == total_soft) break;
        core.set_bound(w + 1);
    }
    if (!found) throw std::invalid_argument("maximize: hard clauses are unsatisfiable");

    for (int i : inst.hard) {
        if (!best_model.satisfies(f.clause(i)))
            throw std::logic_error("maxsat model violates hard clause " + std::to_string(i));
    }
    IndexSet satisfied = inst.hard;
    for (auto [i, w] : softs)
        if (best_model.satisfies(f.clause(i))) satisfied.insert(i);
    return MaxSatResult{std::move(best_model), std::move(satisfied), best_weight};
}

}  // namespace ocus
