#pragma once

// Explanation problems: a weighted constraint formula, an initial
// interpretation, an optional target interpretation and the group
// weight scheme, together with the JSON input format and the OCUS
// formula assembly described in the docs.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocus/core.hpp"
#include "ocus/sat.hpp"

namespace ocus {

struct WeightScheme {
    Cost agnostic = 60;
    Cost specific = 100;
    Cost fact = 1;
};

class ProblemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExplanationProblem {
    CnfFormula constraints;  // groups PuzzleAgnostic / PuzzleSpecific only
    Interpretation initial;
    std::optional<Interpretation> target;
    WeightScheme weights;
    std::vector<std::string> atom_names;  // 1-based; may be empty

    std::string atom_name(int atom) const {
        if (atom >= 1 && atom < static_cast<int>(atom_names.size()) &&
            !atom_names[static_cast<size_t>(atom)].empty())
            return atom_names[static_cast<size_t>(atom)];
        return "x" + std::to_string(atom);
    }
    std::string literal_name(Lit l) const {
        return (l.positive() ? "" : "~") + atom_name(l.atom());
    }
};

namespace detail {

inline Interpretation literals_from_json(const nlohmann::json& arr, int atom_count,
                                         const char* what) {
    if (!arr.is_array()) throw ProblemError(std::string(what) + " must be an array");
    Interpretation interp;
    for (const auto& v : arr) {
        if (!v.is_number_integer()) throw ProblemError(std::string(what) + ": literal must be an integer");
        int code = v.get<int>();
        if (code == 0 || std::abs(code) > atom_count)
            throw ProblemError(std::string(what) + ": literal " + std::to_string(code) +
                               " out of range");
        try {
            interp.insert(Lit(code));
        } catch (const std::invalid_argument&) {
            throw ProblemError(std::string(what) + " is inconsistent on atom " +
                               std::to_string(std::abs(code)));
        }
    }
    return interp;
}

}  // namespace detail

// Parses the JSON problem document:
//   { "atoms": ["x1", ...],
//     "clauses": [{"lits": [signed ints], "group": "agnostic"|"specific"}, ...],
//     "initial": [signed ints],
//     "target": [signed ints],                       (optional)
//     "weights": {"agnostic": N, "specific": N, "fact": N} }   (optional)
// Clause weights are assigned from the scheme by group. The conjunction
// of constraints and initial facts must be satisfiable.
inline ExplanationProblem parse_problem(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProblemError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ProblemError("problem document must be a JSON object");
    if (!doc.contains("atoms") || !doc["atoms"].is_array())
        throw ProblemError("missing 'atoms' array");
    if (!doc.contains("clauses") || !doc["clauses"].is_array())
        throw ProblemError("missing 'clauses' array");
    if (!doc.contains("initial")) throw ProblemError("missing 'initial' array");

    ExplanationProblem p;
    p.atom_names.push_back("");
    for (const auto& a : doc["atoms"]) {
        if (!a.is_string()) throw ProblemError("atom names must be strings");
        p.atom_names.push_back(a.get<std::string>());
    }
    int atom_count = static_cast<int>(p.atom_names.size()) - 1;

    if (doc.contains("weights")) {
        const auto& w = doc["weights"];
        if (!w.is_object()) throw ProblemError("'weights' must be an object");
        if (w.contains("agnostic")) p.weights.agnostic = w["agnostic"].get<Cost>();
        if (w.contains("specific")) p.weights.specific = w["specific"].get<Cost>();
        if (w.contains("fact")) p.weights.fact = w["fact"].get<Cost>();
        if (p.weights.agnostic < 0 || p.weights.specific < 0 || p.weights.fact < 0)
            throw ProblemError("weights must be non-negative");
    }

    for (const auto& c : doc["clauses"]) {
        if (!c.is_object() || !c.contains("lits") || !c.contains("group"))
            throw ProblemError("each clause needs 'lits' and 'group'");
        std::string group = c["group"].get<std::string>();
        ClauseGroup g;
        Cost w;
        if (group == "agnostic") {
            g = ClauseGroup::PuzzleAgnostic;
            w = p.weights.agnostic;
        } else if (group == "specific") {
            g = ClauseGroup::PuzzleSpecific;
            w = p.weights.specific;
        } else {
            throw ProblemError("unknown clause group '" + group + "'");
        }
        std::vector<Lit> lits;
        for (const auto& v : c["lits"]) {
            if (!v.is_number_integer()) throw ProblemError("clause literal must be an integer");
            int code = v.get<int>();
            if (code == 0 || std::abs(code) > atom_count)
                throw ProblemError("clause literal " + std::to_string(code) + " out of range");
            lits.push_back(Lit(code));
        }
        try {
            p.constraints.add_clause(Clause(std::move(lits)), w, g);
        } catch (const std::invalid_argument&) {
            throw ProblemError("tautological clause in input");
        }
    }
    p.constraints.set_atom_count(atom_count);

    p.initial = detail::literals_from_json(doc["initial"], atom_count, "initial");
    if (doc.contains("target")) {
        p.target = detail::literals_from_json(doc["target"], atom_count, "target");
        if (!p.initial.subset_of(*p.target))
            throw ProblemError("initial interpretation is not a subset of the target");
    }

    if (!solve_subset(p.constraints, p.constraints.all_indices(), p.initial))
        throw ProblemError("constraints conjoined with the initial facts are unsatisfiable");
    return p;
}

// The formula handed to the OCUS call at interpretation I: the
// constraint clauses under their original indices, one DerivedFact unit
// per literal of I, then one NegatedTarget unit per literal of
// target \ I (the negation of the literal, in canonical literal order).
// `negation_domain` holds the NegatedTarget indices, the domain of the
// exactly-one constraint.
struct AssembledOcus {
    CnfFormula formula;
    IndexSet negation_domain;
};

inline AssembledOcus assemble_ocus_formula(const ExplanationProblem& p,
                                           const Interpretation& interp) {
    if (!p.target) throw std::invalid_argument("assemble: problem target not resolved");
    if (!p.initial.subset_of(interp) || !interp.subset_of(*p.target))
        throw std::invalid_argument("assemble: interpretation must lie between initial and target");
    Interpretation remaining = p.target->minus(interp);
    if (remaining.empty())
        throw std::invalid_argument("assemble: nothing left to explain");

    AssembledOcus out;
    for (int i = 0; i < p.constraints.size(); ++i)
        out.formula.add_clause(p.constraints.clause(i), p.constraints.weight(i),
                               p.constraints.group(i));
    for (Lit l : interp.literals())
        out.formula.add_clause(Clause({l.code()}), p.weights.fact, ClauseGroup::DerivedFact);
    std::vector<int> domain;
    for (Lit l : remaining.literals()) {
        domain.push_back(out.formula.add_clause(Clause({l.negated().code()}), p.weights.fact,
                                                ClauseGroup::NegatedTarget));
    }
    out.formula.set_atom_count(p.constraints.atom_count());
    out.negation_domain = IndexSet(std::move(domain));
    return out;
}

}  // namespace ocus
