#pragma once

// Logic-grid puzzle encoder: declarative category/clue descriptions
// turn into weighted, grouped CNF explanation problems. One relation
// atom per entity pair of each unordered category pair; bijectivity and
// transitivity axioms form the puzzle-agnostic clause group, the clues
// the puzzle-specific one.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocus/core.hpp"
#include "ocus/problem.hpp"

namespace ocus {

class PuzzleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PuzzleCategory {
    std::string name;
    std::vector<std::string> entities;
};

struct PuzzleSpec {
    std::vector<PuzzleCategory> categories;
    // Each clue is one clause; a literal is either a signed atom id or
    // an atom name "cat.entity=cat.entity", prefixed with '-' to negate.
    std::vector<std::vector<std::string>> clues;
    std::vector<std::string> given_facts;
    WeightScheme weights;
};

// Closed forms for the encoder's output size.
struct PuzzleShape {
    int pairs = 0;
    int atoms = 0;
    int bijectivity_clauses = 0;
    int transitivity_clauses = 0;
};

inline PuzzleShape puzzle_shape(int categories, int n) {
    PuzzleShape s;
    s.pairs = categories * (categories - 1) / 2;
    s.atoms = s.pairs * n * n;
    // per pair: 2n at-least-one rows/columns + pairwise at-most-one
    s.bijectivity_clauses = s.pairs * (2 * n + n * n * (n - 1));
    int triples = categories * (categories - 1) * (categories - 2) / 6;
    s.transitivity_clauses = triples * n * n * n * 2;
    return s;
}

namespace detail {

class PuzzleAtoms {
public:
    explicit PuzzleAtoms(const std::vector<PuzzleCategory>& cats) : cats_(&cats) {
        int c = static_cast<int>(cats.size());
        n_ = static_cast<int>(cats[0].entities.size());
        int next = 1;
        for (int a = 0; a < c; ++a)
            for (int b = a + 1; b < c; ++b) {
                base_[{a, b}] = next;
                next += n_ * n_;
            }
        atom_count_ = next - 1;
    }

    int n() const { return n_; }
    int atom_count() const { return atom_count_; }

    int id(int cat_a, int i, int cat_b, int j) const {
        if (cat_a > cat_b) {
            std::swap(cat_a, cat_b);
            std::swap(i, j);
        }
        return base_.at({cat_a, cat_b}) + i * n_ + j;
    }

    std::string name(int cat_a, int i, int cat_b, int j) const {
        const auto& cats = *cats_;
        return cats[static_cast<size_t>(cat_a)].name + "." +
               cats[static_cast<size_t>(cat_a)].entities[static_cast<size_t>(i)] + "=" +
               cats[static_cast<size_t>(cat_b)].name + "." +
               cats[static_cast<size_t>(cat_b)].entities[static_cast<size_t>(j)];
    }

private:
    const std::vector<PuzzleCategory>* cats_;
    int n_ = 0;
    int atom_count_ = 0;
    std::map<std::pair<int, int>, int> base_;
};

}  // namespace detail

inline ExplanationProblem encode(const PuzzleSpec& spec) {
    if (spec.categories.size() < 2) throw PuzzleError("need at least two categories");
    size_t n = spec.categories[0].entities.size();
    if (n < 2) throw PuzzleError("need at least two entities per category");
    std::map<std::string, int> cat_index;
    for (size_t a = 0; a < spec.categories.size(); ++a) {
        const auto& cat = spec.categories[a];
        if (cat.entities.size() != n) throw PuzzleError("all categories must have the same size");
        if (!cat_index.emplace(cat.name, static_cast<int>(a)).second)
            throw PuzzleError("duplicate category name '" + cat.name + "'");
        std::map<std::string, int> seen;
        for (size_t i = 0; i < cat.entities.size(); ++i)
            if (!seen.emplace(cat.entities[i], static_cast<int>(i)).second)
                throw PuzzleError("duplicate entity '" + cat.entities[i] + "' in category '" +
                                  cat.name + "'");
    }

    detail::PuzzleAtoms atoms(spec.categories);
    int c = static_cast<int>(spec.categories.size());
    int nn = atoms.n();

    ExplanationProblem p;
    p.weights = spec.weights;
    p.atom_names.assign(static_cast<size_t>(atoms.atom_count()) + 1, "");
    for (int a = 0; a < c; ++a)
        for (int b = a + 1; b < c; ++b)
            for (int i = 0; i < nn; ++i)
                for (int j = 0; j < nn; ++j)
                    p.atom_names[static_cast<size_t>(atoms.id(a, i, b, j))] = atoms.name(a, i, b, j);

    auto add_agnostic = [&](std::initializer_list<int> codes) {
        p.constraints.add_clause(Clause(codes), p.weights.agnostic, ClauseGroup::PuzzleAgnostic);
    };

    // bijectivity: every row and column of each pair grid has exactly
    // one true cell (at-least-one plus pairwise at-most-one)
    for (int a = 0; a < c; ++a)
        for (int b = a + 1; b < c; ++b) {
            for (int i = 0; i < nn; ++i) {
                std::vector<Lit> row;
                for (int j = 0; j < nn; ++j) row.push_back(Lit(atoms.id(a, i, b, j)));
                p.constraints.add_clause(Clause(row), p.weights.agnostic,
                                         ClauseGroup::PuzzleAgnostic);
            }
            for (int i = 0; i < nn; ++i)
                for (int j = 0; j < nn; ++j)
                    for (int j2 = j + 1; j2 < nn; ++j2)
                        add_agnostic({-atoms.id(a, i, b, j), -atoms.id(a, i, b, j2)});
            for (int j = 0; j < nn; ++j) {
                std::vector<Lit> col;
                for (int i = 0; i < nn; ++i) col.push_back(Lit(atoms.id(a, i, b, j)));
                p.constraints.add_clause(Clause(col), p.weights.agnostic,
                                         ClauseGroup::PuzzleAgnostic);
            }
            for (int j = 0; j < nn; ++j)
                for (int i = 0; i < nn; ++i)
                    for (int i2 = i + 1; i2 < nn; ++i2)
                        add_agnostic({-atoms.id(a, i, b, j), -atoms.id(a, i2, b, j)});
        }

    // transitivity over canonical category triples, both compositions
    for (int a = 0; a < c; ++a)
        for (int b = a + 1; b < c; ++b)
            for (int d = b + 1; d < c; ++d)
                for (int i = 0; i < nn; ++i)
                    for (int j = 0; j < nn; ++j)
                        for (int k = 0; k < nn; ++k) {
                            int ab = atoms.id(a, i, b, j);
                            int bd = atoms.id(b, j, d, k);
                            int ad = atoms.id(a, i, d, k);
                            add_agnostic({-ab, -bd, ad});
                            add_agnostic({-ad, -bd, ab});
                        }

    std::map<std::string, int> name_to_atom;
    for (int atom = 1; atom <= atoms.atom_count(); ++atom) {
        const std::string& nm = p.atom_names[static_cast<size_t>(atom)];
        name_to_atom[nm] = atom;
        auto eq = nm.find('=');
        name_to_atom[nm.substr(eq + 1) + "=" + nm.substr(0, eq)] = atom;  // reversed form
    }
    auto parse_literal = [&](const std::string& tok) -> Lit {
        std::string s = tok;
        bool neg = false;
        if (!s.empty() && (s[0] == '-' || s[0] == '~')) {
            neg = true;
            s = s.substr(1);
        }
        if (s.empty()) throw PuzzleError("empty literal in clue");
        if (s.find('=') == std::string::npos) {
            try {
                int id = std::stoi(s);
                if (id < 1 || id > atoms.atom_count())
                    throw PuzzleError("atom id " + s + " out of range");
                return Lit(neg ? -id : id);
            } catch (const std::invalid_argument&) {
                throw PuzzleError("cannot parse literal '" + tok + "'");
            }
        }
        auto it = name_to_atom.find(s);
        if (it == name_to_atom.end()) throw PuzzleError("unknown atom '" + s + "'");
        return Lit(neg ? -it->second : it->second);
    };

    for (const auto& clue : spec.clues) {
        if (clue.empty()) throw PuzzleError("empty clue clause");
        std::vector<Lit> lits;
        for (const auto& tok : clue) lits.push_back(parse_literal(tok));
        try {
            p.constraints.add_clause(Clause(std::move(lits)), p.weights.specific,
                                     ClauseGroup::PuzzleSpecific);
        } catch (const std::invalid_argument&) {
            throw PuzzleError("tautological clue clause");
        }
    }
    p.constraints.set_atom_count(atoms.atom_count());

    for (const auto& fact : spec.given_facts) {
        try {
            p.initial.insert(parse_literal(fact));
        } catch (const std::invalid_argument&) {
            throw PuzzleError("given facts are inconsistent");
        }
    }

    if (!solve_subset(p.constraints, p.constraints.all_indices(), p.initial))
        throw PuzzleError("puzzle constraints conjoined with given facts are unsatisfiable");
    return p;
}

// JSON puzzle description:
//   { "categories": [{"name": "...", "entities": ["...", ...]}, ...],
//     "clues": [[literal, ...], ...],
//     "given_facts": [literal, ...],
//     "weights": {...} }            (optional)
// where a literal is a signed atom id (integer) or an atom-name string
// ("cat.entity=cat.entity"), '-'-prefixed to negate.
inline PuzzleSpec parse_puzzle(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw PuzzleError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("categories"))
        throw PuzzleError("puzzle document needs a 'categories' array");
    PuzzleSpec spec;
    for (const auto& cat : doc["categories"]) {
        if (!cat.is_object() || !cat.contains("name") || !cat.contains("entities"))
            throw PuzzleError("each category needs 'name' and 'entities'");
        PuzzleCategory pc;
        pc.name = cat["name"].get<std::string>();
        for (const auto& e : cat["entities"]) pc.entities.push_back(e.get<std::string>());
        spec.categories.push_back(std::move(pc));
    }
    auto literal_string = [](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<int>());
        throw PuzzleError("clue literals must be strings or integers");
    };
    if (doc.contains("clues")) {
        for (const auto& clue : doc["clues"]) {
            if (!clue.is_array()) throw PuzzleError("each clue must be an array of literals");
            std::vector<std::string> toks;
            for (const auto& v : clue) toks.push_back(literal_string(v));
            spec.clues.push_back(std::move(toks));
        }
    }
    if (doc.contains("given_facts"))
        for (const auto& v : doc["given_facts"]) spec.given_facts.push_back(literal_string(v));
    if (doc.contains("weights")) {
        const auto& w = doc["weights"];
        if (w.contains("agnostic")) spec.weights.agnostic = w["agnostic"].get<Cost>();
        if (w.contains("specific")) spec.weights.specific = w["specific"].get<Cost>();
        if (w.contains("fact")) spec.weights.fact = w["fact"].get<Cost>();
    }
    return spec;
}

}  // namespace ocus
