#pragma once

// Core data model: literals, clauses, weighted grouped CNF formulas,
// partial interpretations and clause-index sets. Everything here is a
// plain value type; all subset reasoning elsewhere is done on clause
// indices, never on clause identity.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocus {

using Cost = std::int64_t;

// A literal is a signed atom id, DIMACS style: +v is the positive
// occurrence of atom v, -v the negated one. Atom ids start at 1.
class Lit {
public:
    Lit() = default;
    explicit Lit(int encoded) : code_(encoded) {
        if (encoded == 0) throw std::invalid_argument("literal code must be nonzero");
    }
    static Lit pos(int atom) { return Lit(atom); }
    static Lit neg(int atom) { return Lit(-atom); }

    int atom() const { return std::abs(code_); }
    bool positive() const { return code_ > 0; }
    int code() const { return code_; }
    Lit negated() const { return Lit(-code_); }

    // Canonical order: by atom, negative literal before positive.
    friend bool operator<(Lit a, Lit b) {
        if (a.atom() != b.atom()) return a.atom() < b.atom();
        return a.code_ < b.code_;
    }
    friend bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
    friend bool operator!=(Lit a, Lit b) { return a.code_ != b.code_; }

    friend std::ostream& operator<<(std::ostream& os, Lit l) { return os << l.code_; }

private:
    int code_ = 1;
};

// A clause is a duplicate-free disjunction of literals. Tautologies
// (p and ~p together) are rejected on construction; they can never be
// part of an unsatisfiable subset and would complicate grow logic.
class Clause {
public:
    Clause() = default;
    explicit Clause(std::vector<Lit> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (size_t i = 1; i < lits.size(); ++i) {
            if (lits[i - 1].atom() == lits[i].atom())
                throw std::invalid_argument("tautological clause");
        }
        lits_ = std::move(lits);
    }
    Clause(std::initializer_list<int> codes) : Clause(from_codes(codes)) {}

    const std::vector<Lit>& literals() const { return lits_; }
    size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool contains(Lit l) const {
        return std::binary_search(lits_.begin(), lits_.end(), l);
    }
    int max_atom() const {
        int m = 0;
        for (Lit l : lits_) m = std::max(m, l.atom());
        return m;
    }

    friend bool operator==(const Clause& a, const Clause& b) { return a.lits_ == b.lits_; }

    std::string str() const {
        std::ostringstream os;
        os << '(';
        for (size_t i = 0; i < lits_.size(); ++i) {
            if (i) os << ' ';
            os << lits_[i];
        }
        os << ')';
        return os.str();
    }

private:
    static std::vector<Lit> from_codes(std::initializer_list<int> codes) {
        std::vector<Lit> ls;
        ls.reserve(codes.size());
        for (int c : codes) ls.push_back(Lit(c));
        return ls;
    }
    std::vector<Lit> lits_;
};

// Group tag carried by every clause of an explanation problem; the tag
// decides the clause's weight under a problem's weight scheme.
enum class ClauseGroup {
    PuzzleAgnostic,
    PuzzleSpecific,
    Fact,
    DerivedFact,
    NegatedTarget,
};

inline const char* to_string(ClauseGroup g) {
    switch (g) {
        case ClauseGroup::PuzzleAgnostic: return "agnostic";
        case ClauseGroup::PuzzleSpecific: return "specific";
        case ClauseGroup::Fact: return "fact";
        case ClauseGroup::DerivedFact: return "derived-fact";
        case ClauseGroup::NegatedTarget: return "negated-target";
    }
    return "?";
}

// A consistent set of literals (never both p and ~p). Stored sorted in
// canonical literal order.
class Interpretation {
public:
    Interpretation() = default;
    explicit Interpretation(std::vector<Lit> lits) {
        for (Lit l : lits) insert(l);
    }
    Interpretation(std::initializer_list<int> codes) {
        for (int c : codes) insert(Lit(c));
    }

    void insert(Lit l) {
        if (contains(l)) return;
        if (contains(l.negated()))
            throw std::invalid_argument("inconsistent interpretation: both " +
                                        std::to_string(l.code()) + " and its negation");
        lits_.insert(std::upper_bound(lits_.begin(), lits_.end(), l), l);
    }
    void insert_all(const Interpretation& other) {
        for (Lit l : other.lits_) insert(l);
    }

    bool contains(Lit l) const {
        return std::binary_search(lits_.begin(), lits_.end(), l);
    }
    bool contains_atom(int atom) const {
        return contains(Lit::pos(atom)) || contains(Lit::neg(atom));
    }
    // Value of an atom, as +1 / -1 / 0 (unassigned).
    int value(int atom) const {
        if (contains(Lit::pos(atom))) return 1;
        if (contains(Lit::neg(atom))) return -1;
        return 0;
    }

    bool subset_of(const Interpretation& other) const {
        return std::includes(other.lits_.begin(), other.lits_.end(),
                             lits_.begin(), lits_.end());
    }

    // {~l | l in I}; an involution.
    Interpretation negated() const {
        Interpretation r;
        for (Lit l : lits_) r.lits_.push_back(l.negated());
        std::sort(r.lits_.begin(), r.lits_.end());
        return r;
    }

    // Literals of this interpretation not present in `other`.
    Interpretation minus(const Interpretation& other) const {
        Interpretation r;
        for (Lit l : lits_)
            if (!other.contains(l)) r.lits_.push_back(l);
        return r;
    }

    bool satisfies(const Clause& c) const {
        for (Lit l : c.literals())
            if (contains(l)) return true;
        return false;
    }

    const std::vector<Lit>& literals() const { return lits_; }
    size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

    friend bool operator==(const Interpretation& a, const Interpretation& b) {
        return a.lits_ == b.lits_;
    }

    std::string str() const {
        std::ostringstream os;
        os << '{';
        for (size_t i = 0; i < lits_.size(); ++i) {
            if (i) os << ' ';
            os << lits_[i];
        }
        os << '}';
        return os.str();
    }

private:
    std::vector<Lit> lits_;
};

inline Interpretation negate_set(const Interpretation& interp) { return interp.negated(); }

// A set of clause indices into some CnfFormula, kept sorted and unique.
// Comparison is lexicographic on the sorted sequence, which is the
// tie-break order used throughout the hitting-set machinery.
class IndexSet {
public:
    IndexSet() = default;
    explicit IndexSet(std::vector<int> idx) : idx_(std::move(idx)) { normalize(); }
    IndexSet(std::initializer_list<int> idx) : idx_(idx) { normalize(); }

    static IndexSet range(int n) {
        std::vector<int> v(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i;
        return IndexSet(std::move(v));
    }

    bool contains(int i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }
    void insert(int i) {
        auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
        if (it == idx_.end() || *it != i) idx_.insert(it, i);
    }

    IndexSet united(const IndexSet& other) const {
        std::vector<int> out;
        out.reserve(idx_.size() + other.idx_.size());
        std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                       std::back_inserter(out));
        return IndexSet(private_tag{}, std::move(out));
    }
    IndexSet minus(const IndexSet& other) const {
        std::vector<int> out;
        std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                            std::back_inserter(out));
        return IndexSet(private_tag{}, std::move(out));
    }
    IndexSet intersect(const IndexSet& other) const {
        std::vector<int> out;
        std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                              std::back_inserter(out));
        return IndexSet(private_tag{}, std::move(out));
    }
    bool intersects(const IndexSet& other) const {
        auto a = idx_.begin();
        auto b = other.idx_.begin();
        while (a != idx_.end() && b != other.idx_.end()) {
            if (*a == *b) return true;
            if (*a < *b) ++a; else ++b;
        }
        return false;
    }
    bool subset_of(const IndexSet& other) const {
        return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
    }

    const std::vector<int>& indices() const { return idx_; }
    size_t size() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

    friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.idx_ == b.idx_; }
    friend bool operator!=(const IndexSet& a, const IndexSet& b) { return a.idx_ != b.idx_; }
    // Lexicographic on the sorted index sequence.
    friend bool operator<(const IndexSet& a, const IndexSet& b) { return a.idx_ < b.idx_; }

    std::string str() const {
        std::ostringstream os;
        os << '{';
        for (size_t i = 0; i < idx_.size(); ++i) {
            if (i) os << ' ';
            os << idx_[i];
        }
        os << '}';
        return os.str();
    }

private:
    struct private_tag {};
    IndexSet(private_tag, std::vector<int> sorted) : idx_(std::move(sorted)) {}
    void normalize() {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    }
    std::vector<int> idx_;
};

// Weighted, group-tagged clause sequence with dense stable 0-based
// indices. Duplicate clauses under distinct indices are allowed: a
// constraint clause and a derived-fact unit may well have equal content.
class CnfFormula {
public:
    CnfFormula() = default;

    int add_clause(Clause c, Cost weight, ClauseGroup group) {
        if (weight < 0) throw std::invalid_argument("negative clause weight");
        atom_count_ = std::max(atom_count_, c.max_atom());
        clauses_.push_back(std::move(c));
        weights_.push_back(weight);
        groups_.push_back(group);
        return static_cast<int>(clauses_.size()) - 1;
    }

    int size() const { return static_cast<int>(clauses_.size()); }
    bool empty() const { return clauses_.empty(); }

    const Clause& clause(int i) const { return clauses_.at(static_cast<size_t>(i)); }
    Cost weight(int i) const { return weights_.at(static_cast<size_t>(i)); }
    ClauseGroup group(int i) const { return groups_.at(static_cast<size_t>(i)); }

    int atom_count() const { return atom_count_; }
    void set_atom_count(int n) {
        if (n < atom_count_)
            throw std::invalid_argument("atom count below an existing clause literal");
        atom_count_ = n;
    }

    IndexSet all_indices() const { return IndexSet::range(size()); }

    IndexSet indices_with_group(ClauseGroup g) const {
        std::vector<int> v;
        for (int i = 0; i < size(); ++i)
            if (groups_[static_cast<size_t>(i)] == g) v.push_back(i);
        return IndexSet(std::move(v));
    }

    void check_subset(const IndexSet& s) const {
        if (!s.empty() && (s.indices().front() < 0 || s.indices().back() >= size()))
            throw std::out_of_range("clause index outside formula");
    }

private:
    std::vector<Clause> clauses_;
    std::vector<Cost> weights_;
    std::vector<ClauseGroup> groups_;
    int atom_count_ = 0;
};

// Sum of clause weights over a subset.
inline Cost cost(const CnfFormula& f, const IndexSet& subset) {
    f.check_subset(subset);
    Cost total = 0;
    for (int i : subset) total += f.weight(i);
    return total;
}

}  // namespace ocus
