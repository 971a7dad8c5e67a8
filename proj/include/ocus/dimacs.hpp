#pragma once

// DIMACS CNF reader and writer. The reader is strict: a malformed
// header, a literal above the declared variable count, a tautological
// clause or a clause missing its terminating 0 are all reported with
// the offending line number.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocus/core.hpp"

namespace ocus {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Parses DIMACS CNF. All clauses get weight 1 and group PuzzleSpecific;
// the atom count comes from the header, clause order is preserved.
inline CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    std::string line;
    int lineno = 0;
    int declared_vars = -1;
    int declared_clauses = -1;
    std::vector<Lit> pending;
    int pending_line = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == 'c') continue;
        if (line[0] == 'p') {
            if (declared_vars >= 0) throw ParseError(lineno, "duplicate header");
            std::istringstream hs(line);
            std::string p, cnf;
            if (!(hs >> p >> cnf >> declared_vars >> declared_clauses) || p != "p" ||
                cnf != "cnf" || declared_vars < 0 || declared_clauses < 0) {
                throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
            }
            std::string extra;
            if (hs >> extra) throw ParseError(lineno, "trailing tokens after header");
            continue;
        }
        if (declared_vars < 0) throw ParseError(lineno, "clause before header");

        std::istringstream ls(line);
        int code;
        while (ls >> code) {
            if (code == 0) {
                Clause c;
                try {
                    c = Clause(pending);
                } catch (const std::invalid_argument&) {
                    throw ParseError(pending_line ? pending_line : lineno, "tautological clause");
                }
                f.add_clause(std::move(c), 1, ClauseGroup::PuzzleSpecific);
                pending.clear();
                pending_line = 0;
            } else {
                if (std::abs(code) > declared_vars)
                    throw ParseError(lineno, "literal " + std::to_string(code) +
                                                 " exceeds declared variable count");
                if (pending.empty()) pending_line = lineno;
                pending.push_back(Lit(code));
            }
        }
        if (!ls.eof()) throw ParseError(lineno, "unexpected token in clause");
    }
    if (!pending.empty())
        throw ParseError(pending_line, "clause missing terminating 0");
    if (declared_vars < 0) throw ParseError(lineno, "missing header");
    if (f.size() != declared_clauses)
        throw ParseError(lineno, "expected " + std::to_string(declared_clauses) +
                                     " clauses, found " + std::to_string(f.size()));
    f.set_atom_count(declared_vars);
    return f;
}

inline CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

inline void write_dimacs(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.atom_count() << ' ' << f.size() << '\n';
    for (int i = 0; i < f.size(); ++i) {
        for (Lit l : f.clause(i).literals()) out << l.code() << ' ';
        out << "0\n";
    }
}

inline std::string write_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    write_dimacs(os, f);
    return os.str();
}

}  // namespace ocus
