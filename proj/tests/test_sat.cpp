#include <catch2/catch_amalgamated.hpp>

#include "ocus/sat.hpp"

#include "helpers.hpp"

using namespace ocus;

namespace {
PolarityHint end_hint() {
    return PolarityHint::from_interpretation(Interpretation{1, -2, 3});
}
}  // namespace

TEST_CASE("empty subset is satisfiable and follows the hint") {
    CnfFormula f = testutil::example_assembled();
    SatResult res = solve_subset(f, IndexSet{}, {}, end_hint());
    REQUIRE(res);
    CHECK(*res == Interpretation{1, -2, 3});
}

TEST_CASE("the conflicting four-clause subset is unsatisfiable") {
    CnfFormula f = testutil::example_assembled();
    CHECK_FALSE(solve_subset(f, IndexSet{0, 1, 4, 6}));
}

TEST_CASE("unit assumptions can contradict an active clause") {
    CnfFormula f;
    f.add_clause(Clause{1}, 1, ClauseGroup::PuzzleSpecific);
    CHECK_FALSE(solve_subset(f, IndexSet{0}, Interpretation{-1}));
    CHECK(solve_subset(f, IndexSet{}, Interpretation{-1}));
}

TEST_CASE("empty clause makes its subset unsatisfiable") {
    CnfFormula f;
    f.add_clause(Clause{}, 1, ClauseGroup::PuzzleSpecific);
    f.add_clause(Clause{1}, 1, ClauseGroup::PuzzleSpecific);
    f.set_atom_count(1);
    CHECK_FALSE(solve_subset(f, IndexSet{0, 1}));
    CHECK(solve_subset(f, IndexSet{1}));
}

TEST_CASE("verdicts agree with truth-table enumeration") {
    std::mt19937 rng(23);
    for (int round = 0; round < 300; ++round) {
        int max_atoms = round % 10 == 0 ? 16 : 8;
        CnfFormula f = testutil::random_formula(rng, max_atoms, 14);
        SatSolver solver(f);

        std::vector<int> idx;
        std::uniform_int_distribution<int> coin(0, 1);
        for (int i = 0; i < f.size(); ++i)
            if (coin(rng)) idx.push_back(i);
        IndexSet subset(std::move(idx));

        SatResult res = solver.solve(subset);
        CHECK(res.has_value() == testutil::brute_sat(f, subset));
        if (res) {
            for (int a = 1; a <= f.atom_count(); ++a) CHECK(res->contains_atom(a));
            for (int i : subset) CHECK(res->satisfies(f.clause(i)));
        }
    }
}

TEST_CASE("unsatisfiability is monotone under supersets") {
    std::mt19937 rng(31);
    int checked = 0;
    while (checked < 40) {
        CnfFormula f = testutil::random_formula(rng, 5, 10);
        SatSolver solver(f);
        IndexSet all = f.all_indices();
        if (solver.solve(all)) continue;
        ++checked;
        // find some unsat subset, then check all of its supersets stay unsat
        std::vector<int> idx;
        std::uniform_int_distribution<int> coin(0, 1);
        for (int i = 0; i < f.size(); ++i)
            if (coin(rng)) idx.push_back(i);
        IndexSet s(std::move(idx));
        if (solver.solve(s)) continue;
        for (int extra = 0; extra < f.size(); ++extra) {
            IndexSet sup = s;
            sup.insert(extra);
            CHECK_FALSE(solver.solve(sup));
        }
    }
}

TEST_CASE("identical queries return identical models regardless of history") {
    std::mt19937 rng(41);
    for (int round = 0; round < 40; ++round) {
        CnfFormula f = testutil::random_formula(rng, 8, 12);
        PolarityHint hint;
        std::uniform_int_distribution<int> coin(0, 1);
        for (int a = 1; a <= f.atom_count(); ++a)
            if (coin(rng)) hint.set(a, coin(rng) == 1);

        std::vector<int> idx;
        for (int i = 0; i < f.size(); ++i)
            if (coin(rng)) idx.push_back(i);
        IndexSet subset(std::move(idx));

        SatSolver fresh(f);
        SatResult direct = fresh.solve(subset, {}, hint);

        SatSolver warmed(f);
        for (int k = 0; k < 5; ++k) {
            std::vector<int> other;
            for (int i = 0; i < f.size(); ++i)
                if (coin(rng)) other.push_back(i);
            warmed.solve(IndexSet(std::move(other)));  // unrelated history
        }
        SatResult replay = warmed.solve(subset, {}, hint);
        REQUIRE(direct.has_value() == replay.has_value());
        if (direct) CHECK(*direct == *replay);
        // also: the same call twice on the same instance
        SatResult again = warmed.solve(subset, {}, hint);
        REQUIRE(replay.has_value() == again.has_value());
        if (replay) CHECK(*replay == *again);
    }
}

TEST_CASE("hinted atoms take their preferred value when unconstrained") {
    CnfFormula f;
    f.add_clause(Clause{1, 2}, 1, ClauseGroup::PuzzleSpecific);
    f.set_atom_count(4);
    PolarityHint hint;
    hint.set(2, true);
    hint.set(3, true);
    SatResult res = solve_subset(f, f.all_indices(), {}, hint);
    REQUIRE(res);
    // atom 1 defaults to false, 2 and 3 follow the hint, 4 defaults
    CHECK(*res == Interpretation{-1, 2, 3, -4});
}

TEST_CASE("model_satisfied_clauses matches the worked example") {
    CnfFormula f = testutil::example_assembled();
    Interpretation model{1, -2, 3};
    CHECK(model_satisfied_clauses(f, model) == IndexSet{0, 1, 2, 3, 4});

    Interpretation partial{1};
    CHECK_THROWS_AS(model_satisfied_clauses(f, partial), std::invalid_argument);
}

TEST_CASE("model_satisfied_clauses edge cases") {
    CnfFormula f;
    f.add_clause(Clause{1}, 1, ClauseGroup::PuzzleSpecific);
    f.add_clause(Clause{-1}, 1, ClauseGroup::PuzzleSpecific);
    f.set_atom_count(1);
    CHECK(model_satisfied_clauses(f, Interpretation{1}) == IndexSet{0});

    CnfFormula g;
    g.add_clause(Clause{1, -2}, 1, ClauseGroup::PuzzleSpecific);
    g.add_clause(Clause{2, -1}, 1, ClauseGroup::PuzzleSpecific);
    g.set_atom_count(2);
    CHECK(model_satisfied_clauses(g, Interpretation{1, 2}) == g.all_indices());
}
