// Acceptance suite: one self-contained check per shipped guarantee,
// each printing a PASS/FAIL line. Exits nonzero if any check fails.
//
// Brute-force oracles here are independent of the library's solving
// code: truth tables walk assignments directly and subset optima come
// from plain enumeration.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ocus/core.hpp"
#include "ocus/explain.hpp"
#include "ocus/hitting_set.hpp"
#include "ocus/maxsat.hpp"
#include "ocus/ocus.hpp"
#include "ocus/problem.hpp"
#include "ocus/puzzle.hpp"
#include "ocus/subsets.hpp"

using namespace ocus;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " - " << what
              << std::endl;
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---- shared fixtures ----------------------------------------------------

ExplanationProblem worked_example() {
    ExplanationProblem p;
    p.constraints.add_clause(Clause{-1, -2, 3}, 60, ClauseGroup::PuzzleAgnostic);
    p.constraints.add_clause(Clause{-1, 2, 3}, 60, ClauseGroup::PuzzleAgnostic);
    p.constraints.add_clause(Clause{1}, 100, ClauseGroup::PuzzleSpecific);
    p.constraints.add_clause(Clause{-2, -3}, 100, ClauseGroup::PuzzleSpecific);
    p.constraints.set_atom_count(3);
    p.initial = Interpretation{1};
    return p;
}

std::vector<GrowStrategy> all_grow_strategies() {
    std::vector<GrowStrategy> out{GrowStrategy::no_grow(), GrowStrategy::model_extension(),
                                  GrowStrategy::sat_loop_greedy()};
    for (auto dom : {MaxSatDomain::Full, MaxSatDomain::Actual})
        for (auto scheme : {SoftScheme::Unif, SoftScheme::Pos, SoftScheme::Inv})
            out.push_back(GrowStrategy::maxsat(dom, scheme));
    return out;
}

struct Puzzle {
    std::string name;
    ExplanationProblem problem;
};

std::vector<Puzzle> load_puzzles() {
    std::vector<Puzzle> out;
    for (const char* name : {"puzzle2x2", "puzzle3x3", "puzzle4x4"}) {
        std::string text = read_file(std::string(OCUS_DATA_DIR) + "/puzzles/" + name + ".json");
        out.push_back({name, encode(parse_puzzle(text))});
    }
    return out;
}

// ---- independent oracles ------------------------------------------------

bool brute_sat(const CnfFormula& f, const IndexSet& subset) {
    int n = f.atom_count();
    for (uint64_t a = 0; a < (uint64_t{1} << n); ++a) {
        bool ok = true;
        for (int i : subset) {
            bool clause_sat = false;
            for (Lit l : f.clause(i).literals())
                if (((a >> (l.atom() - 1)) & 1) == static_cast<uint64_t>(l.positive())) {
                    clause_sat = true;
                    break;
                }
            if (!clause_sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

std::optional<Cost> brute_optimal_constrained_cost(const CnfFormula& f, const IndexSet& domain) {
    size_t n = static_cast<size_t>(f.size());
    std::vector<uint8_t> sat_cache(size_t{1} << n, 2);
    std::optional<Cost> best;
    for (uint64_t id = 0; id < (uint64_t{1} << n); ++id) {
        std::vector<int> idx;
        int in_domain = 0;
        for (size_t k = 0; k < n; ++k)
            if (id & (uint64_t{1} << k)) {
                idx.push_back(static_cast<int>(k));
                if (domain.contains(static_cast<int>(k))) ++in_domain;
            }
        if (in_domain != 1) continue;
        IndexSet s(std::move(idx));
        if (brute_sat(f, s)) continue;
        Cost c = cost(f, s);
        if (!best || c < *best) best = c;
    }
    (void)sat_cache;
    return best;
}

// Random small weighted formula for the oracle-equivalence suites.
CnfFormula random_formula(std::mt19937& rng, int max_atoms, int max_clauses, bool weighted) {
    int atoms = std::uniform_int_distribution<int>(2, max_atoms)(rng);
    int clauses = std::uniform_int_distribution<int>(1, max_clauses)(rng);
    CnfFormula f;
    for (int c = 0; c < clauses; ++c) {
        int len = std::uniform_int_distribution<int>(1, 3)(rng);
        std::vector<Lit> lits;
        std::vector<int> used;
        for (int k = 0; k < len; ++k) {
            int atom = std::uniform_int_distribution<int>(1, atoms)(rng);
            bool dup = false;
            for (int u : used) dup = dup || u == atom;
            if (dup) continue;
            used.push_back(atom);
            lits.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? Lit::pos(atom)
                                                                         : Lit::neg(atom));
        }
        if (lits.empty()) lits.push_back(Lit::pos(1));
        f.add_clause(Clause(std::move(lits)),
                     weighted ? std::uniform_int_distribution<int>(1, 100)(rng) : 1,
                     ClauseGroup::PuzzleSpecific);
    }
    f.set_atom_count(atoms);
    return f;
}

std::vector<IndexSet> brute_minimal_hitting_sets(const std::vector<IndexSet>& sets) {
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
        bool hits = true;
        for (const auto& h : sets)
            if (!s.intersects(h)) {
                hits = false;
                break;
            }
        if (hits) hitting.push_back(std::move(s));
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
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

// ---- criterion 1: worked-example golden trace ----------------------------

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    ExplanationProblem p = worked_example();
    p.target = Interpretation{1, -2, 3};
    AssembledOcus assembled = assemble_ocus_formula(p, Interpretation{1});
    PolarityHint hint = PolarityHint::from_interpretation(*p.target);
    IndexSet actual{0, 1, 2, 3, 4};

    // optimal constrained core under the reference grow
    {
        HittingSetInstance hs = HittingSetInstance::for_formula(
            assembled.formula, MetaConstraint::exactly_one(assembled.negation_domain));
        SatSubsetCache cache;
        SatSolver solver(assembled.formula);
        OcusParams params{GrowStrategy::maxsat(MaxSatDomain::Actual, SoftScheme::Unif), hint,
                          actual, nullptr};
        OcusResult res = ocus::ocus(assembled.formula, hs, cache, solver, params);
        if (res.kind != OcusResult::Kind::Found || !(res.subset == IndexSet{0, 1, 4, 6}) ||
            res.cost != 122) {
            ok = false;
            detail += " reference-grow result off;";
        }
    }

    // hitting-set solver reproduces the published per-iteration sets
    // bit-exactly when fed those exact collections
    {
        HittingSetInstance hs(IndexSet::range(7), {60, 60, 100, 100, 1, 1, 1},
                              MetaConstraint::exactly_one(IndexSet{5, 6}));
        const std::vector<std::pair<IndexSet, IndexSet>> rows = {
            {IndexSet{5, 6}, IndexSet{5}},          // -> {c6}
            {IndexSet{3, 6}, IndexSet{6}},          // -> {c7}
            {IndexSet{1, 5}, IndexSet{1, 6}},       // -> {c2, c7}
            {IndexSet{0}, IndexSet{0, 1, 6}},       // -> {c1, c2, c7}
            {IndexSet{2, 4}, IndexSet{0, 1, 4, 6}}  // -> {c1, c2, c5, c7}
        };
        for (const auto& [to_add, expected] : rows) {
            hs.add_set(to_add);
            auto sol = hs.solve();
            if (!sol || !(sol->set == expected)) {
                ok = false;
                detail += " hitting-set row mismatch;";
            }
        }
    }

    // the end-to-end loop lands on cost 122 and the same set under
    // every grow strategy
    for (const auto& strategy : all_grow_strategies()) {
        HittingSetInstance hs = HittingSetInstance::for_formula(
            assembled.formula, MetaConstraint::exactly_one(assembled.negation_domain));
        SatSubsetCache cache;
        SatSolver solver(assembled.formula);
        OcusParams params{strategy, hint, actual, nullptr};
        OcusResult res = ocus::ocus(assembled.formula, hs, cache, solver, params);
        if (res.kind != OcusResult::Kind::Found || res.cost != 122 ||
            !(res.subset == IndexSet{0, 1, 4, 6})) {
            ok = false;
            detail += " grow " + strategy.label() + " off;";
        }
    }

    double secs = seconds_since(t0);
    if (secs >= 1.0) {
        ok = false;
        detail += " took " + std::to_string(secs) + "s;";
    }
    report(1, ok, "worked-example golden trace, every grow strategy, <1s" + detail);
}

// ---- criterion 2: constrained-optimum oracle equivalence -----------------

void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20210711);
    int checked = 0, mismatches = 0, none_cases = 0;
    auto strategies = all_grow_strategies();
    while (checked < 220) {
        CnfFormula f = random_formula(rng, 8, 12, true);
        std::vector<int> dom;
        int dsize = std::uniform_int_distribution<int>(1, f.size())(rng);
        for (int k = 0; k < dsize; ++k)
            dom.push_back(std::uniform_int_distribution<int>(0, f.size() - 1)(rng));
        IndexSet domain(std::move(dom));
        std::optional<Cost> expected = brute_optimal_constrained_cost(f, domain);
        ++checked;

        HittingSetInstance hs =
            HittingSetInstance::for_formula(f, MetaConstraint::exactly_one(domain));
        SatSubsetCache cache;
        SatSolver solver(f);
        OcusParams params{strategies[static_cast<size_t>(checked) % strategies.size()], {},
                          f.all_indices(), nullptr};
        OcusResult res = ocus::ocus(f, hs, cache, solver, params);
        if (expected) {
            if (res.kind != OcusResult::Kind::Found || res.cost != *expected ||
                brute_sat(f, res.subset) || res.subset.intersect(domain).size() != 1)
                ++mismatches;
        } else {
            ++none_cases;
            if (res.kind != OcusResult::Kind::NoneExists) ++mismatches;
        }
    }
    double secs = seconds_since(t0);
    bool ok = mismatches == 0 && checked >= 200 && secs < 60.0;
    std::ostringstream os;
    os << "optimal constrained cores equal exhaustive enumeration on " << checked
       << " random instances (" << none_cases << " without any core), " << mismatches
       << " mismatches, " << secs << "s";
    report(2, ok, os.str());
}

// ---- criterion 3: MUS/MCS duality ----------------------------------------

void criterion3() {
    std::mt19937 rng(424242);
    int checked = 0, mismatches = 0, unsat_seen = 0;
    while (checked < 210) {
        CnfFormula f = random_formula(rng, 7, 12, false);
        ++checked;
        auto muses = enumerate_mus(f);
        auto mcses = enumerate_mcs(f);
        std::sort(muses.begin(), muses.end());
        std::sort(mcses.begin(), mcses.end());
        if (!muses.empty()) {
            ++unsat_seen;
            if (brute_minimal_hitting_sets(muses) != mcses) ++mismatches;
            if (brute_minimal_hitting_sets(mcses) != muses) ++mismatches;
        } else {
            // satisfiable: the only MCS is the empty set
            if (!(mcses.size() == 1 && mcses[0] == IndexSet{})) ++mismatches;
        }
    }
    bool ok = mismatches == 0 && checked >= 200 && unsat_seen >= 30;
    std::ostringstream os;
    os << "minimal-hitting-set duality in both directions on " << checked << " formulas ("
       << unsat_seen << " unsatisfiable), " << mismatches << " mismatches";
    report(3, ok, os.str());
}

// ---- criterion 4: hitting-set exactness ----------------------------------

struct MaskInstance {
    int universe;
    std::vector<Cost> weights;
    std::vector<uint32_t> sets;
    uint32_t domain = 0;  // 0 = trivially-true constraint
};

std::optional<std::pair<uint32_t, Cost>> mask_brute(const MaskInstance& inst) {
    std::optional<std::pair<uint32_t, Cost>> best;
    auto lex_smaller = [&](uint32_t a, uint32_t b) {
        // lexicographic on sorted index sequences
        std::vector<int> va, vb;
        for (int e = 0; e < inst.universe; ++e) {
            if (a & (uint32_t{1} << e)) va.push_back(e);
            if (b & (uint32_t{1} << e)) vb.push_back(e);
        }
        return va < vb;
    };
    for (uint32_t id = 0; id < (uint32_t{1} << inst.universe); ++id) {
        if (inst.domain && __builtin_popcount(id & inst.domain) != 1) continue;
        bool hits = true;
        for (uint32_t s : inst.sets)
            if (!(id & s)) {
                hits = false;
                break;
            }
        if (!hits) continue;
        Cost c = 0;
        for (int e = 0; e < inst.universe; ++e)
            if (id & (uint32_t{1} << e)) c += inst.weights[static_cast<size_t>(e)];
        if (!best || c < best->second || (c == best->second && lex_smaller(id, best->first)))
            best = {id, c};
    }
    return best;
}

void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(777);
    int checked = 0, mismatches = 0, incremental_mismatches = 0;
    while (checked < 520) {
        MaskInstance inst;
        inst.universe = std::uniform_int_distribution<int>(4, 18)(rng);
        for (int e = 0; e < inst.universe; ++e)
            inst.weights.push_back(std::uniform_int_distribution<int>(1, 100)(rng));
        bool exactly_one = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        if (exactly_one)
            while (inst.domain == 0)
                inst.domain = std::uniform_int_distribution<uint32_t>(
                                  1, (uint32_t{1} << inst.universe) - 1)(rng) &
                              ((uint32_t{1} << inst.universe) - 1);
        int nsets = std::uniform_int_distribution<int>(0, 25)(rng);
        for (int k = 0; k < nsets; ++k) {
            uint32_t s = 0;
            for (int e = 0; e < inst.universe; ++e)
                if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) s |= uint32_t{1} << e;
            inst.sets.push_back(s);
        }
        ++checked;

        auto to_indexset = [&](uint32_t mask) {
            std::vector<int> v;
            for (int e = 0; e < inst.universe; ++e)
                if (mask & (uint32_t{1} << e)) v.push_back(e);
            return IndexSet(std::move(v));
        };
        MetaConstraint p = inst.domain ? MetaConstraint::exactly_one(to_indexset(inst.domain))
                                       : MetaConstraint::trivially_true();
        HittingSetInstance incremental(IndexSet::range(inst.universe), inst.weights, p);

        bool instance_ok = true;
        for (size_t k = 0; k <= inst.sets.size(); ++k) {
            if (k > 0) incremental.add_set(to_indexset(inst.sets[k - 1]));
            auto inc = incremental.solve();

            HittingSetInstance fresh(IndexSet::range(inst.universe), inst.weights, p);
            for (size_t j = 0; j < k; ++j) fresh.add_set(to_indexset(inst.sets[j]));
            auto fr = fresh.solve();
            bool same = inc.has_value() == fr.has_value() &&
                        (!inc || (inc->cost == fr->cost && inc->set == fr->set));
            if (!same) {
                ++incremental_mismatches;
                instance_ok = false;
            }
        }

        MaskInstance final_inst = inst;
        auto expected = mask_brute(final_inst);
        auto got = incremental.solve();
        bool same = expected.has_value() == got.has_value() &&
                    (!expected || (expected->second == got->cost &&
                                   to_indexset(expected->first) == got->set));
        if (!same) {
            ++mismatches;
            instance_ok = false;
        }
        (void)instance_ok;
    }
    double secs = seconds_since(t0);
    bool ok = mismatches == 0 && incremental_mismatches == 0 && checked >= 500;
    std::ostringstream os;
    os << "hitting-set optimum and tie-break equal brute force on " << checked << " instances ("
       << mismatches << " final mismatches, " << incremental_mismatches
       << " incremental mismatches), " << secs << "s";
    report(4, ok, os.str());
}

// ---- criteria 5-9 over the shipped puzzles --------------------------------

std::vector<SequenceConfig> equivalence_configs() {
    std::vector<SequenceConfig> out;
    for (auto algo : {StepAlgorithm::OcusStep, StepAlgorithm::OusBoundedPerLiteral}) {
        for (auto incr : {Incrementality::NoneMode, Incrementality::SsCaching,
                          Incrementality::SharedIncrementalHs,
                          Incrementality::PerLiteralIncrementalHs}) {
            if (incr == Incrementality::PerLiteralIncrementalHs &&
                algo != StepAlgorithm::OusBoundedPerLiteral)
                continue;
            for (auto grow : {GrowStrategy::maxsat(MaxSatDomain::Actual, SoftScheme::Unif),
                              GrowStrategy::maxsat(MaxSatDomain::Full, SoftScheme::Unif)}) {
                SequenceConfig cfg;
                cfg.step_algorithm = algo;
                cfg.incrementality = incr;
                cfg.grow = grow;
                out.push_back(cfg);
            }
        }
    }
    return out;
}

struct PuzzleRuns {
    // per puzzle: all equivalence-config sequences plus the MUS baseline
    std::vector<std::vector<ExplanationSequence>> config_runs;
    std::vector<ExplanationSequence> mus_runs;
};

void criterion5(const std::vector<Puzzle>& puzzles, PuzzleRuns& runs) {
    bool ok = true;
    std::string detail;
    auto configs = equivalence_configs();
    for (const auto& puzzle : puzzles) {
        std::vector<ExplanationSequence> seqs;
        for (const auto& cfg : configs) seqs.push_back(explain_full(puzzle.problem, cfg));
        const ExplanationSequence& ref = seqs.front();
        for (size_t c = 1; c < seqs.size(); ++c) {
            const auto& seq = seqs[c];
            bool same = seq.steps.size() == ref.steps.size() && seq.total_cost == ref.total_cost;
            if (same)
                for (size_t k = 0; k < seq.steps.size(); ++k)
                    same = same && seq.steps[k].cost == ref.steps[k].cost &&
                           seq.steps[k].derived == ref.steps[k].derived;
            if (!same) {
                ok = false;
                detail += " " + puzzle.name + "/" + configs[c].label() + " diverges;";
            }
        }
        runs.config_runs.push_back(std::move(seqs));
    }
    std::ostringstream os;
    os << configs.size() << " step/incrementality/grow configurations agree on per-step costs "
       << "and totals on every sample puzzle" << detail;
    report(5, ok, os.str());
}

void criterion6(const std::vector<Puzzle>& puzzles, PuzzleRuns& runs) {
    bool ok = true;
    bool strict_somewhere = false;
    std::string detail;
    for (const auto& puzzle : puzzles) {
        SequenceConfig mus_cfg;
        mus_cfg.step_algorithm = StepAlgorithm::MusBaseline;
        mus_cfg.incrementality = Incrementality::NoneMode;
        Explainer mus_engine(puzzle.problem, mus_cfg);

        SequenceConfig opt_cfg;  // optimal comparator at the same interpretations
        opt_cfg.step_algorithm = StepAlgorithm::OcusStep;
        opt_cfg.incrementality = Incrementality::SharedIncrementalHs;
        Explainer opt_engine(puzzle.problem, opt_cfg);

        ExplanationSequence mus_seq;
        Interpretation interp = puzzle.problem.initial;
        while (!(interp == mus_engine.target())) {
            ExplanationStep mus_step = mus_engine.step(interp);
            ExplanationStep opt_step = opt_engine.step(interp);
            if (mus_step.cost < opt_step.cost) {
                ok = false;
                detail += " " + puzzle.name + " beats the optimum;";
            }
            if (mus_step.cost > opt_step.cost) strict_somewhere = true;
            mus_seq.total_cost += mus_step.cost;
            for (Lit l : mus_step.derived.literals()) interp.insert(l);
            mus_seq.steps.push_back(std::move(mus_step));
        }
        mus_seq.reached = interp;
        runs.mus_runs.push_back(std::move(mus_seq));
    }
    if (!strict_somewhere) {
        ok = false;
        detail += " no strict gap on any puzzle;";
    }
    report(6, ok,
           "deletion-MUS step cost dominates the optimal step cost at every step, strictly "
           "somewhere" +
               detail);
}

void criterion7(const std::vector<Puzzle>& puzzles, const PuzzleRuns& runs) {
    bool ok = true;
    std::string detail;
    for (size_t i = 0; i < puzzles.size(); ++i) {
        const auto& problem = puzzles[i].problem;
        Interpretation target = consequences(problem.constraints, problem.initial);
        std::vector<const ExplanationSequence*> seqs;
        for (const auto& seq : runs.config_runs[i]) seqs.push_back(&seq);
        seqs.push_back(&runs.mus_runs[i]);
        for (const auto* seq : seqs) {
            VerifyReport rep = verify_sequence(problem, *seq);
            if (!rep.valid) {
                ok = false;
                detail += " " + puzzles[i].name + ": " + rep.message + ";";
            }
            Interpretation covered = problem.initial;
            bool dup = false;
            for (const auto& st : seq->steps)
                for (Lit l : st.derived.literals()) {
                    if (covered.contains(l)) dup = true;
                    covered.insert(l);
                }
            if (dup || !(covered == target)) {
                ok = false;
                detail += " " + puzzles[i].name + ": derived union mismatch;";
            }
        }
    }
    report(7, ok,
           "every generated sequence passes independent verification and derives exactly the "
           "consequences" +
               detail);
}

void criterion8(const std::vector<Puzzle>& puzzles) {
    auto t0 = std::chrono::steady_clock::now();
    const Puzzle& largest = puzzles.back();
    const double cap_ms = 90000;

    auto run_config = [&](const GrowStrategy& grow) {
        SequenceConfig cfg;
        cfg.step_algorithm = StepAlgorithm::OcusStep;
        cfg.incrementality = Incrementality::SharedIncrementalHs;
        cfg.grow = grow;
        std::vector<double> times;
        for (int r = 0; r < 3; ++r) {
            auto s0 = std::chrono::steady_clock::now();
            ExplanationSequence seq = explain_full(largest.problem, cfg, cap_ms);
            double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - s0)
                            .count();
            // timeout sentinel: the configured cap stands in for the
            // unfinished remainder
            times.push_back(seq.timed_out ? cap_ms : ms);
        }
        std::sort(times.begin(), times.end());
        return times[1];  // median of three
    };

    double max_ms = run_config(GrowStrategy::maxsat(MaxSatDomain::Actual, SoftScheme::Unif));
    double nogrow_ms = run_config(GrowStrategy::no_grow());

    double secs = seconds_since(t0);
    bool ok = max_ms < nogrow_ms && secs < 600;
    std::ostringstream os;
    os << "on " << largest.name << " the maxsat-actual-unif grow (median " << max_ms
       << "ms) beats no-grow (median " << nogrow_ms << "ms, capped at " << cap_ms << "ms), suite "
       << secs << "s";
    report(8, ok, os.str());
}

void criterion9(const std::vector<Puzzle>& puzzles) {
    bool ok = true;
    std::string detail;

    // bounded-OUS short-circuits: at least one ExceedsBound per
    // multi-literal step on average
    for (const auto& puzzle : puzzles) {
        SequenceConfig cfg;
        cfg.step_algorithm = StepAlgorithm::OusBoundedPerLiteral;
        cfg.incrementality = Incrementality::PerLiteralIncrementalHs;
        Explainer engine(puzzle.problem, cfg);
        Interpretation interp = puzzle.problem.initial;
        long prunes = 0, multi_steps = 0;
        while (!(interp == engine.target())) {
            size_t remaining = engine.target().minus(interp).size();
            ExplanationStep st = engine.step(interp);
            if (remaining > 1) {
                ++multi_steps;
                prunes += st.exceeds_bound_prunes;
            }
            for (Lit l : st.derived.literals()) interp.insert(l);
        }
        if (multi_steps > 0 && prunes < multi_steps) {
            ok = false;
            detail += " " + puzzle.name + " prunes " + std::to_string(prunes) + "/" +
                      std::to_string(multi_steps) + ";";
        }
    }

    // bound safety on the 2x2: stored upper bounds never undercut the
    // brute-force per-literal optimum (independent enumeration)
    {
        const Puzzle& small = puzzles.front();
        SequenceConfig cfg;
        cfg.step_algorithm = StepAlgorithm::OusBoundedPerLiteral;
        cfg.incrementality = Incrementality::PerLiteralIncrementalHs;
        Explainer engine(small.problem, cfg);
        ExplanationSpace space = build_explanation_space(small.problem, engine.target());
        Interpretation interp = small.problem.initial;
        while (!(interp == engine.target())) {
            ExplanationStep st = engine.step(interp);
            for (const auto& [lit, bound] : engine.literal_bounds()) {
                if (interp.contains(lit)) continue;
                // assemble the literal's formula over the active indices
                IndexSet active = space.active_for_literal(interp, lit);
                CnfFormula sub;
                std::vector<int> dom;
                for (int i : active) {
                    int idx = sub.add_clause(space.formula.clause(i), space.formula.weight(i),
                                             space.formula.group(i));
                    if (space.formula.group(i) == ClauseGroup::NegatedTarget) dom.push_back(idx);
                }
                sub.set_atom_count(space.formula.atom_count());
                auto opt = brute_optimal_constrained_cost(sub, IndexSet(dom));
                if (opt && bound < *opt) {
                    ok = false;
                    detail += " 2x2 bound undercuts optimum for literal " +
                              std::to_string(lit.code()) + ";";
                }
            }
            for (Lit l : st.derived.literals()) interp.insert(l);
        }
    }

    // bound safety on the 3x3 against the exact engine (exhaustive
    // enumeration is out of reach at ~130 clauses)
    {
        const Puzzle& mid = puzzles[1];
        SequenceConfig cfg;
        cfg.step_algorithm = StepAlgorithm::OusBoundedPerLiteral;
        cfg.incrementality = Incrementality::PerLiteralIncrementalHs;
        Explainer engine(mid.problem, cfg);
        ExplanationSpace space = build_explanation_space(mid.problem, engine.target());
        SatSolver solver(space.formula);
        Interpretation interp = mid.problem.initial;
        while (!(interp == engine.target())) {
            ExplanationStep st = engine.step(interp);
            for (const auto& [lit, bound] : engine.literal_bounds()) {
                if (interp.contains(lit)) continue;
                HittingSetInstance hs = HittingSetInstance::for_formula(
                    space.formula, MetaConstraint::trivially_true());
                hs.set_active(space.active_for_literal(interp, lit));
                SatSubsetCache cache;
                OcusParams params{GrowStrategy::maxsat(MaxSatDomain::Actual, SoftScheme::Unif),
                                  PolarityHint::from_interpretation(engine.target()),
                                  space.actual_domain_for(interp), nullptr};
                OcusResult res = ous_bounded(space.formula, hs, cache, solver, params,
                                             std::numeric_limits<Cost>::max() / 8);
                if (res.kind != OcusResult::Kind::Found || bound < res.cost) {
                    ok = false;
                    detail += " 3x3 bound undercuts optimum;";
                }
            }
            for (Lit l : st.derived.literals()) interp.insert(l);
        }
    }

    report(9, ok,
           "bounded-OUS short-circuits occur on average and per-literal bounds never undercut "
           "the optima" +
               detail);
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    try {
        criterion1();
        criterion2();
        criterion3();
        criterion4();

        std::vector<Puzzle> puzzles = load_puzzles();
        PuzzleRuns runs;
        criterion5(puzzles, runs);
        criterion6(puzzles, runs);
        criterion7(puzzles, runs);
        criterion8(puzzles);
        criterion9(puzzles);
    } catch (const std::exception& e) {
        std::cout << "acceptance suite aborted: " << e.what() << std::endl;
        return 2;
    }
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << " ("
              << seconds_since(t0) << "s total)" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
