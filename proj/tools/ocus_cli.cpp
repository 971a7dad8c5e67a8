// Command-line front end: single OCUS extractions, full explanation
// sequences with verification, and the benchmark matrix with CSV
// output.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ocus/core.hpp"
#include "ocus/dimacs.hpp"
#include "ocus/explain.hpp"
#include "ocus/hitting_set.hpp"
#include "ocus/ocus.hpp"
#include "ocus/problem.hpp"
#include "ocus/puzzle.hpp"
#include "ocus/subsets.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    int v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) throw std::runtime_error("cannot parse integer list '" + text + "'");
    return out;
}

ocus::GrowStrategy grow_from_flags(const std::string& grow, const std::string& scheme_name) {
    ocus::SoftScheme scheme;
    if (scheme_name == "unif")
        scheme = ocus::SoftScheme::Unif;
    else if (scheme_name == "pos")
        scheme = ocus::SoftScheme::Pos;
    else if (scheme_name == "inv")
        scheme = ocus::SoftScheme::Inv;
    else
        throw std::runtime_error("unknown grow weights '" + scheme_name +
                                 "' (expected unif|pos|inv)");
    if (grow == "none") return ocus::GrowStrategy::no_grow();
    if (grow == "model") return ocus::GrowStrategy::model_extension();
    if (grow == "greedy") return ocus::GrowStrategy::sat_loop_greedy();
    if (grow == "max:full") return ocus::GrowStrategy::maxsat(ocus::MaxSatDomain::Full, scheme);
    if (grow == "max:actual") return ocus::GrowStrategy::maxsat(ocus::MaxSatDomain::Actual, scheme);
    throw std::runtime_error("unknown grow strategy '" + grow +
                             "' (expected none|model|greedy|max:full|max:actual)");
}

const std::vector<std::string>& valid_config_labels() {
    static const std::vector<std::string> labels = [] {
        std::vector<std::string> out{"mus"};
        const char* algos[] = {"ocus", "ousb"};
        const char* incrs[] = {"none", "ss", "shared", "perlit"};
        const char* grows[] = {"nogrow",       "model",        "greedy",
                               "max-full-unif", "max-full-pos", "max-full-inv",
                               "max-actual-unif", "max-actual-pos", "max-actual-inv"};
        for (const char* a : algos)
            for (const char* i : incrs) {
                if (std::string(i) == "perlit" && std::string(a) != "ousb") continue;
                for (const char* g : grows)
                    out.push_back(std::string(a) + "-" + i + ":" + g);
            }
        return out;
    }();
    return labels;
}

ocus::SequenceConfig config_from_label(const std::string& label) {
    ocus::SequenceConfig cfg;
    if (label == "mus") {
        cfg.step_algorithm = ocus::StepAlgorithm::MusBaseline;
        cfg.incrementality = ocus::Incrementality::NoneMode;
        return cfg;
    }
    auto colon = label.find(':');
    std::string head = label.substr(0, colon);
    std::string grow = colon == std::string::npos ? "max-actual-unif" : label.substr(colon + 1);
    auto dash = head.find('-');
    if (dash == std::string::npos) throw std::runtime_error("bad config label '" + label + "'");
    std::string algo = head.substr(0, dash);
    std::string incr = head.substr(dash + 1);
    if (algo == "ocus")
        cfg.step_algorithm = ocus::StepAlgorithm::OcusStep;
    else if (algo == "ousb")
        cfg.step_algorithm = ocus::StepAlgorithm::OusBoundedPerLiteral;
    else
        throw std::runtime_error("bad config label '" + label + "'");
    if (incr == "none")
        cfg.incrementality = ocus::Incrementality::NoneMode;
    else if (incr == "ss")
        cfg.incrementality = ocus::Incrementality::SsCaching;
    else if (incr == "shared")
        cfg.incrementality = ocus::Incrementality::SharedIncrementalHs;
    else if (incr == "perlit")
        cfg.incrementality = ocus::Incrementality::PerLiteralIncrementalHs;
    else
        throw std::runtime_error("bad config label '" + label + "'");

    std::string g = grow;
    if (g == "nogrow") cfg.grow = ocus::GrowStrategy::no_grow();
    else if (g == "model") cfg.grow = ocus::GrowStrategy::model_extension();
    else if (g == "greedy") cfg.grow = ocus::GrowStrategy::sat_loop_greedy();
    else {
        ocus::MaxSatDomain dom;
        std::string rest;
        if (g.rfind("max-full-", 0) == 0) {
            dom = ocus::MaxSatDomain::Full;
            rest = g.substr(9);
        } else if (g.rfind("max-actual-", 0) == 0) {
            dom = ocus::MaxSatDomain::Actual;
            rest = g.substr(11);
        } else {
            throw std::runtime_error("bad grow in config label '" + label + "'");
        }
        ocus::SoftScheme scheme;
        if (rest == "unif") scheme = ocus::SoftScheme::Unif;
        else if (rest == "pos") scheme = ocus::SoftScheme::Pos;
        else if (rest == "inv") scheme = ocus::SoftScheme::Inv;
        else throw std::runtime_error("bad grow scheme in config label '" + label + "'");
        cfg.grow = ocus::GrowStrategy::maxsat(dom, scheme);
    }
    cfg.validate();
    return cfg;
}

nlohmann::ordered_json trace_record_json(const ocus::OcusTraceRecord& r) {
    nlohmann::ordered_json js;
    js["iteration"] = r.iteration;
    js["hitting_set"] = r.hitting_set.indices();
    js["cost"] = r.cost;
    js["verdict"] = r.verdict;
    js["grown"] = r.grown.indices();
    js["added_to_hit"] = r.added_to_hit.indices();
    return js;
}

void print_subset_labels(const ocus::IndexSet& subset) {
    std::cout << "subset";
    for (int i : subset) std::cout << " c" << (i + 1);
    std::cout << "\n";
}

ocus::ExplanationProblem load_problem_or_puzzle(const std::string& path) {
    std::string text = read_file(path);
    try {
        return ocus::parse_problem(text);
    } catch (const ocus::ProblemError& problem_err) {
        try {
            return ocus::encode(ocus::parse_puzzle(text));
        } catch (const ocus::PuzzleError&) {
            throw problem_err;  // report the problem-format error
        }
    }
}

int cmd_ocus(const std::string& problem_path, const std::string& interpretation,
             const std::string& formula_path, const std::string& exactly_one,
             const std::string& grow, const std::string& grow_weights, bool trace, bool dump_hs) {
    ocus::GrowStrategy strategy = grow_from_flags(grow, grow_weights);
    ocus::OcusTrace trace_records;

    ocus::CnfFormula formula;
    ocus::IndexSet actual_domain;
    ocus::PolarityHint hint;
    std::optional<ocus::MetaConstraint> constraint;

    if (!problem_path.empty()) {
        ocus::ExplanationProblem problem = load_problem_or_puzzle(problem_path);
        ocus::Interpretation interp;
        for (int code : parse_int_list(interpretation)) interp.insert(ocus::Lit(code));
        if (interp.empty()) interp = problem.initial;
        if (!problem.initial.subset_of(interp))
            throw std::runtime_error("--interpretation must contain the problem's initial facts");
        if (!problem.target) problem.target = ocus::consequences(problem.constraints, problem.initial);
        ocus::AssembledOcus assembled = ocus::assemble_ocus_formula(problem, interp);
        formula = std::move(assembled.formula);
        constraint = ocus::MetaConstraint::exactly_one(assembled.negation_domain);
        hint = ocus::PolarityHint::from_interpretation(*problem.target);
        std::vector<int> dom;
        for (int i = 0; i < formula.size(); ++i)
            if (formula.group(i) != ocus::ClauseGroup::NegatedTarget) dom.push_back(i);
        actual_domain = ocus::IndexSet(std::move(dom));
    } else if (!formula_path.empty()) {
        formula = ocus::parse_dimacs(read_file(formula_path));
        if (!exactly_one.empty()) {
            std::vector<int> idx = parse_int_list(exactly_one);
            constraint = ocus::MetaConstraint::exactly_one(ocus::IndexSet(std::move(idx)));
        } else {
            constraint = ocus::MetaConstraint::trivially_true();
        }
        actual_domain = formula.all_indices();
    } else {
        throw std::runtime_error("need --problem or --formula");
    }

    ocus::HittingSetInstance hs = ocus::HittingSetInstance::for_formula(formula, *constraint);
    ocus::SatSubsetCache cache;
    ocus::SatSolver solver(formula);
    ocus::OcusParams params{strategy, hint, actual_domain, trace ? &trace_records : nullptr};
    ocus::OcusResult res = ocus::ocus(formula, hs, cache, solver, params);

    if (trace)
        for (const auto& r : trace_records) std::cout << trace_record_json(r).dump() << "\n";
    if (dump_hs) std::cout << hs.dump();

    if (res.kind == ocus::OcusResult::Kind::Found) {
        std::cout << "cost " << res.cost << "\n";
        print_subset_labels(res.subset);
        return 0;
    }
    std::cout << "no unsatisfiable subset\n";
    return 1;
}

int cmd_explain(const std::string& problem_path, const std::string& algo, const std::string& incr,
                const std::string& grow, const std::string& grow_weights,
                const std::string& out_path) {
    ocus::ExplanationProblem problem = load_problem_or_puzzle(problem_path);
    ocus::SequenceConfig cfg;
    if (algo == "mus") cfg.step_algorithm = ocus::StepAlgorithm::MusBaseline;
    else if (algo == "ocus") cfg.step_algorithm = ocus::StepAlgorithm::OcusStep;
    else if (algo == "ousb") cfg.step_algorithm = ocus::StepAlgorithm::OusBoundedPerLiteral;
    else throw std::runtime_error("unknown algorithm '" + algo + "' (expected mus|ocus|ousb)");
    if (incr == "none") cfg.incrementality = ocus::Incrementality::NoneMode;
    else if (incr == "ss") cfg.incrementality = ocus::Incrementality::SsCaching;
    else if (incr == "shared") cfg.incrementality = ocus::Incrementality::SharedIncrementalHs;
    else if (incr == "perlit") cfg.incrementality = ocus::Incrementality::PerLiteralIncrementalHs;
    else throw std::runtime_error("unknown incrementality '" + incr +
                                  "' (expected none|ss|shared|perlit)");
    cfg.grow = grow_from_flags(grow, grow_weights);
    cfg.validate();

    ocus::ExplanationSequence seq = ocus::explain_full(problem, cfg);
    ocus::VerifyReport report = ocus::verify_sequence(problem, seq);
    if (!report.valid) {
        std::cerr << "internal error: generated sequence failed verification: " << report.message
                  << "\n";
        return 1;
    }
    nlohmann::ordered_json doc =
        ocus::sequence_to_json(problem, seq, problem_path, cfg.label());
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << doc.dump(2) << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    std::cout << "steps " << seq.steps.size() << " total_cost " << seq.total_cost << " wall_ms "
              << seq.total_ms << "\n";
    return 0;
}

int cmd_bench(const std::string& problems_dir, const std::string& matrix, double timeout_ms) {
    namespace fs = std::filesystem;
    std::vector<std::string> labels;
    {
        std::istringstream is(matrix);
        std::string label;
        while (std::getline(is, label, ',')) {
            if (label.empty()) continue;
            const auto& valid = valid_config_labels();
            if (std::find(valid.begin(), valid.end(), label) == valid.end()) {
                std::ostringstream os;
                os << "unknown config '" << label << "'; valid labels:";
                for (const auto& v : valid) os << "\n  " << v;
                throw std::runtime_error(os.str());
            }
            labels.push_back(label);
        }
    }
    if (labels.empty()) throw std::runtime_error("--matrix names no configurations");
    if (!fs::is_directory(problems_dir))
        throw std::runtime_error("'" + problems_dir + "' is not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(problems_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .json instances in '" + problems_dir + "'");

    std::cout << "instance,config,step,cost,cum_ms,explained\n";
    int ran = 0;
    for (const auto& file : files) {
        ocus::ExplanationProblem problem;
        try {
            problem = load_problem_or_puzzle(file);
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping '" << file << "': " << e.what() << "\n";
            continue;
        }
        ++ran;
        std::string instance = fs::path(file).stem().string();
        for (const auto& label : labels) {
            ocus::SequenceConfig cfg = config_from_label(label);
            ocus::ExplanationSequence seq = ocus::explain_full(problem, cfg, timeout_ms);
            double cum = 0;
            size_t explained = 0;
            for (size_t k = 0; k < seq.steps.size(); ++k) {
                cum += seq.steps[k].wall_ms;
                explained += seq.steps[k].derived.size();
                std::cout << instance << ',' << label << ',' << k << ',' << seq.steps[k].cost
                          << ',' << cum << ',' << explained << "\n";
            }
            if (seq.timed_out) {
                // sentinel row: the configured timeout stands in for the
                // unfinished remainder
                std::cout << instance << ',' << label << ",-1,-1," << timeout_ms << ','
                          << explained << "\n";
            }
        }
    }
    return ran > 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cost-optimal constrained unsatisfiable subsets and step-optimal explanations"};
    app.require_subcommand(1);

    auto* ocus_cmd = app.add_subcommand("ocus", "compute one optimal constrained core");
    std::string problem_path, interpretation, formula_path, exactly_one;
    std::string grow = "max:actual", grow_weights = "unif";
    bool trace = false, dump_hs = false;
    ocus_cmd->add_option("--problem", problem_path, "explanation problem or puzzle JSON");
    ocus_cmd->add_option("--interpretation", interpretation,
                         "current interpretation literals, e.g. '1 -2' (default: initial facts)");
    ocus_cmd->add_option("--formula", formula_path, "DIMACS CNF input");
    ocus_cmd->add_option("--exactly-one", exactly_one,
                         "0-based clause indices for the exactly-one constraint (formula mode)");
    ocus_cmd->add_option("--grow", grow, "none|model|greedy|max:full|max:actual");
    ocus_cmd->add_option("--grow-weights", grow_weights, "unif|pos|inv");
    ocus_cmd->add_flag("--trace", trace, "print one JSON record per loop iteration");
    ocus_cmd->add_flag("--dump-hs", dump_hs, "dump stored sets-to-hit after solving");

    auto* explain_cmd = app.add_subcommand("explain", "generate a full explanation sequence");
    std::string algo = "ocus", incr = "none", out_path;
    std::string e_problem, e_grow = "max:actual", e_grow_weights = "unif";
    explain_cmd->add_option("--problem", e_problem, "explanation problem or puzzle JSON")
        ->required();
    explain_cmd->add_option("--algo", algo, "mus|ocus|ousb");
    explain_cmd->add_option("--incr", incr, "none|ss|shared|perlit");
    explain_cmd->add_option("--grow", e_grow, "none|model|greedy|max:full|max:actual");
    explain_cmd->add_option("--grow-weights", e_grow_weights, "unif|pos|inv");
    explain_cmd->add_option("--out", out_path, "write the sequence document here");

    auto* bench_cmd = app.add_subcommand("bench", "run the benchmark matrix, CSV to stdout");
    std::string problems_dir, matrix;
    double timeout_ms = 0;
    if (const char* env = std::getenv("OCUS_BENCH_TIMEOUT_MS")) timeout_ms = std::atof(env);
    if (timeout_ms <= 0) timeout_ms = 120000;
    bench_cmd->add_option("--problems", problems_dir, "directory of instance JSON files")
        ->required();
    bench_cmd->add_option("--matrix", matrix, "comma-separated configuration labels")->required();
    bench_cmd->add_option("--timeout-ms", timeout_ms, "per-(instance,config) time limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (ocus_cmd->parsed())
            return cmd_ocus(problem_path, interpretation, formula_path, exactly_one, grow,
                            grow_weights, trace, dump_hs);
        if (explain_cmd->parsed())
            return cmd_explain(e_problem, algo, incr, e_grow, e_grow_weights, out_path);
        if (bench_cmd->parsed()) return cmd_bench(problems_dir, matrix, timeout_ms);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
