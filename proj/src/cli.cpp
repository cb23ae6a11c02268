#include "higman/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "higman/expmap.hpp"
#include "higman/gamma.hpp"
#include "higman/ncpoly.hpp"
#include "higman/rewrite.hpp"
#include "higman/selftest.hpp"
#include "higman/zappa.hpp"
#include "higman/zmod.hpp"

namespace higman {

namespace {

using nlohmann::json;

struct CommonOpts {
    std::uint32_t p = 3;
    std::uint32_t n = 2;
    std::uint64_t k = 4;
    std::uint64_t seed = 0;
    std::size_t cap = 200000;
    std::string format = "human";
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_pnk = true) {
    if (with_pnk) {
        cmd->add_option("--p", o.p, "prime p");
        cmd->add_option("--n", o.n, "exponent n of the modulus p^n");
        cmd->add_option("--k", o.k, "twist exponent k, p | k-1");
    }
    cmd->add_option("--seed", o.seed, "seed for randomized suites");
    cmd->add_option("--cap", o.cap, "element cap for enumerations");
    cmd->add_option("--format", o.format, "output format: human | structured")
        ->check(CLI::IsMember({"human", "structured"}));
    cmd->add_flag("--timings", o.timings, "include wall-clock timings in reports");
}

json base_report(const CommonOpts& o, const std::string& command) {
    return json{{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                {"command", command},
                {"config", {{"p", o.p}, {"n", o.n}, {"k", o.k}}},
                {"seed", o.seed},
                {"timings", nullptr}};
}

void finish_report(json& rep, const CommonOpts& o,
                   std::chrono::steady_clock::time_point t0, std::ostream& out) {
    if (o.timings) {
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        rep["timings"] = json{{"total_ms", ms}};
    }
    if (o.format == "structured") out << rep.dump(2) << "\n";
}

SearchBudget parse_budget(const std::string& text) {
    if (text.empty()) return SearchBudget{};
    SearchBudget b;
    if (text.back() == 's') {
        b.seconds = std::stod(text.substr(0, text.size() - 1));
    } else {
        b.nodes = std::stoull(text);
    }
    return b;
}

int cmd_relator(const CommonOpts& o, unsigned vars, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    Modulus mod = Modulus::make(o.p, o.n);
    RelatorSet rel = build_relators(mod, KExp::make(o.k, mod), vars);
    json rep = base_report(o, "relator");
    rep["result"] = {{"q0", rel.q0.str()}, {"relators", json::array()}};
    for (const auto& g : rel.g) rep["result"]["relators"].push_back(g.str());
    if (o.format == "human") {
        out << "Q0 (one variable, written in x0): " << rel.q0.str() << "\n";
        for (std::size_t i = 0; i < rel.g.size(); ++i)
            out << "g" << i << ": " << rel.g[i].str() << "\n";
    }
    finish_report(rep, o, t0, out);
    return 0;
}

int cmd_nf(const CommonOpts& o, unsigned vars, const std::string& poly_text,
           const std::string& direction, bool trace, std::uint64_t step_cap,
           std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    Modulus mod = Modulus::make(o.p, o.n);
    Direction dir = direction == "right" ? Direction::right : Direction::left;
    RewriteSystem sys = RewriteSystem::make(mod, KExp::make(o.k, mod), vars, dir);
    if (step_cap) sys.set_iteration_cap(step_cap);
    Poly f = Poly::parse(poly_text, mod, vars);
    ReduceStats stats;
    std::vector<StepTrace> steps;
    Poly nf = sys.normal_form(f, &stats, trace ? &steps : nullptr);

    json rep = base_report(o, "nf");
    rep["result"] = {{"input", f.str()},
                     {"normal_form", nf.str()},
                     {"steps", stats.steps},
                     {"measure_violations", stats.measure_violations},
                     {"direction", direction}};
    if (trace) {
        json tr = json::array();
        for (const auto& s : steps)
            tr.push_back({{"monomial", s.mono.str()},
                          {"coeff", s.coeff},
                          {"measure", {s.measure.torder, s.measure.nodd, s.measure.defect}},
                          {"rule", s.rule}});
        rep["result"]["trace"] = tr;
    }
    if (o.format == "human") {
        out << "normal form: " << nf.str() << "\n";
        out << "steps: " << stats.steps << "\n";
        if (trace)
            for (std::size_t i = 0; i < steps.size(); ++i)
                out << "  step " << i << ": " << steps[i].coeff << "*"
                    << steps[i].mono.str() << "  measure (" << steps[i].measure.torder
                    << "," << steps[i].measure.nodd << "," << steps[i].measure.defect
                    << ")  rule " << steps[i].rule << "\n";
    }
    finish_report(rep, o, t0, out);
    return 0;
}

int cmd_confluence(const CommonOpts& o, unsigned vars, unsigned degree,
                   std::uint64_t samples, unsigned sample_degree, unsigned strategies,
                   std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    Modulus mod = Modulus::make(o.p, o.n);
    RewriteSystem sys = RewriteSystem::make(mod, KExp::make(o.k, mod), vars);
    ConfluenceReport rep =
        check_confluence(sys, degree, samples, sample_degree, strategies, o.seed);

    json doc = base_report(o, "confluence");
    json failures = json::array();
    for (const auto& d : rep.divergences)
        failures.push_back({{"input", d.input},
                            {"site_a", d.site_a},
                            {"site_b", d.site_b},
                            {"nf_a", d.nf_a},
                            {"nf_b", d.nf_b}});
    doc["result"] = {{"words_checked", rep.words_checked},
                     {"site_pairs_checked", rep.site_pairs_checked},
                     {"random_words_checked", rep.random_words_checked},
                     {"random_reductions", rep.random_reductions},
                     {"divergences_found", rep.divergences_found},
                     {"divergences", failures},
                     {"steps", rep.stats.steps},
                     {"measure_violations", rep.stats.measure_violations}};
    if (o.format == "human") {
        out << "words checked: " << rep.words_checked << " exhaustive, "
            << rep.random_words_checked << " random\n"
            << "site pairs: " << rep.site_pairs_checked
            << ", random reductions: " << rep.random_reductions << "\n"
            << "steps: " << rep.stats.steps
            << ", measure violations: " << rep.stats.measure_violations << "\n"
            << "divergences: " << rep.divergences_found << "\n";
        for (const auto& d : rep.divergences)
            out << "  " << d.input << " | " << d.site_a << " vs " << d.site_b
                << " | " << d.nf_a << " != " << d.nf_b << "\n";
    }
    finish_report(doc, o, t0, out);
    return rep.divergences_found == 0 && rep.stats.measure_violations == 0 ? 0 : 1;
}

std::vector<GammaElement> pick_generators(const GammaContext& gc,
                                          const std::string& gens) {
    std::vector<GammaElement> out;
    std::stringstream ss(gens);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        unsigned i = static_cast<unsigned>(std::stoul(tok));
        out.push_back(gc.generator(i));
    }
    if (out.empty()) throw UsageError("no generators given");
    return out;
}

int cmd_gamma(const CommonOpts& o, const std::string& action, const std::string& gens,
              bool dump, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    GammaContext gc = GammaContext::make(o.p, o.n, o.k);
    json rep = base_report(o, "gamma " + action);
    int rc = 0;

    if (action == "enumerate") {
        if (dump) {
            auto elems = gc.enumerate(pick_generators(gc, gens), o.cap);
            rep["result"] = {{"generators", gens},
                             {"size", elems.size()},
                             {"elements", json::array()}};
            for (const auto& e : elems) rep["result"]["elements"].push_back(e.key());
            if (o.format == "human") {
                out << "subgroup size: " << elems.size() << " (generators " << gens
                    << ")\n";
                for (const auto& e : elems) out << "  " << e.key() << "\n";
            }
        } else {
            auto keys = gc.enumerate_key_set(pick_generators(gc, gens), o.cap);
            rep["result"] = {{"generators", gens}, {"size", keys.size()}};
            if (o.format == "human")
                out << "subgroup size: " << keys.size() << " (generators " << gens
                    << ")\n";
        }
    } else if (action == "zs-check") {
        ZsReport r = gc.zs_check(o.cap);
        rep["result"] = {{"size_s", r.size_s},
                         {"size_t", r.size_t_},
                         {"size_g", r.size_g},
                         {"intersection_trivial", r.intersection_trivial},
                         {"unique_factorization", r.unique_factorization}};
        if (o.format == "human")
            out << "|S| = " << r.size_s << ", |S~| = " << r.size_t_
                << ", |G| = " << r.size_g
                << ", trivial intersection: " << (r.intersection_trivial ? "yes" : "no")
                << ", unique factorization: " << (r.unique_factorization ? "yes" : "no")
                << "\n";
        if (!r.intersection_trivial || !r.unique_factorization) rc = 1;
    } else if (action == "jacobson-check") {
        JacobsonReport r = gc.jacobson_check(o.cap);
        rep["result"] = {{"free_size", r.free_size},
                         {"size_s", r.size_s},
                         {"equal", r.equal}};
        if (o.format == "human")
            out << "free 2-generator size: " << r.free_size << ", |S| = " << r.size_s
                << ", equal: " << (r.equal ? "yes" : "no") << "\n";
        if (!r.equal) rc = 1;
    } else if (action == "relcheck") {
        bool ok = gc.check_relators();
        rep["result"] = {{"relations_hold", ok}};
        if (o.format == "human")
            out << "defining relations hold: " << (ok ? "yes" : "no") << "\n";
        if (!ok) rc = 1;
    } else {
        throw UsageError("unknown gamma action '" + action + "'");
    }
    finish_report(rep, o, t0, out);
    return rc;
}

json verify_json(const VerifyReport& r) {
    return json{{"is_bijection", r.is_bijection},
                {"four_periodic", r.four_periodic},
                {"match_count", r.match_count},
                {"breakpoints", r.breakpoints},
                {"epsilon", {{"num", r.eps_num}, {"den", r.eps_den}}}};
}

void print_verify_human(const VerifyReport& r, std::ostream& out) {
    out << "bijection: " << (r.is_bijection ? "yes" : "no")
        << ", f^4 = id: " << (r.four_periodic ? "yes" : "no")
        << ", matches: " << r.match_count << "/" << r.eps_den
        << ", breakpoints: " << r.breakpoints << "\n";
}

int cmd_expmap(const CommonOpts& o, const std::string& action, std::uint64_t modulus,
               std::uint64_t oracle_cap, const std::string& strategy,
               const std::string& budget, const std::string& table_path,
               const std::string& out_path, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    json rep = base_report(o, "expmap " + action);
    rep["config"]["modulus"] = modulus;
    int rc = 0;

    auto dump_witness = [&](const CycleFunction& f) {
        if (out_path.empty()) return;
        std::ofstream os(out_path);
        if (!os) throw UsageError("cannot open " + out_path);
        write_csv(os, f);
    };

    if (action == "oracle") {
        OracleResult r = brute_oracle(modulus, o.k, oracle_cap);
        VerifyReport v = verify(r.witness);
        rep["result"] = {{"max_match", r.max_match},
                         {"tables_explored", r.tables_explored},
                         {"witness", verify_json(v)}};
        if (o.format == "human") {
            out << "exact maximum match count: " << r.max_match << " (over "
                << r.tables_explored << " tables with f^4 = id)\n";
            print_verify_human(v, out);
        }
        dump_witness(r.witness);
    } else if (action == "search") {
        SearchResult r = search_best(modulus, o.k, strategy_from_name(strategy),
                                     parse_budget(budget), o.seed);
        rep["result"] = {{"strategy", strategy},
                         {"match_count", r.report.match_count},
                         {"exhausted", r.exhausted},
                         {"budget_exceeded", r.budget_exceeded},
                         {"nodes_explored", r.nodes_explored},
                         {"discarded_non_bijections", r.discarded_non_bijections},
                         {"witness", verify_json(r.report)}};
        if (o.format == "human") {
            out << "best match count: " << r.report.match_count
                << (r.exhausted ? " (search exhausted: exact maximum)" : "")
                << (r.budget_exceeded ? " (budget exceeded: best so far)" : "") << "\n";
            print_verify_human(r.report, out);
        }
        dump_witness(r.best);
    } else if (action == "verify") {
        if (table_path.empty()) throw UsageError("verify needs --table <csv>");
        std::ifstream is(table_path);
        if (!is) throw UsageError("cannot open " + table_path);
        CycleFunction f = read_csv(is, modulus, o.k);
        VerifyReport v = verify(f);
        rep["result"] = verify_json(v);
        if (o.format == "human") print_verify_human(v, out);
        if (!v.is_bijection || !v.four_periodic) rc = 1;
    } else {
        throw UsageError("unknown expmap action '" + action + "'");
    }
    finish_report(rep, o, t0, out);
    return rc;
}

int cmd_selftest(const CommonOpts& o, const std::string& only, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    const char* p2_warning =
        "p = 2 is experimental; termination of the 4-variable rewriting "
        "system is not guaranteed and gamma checks are skipped";
    if (o.p == 2 && o.format == "human") out << "warning: " << p2_warning << "\n";
    AcceptanceOptions opts;
    opts.seed = o.seed ? o.seed : AcceptanceOptions{}.seed;
    std::stringstream ss(only);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) opts.only.push_back(tok);
    if (o.format == "human") opts.progress = &out;

    auto results = run_acceptance(opts);
    if (results.empty()) throw UsageError("no matching criteria for --only " + only);
    bool all = true;
    json rep = base_report(o, "selftest");
    rep["warnings"] = json::array();
    if (o.p == 2) rep["warnings"].push_back(p2_warning);
    rep["result"] = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        rep["result"].push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"passed", r.passed},
                                 {"detail", r.detail}});
    }
    if (o.format == "human")
        out << (all ? "selftest: all criteria passed\n" : "selftest: FAILURES\n");
    finish_report(rep, o, t0, out);
    return all ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"exact p-quotients of the Higman group H(k)", kToolName};
    app.require_subcommand(1);

    CommonOpts o;
    unsigned vars = 4;
    std::string poly_text, direction = "left", gens = "0,1,2,3";
    std::string action, strategy = "backtrack", budget, table_path, out_path, only;
    std::uint64_t modulus = 9, step_cap = 0, oracle_cap = 9;
    bool trace = false;

    CLI::App* relator = app.add_subcommand("relator", "print Q0 and the relators g_i");
    add_common(relator, o);
    relator->add_option("--vars", vars, "2 or 4 variables")->check(CLI::IsMember({2, 4}));

    CLI::App* nf = app.add_subcommand("nf", "normal form of a polynomial");
    add_common(nf, o);
    nf->add_option("--vars", vars, "2 or 4 variables")->check(CLI::IsMember({2, 4}));
    nf->add_option("--poly", poly_text, "polynomial text, e.g. \"x1.x0\"")->required();
    nf->add_option("--direction", direction, "left | right")
        ->check(CLI::IsMember({"left", "right"}));
    nf->add_option("--step-cap", step_cap, "iteration cap override");
    nf->add_flag("--trace", trace, "print the per-step measure trace");

    unsigned conf_degree = 4, conf_sample_degree = 8, conf_strategies = 4;
    std::uint64_t conf_samples = 1000;
    CLI::App* confluence =
        app.add_subcommand("confluence", "check unique normal forms");
    add_common(confluence, o);
    confluence->add_option("--vars", vars, "2 or 4 variables")
        ->check(CLI::IsMember({2, 4}));
    confluence->add_option("--degree", conf_degree, "exhaustive degree bound");
    confluence->add_option("--samples", conf_samples, "random monomial count");
    confluence->add_option("--sample-degree", conf_sample_degree,
                           "random monomial degree bound");
    confluence->add_option("--strategies", conf_strategies,
                           "randomized strategies per monomial");

    CLI::App* gamma = app.add_subcommand("gamma", "finite quotient group checks");
    add_common(gamma, o);
    gamma->add_option("action", action, "enumerate | zs-check | jacobson-check | relcheck")
        ->required();
    gamma->add_option("--gens", gens, "generator indices for enumerate, e.g. 0,2");
    bool dump = false;
    gamma->add_flag("--dump", dump, "list elements in the polynomial grammar");

    CLI::App* expmap = app.add_subcommand("expmap", "almost-exponential bijections");
    expmap->add_option("--seed", o.seed, "seed for randomized strategies");
    expmap->add_option("--format", o.format, "output format: human | structured")
        ->check(CLI::IsMember({"human", "structured"}));
    expmap->add_flag("--timings", o.timings, "include wall-clock timings in reports");
    expmap->add_option("action", action, "search | verify | oracle")->required();
    expmap->add_option("--modulus", modulus, "prime power p^m");
    expmap->add_option("--k", o.k, "multiplier k");
    expmap->add_option("--cap", oracle_cap, "exhaustion cap for the oracle");
    expmap->add_option("--strategy", strategy, "exhaustive | backtrack | block_ansatz");
    expmap->add_option("--budget", budget, "node count, or seconds as \"10s\"");
    expmap->add_option("--table", table_path, "csv table to verify");
    expmap->add_option("--out", out_path, "write the witness table as csv");

    CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    add_common(selftest, o);
    selftest->add_option("--only", only, "comma-separated criterion ids");

    std::vector<const char*> argv;
    argv.push_back(kToolName);
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::stringstream ss;
        int code = app.exit(e, ss, ss);
        (code == 0 ? out : err) << ss.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (relator->parsed()) return cmd_relator(o, vars, out);
        if (nf->parsed())
            return cmd_nf(o, vars, poly_text, direction, trace, step_cap, out);
        if (confluence->parsed())
            return cmd_confluence(o, vars, conf_degree, conf_samples,
                                  conf_sample_degree, conf_strategies, out);
        if (gamma->parsed()) return cmd_gamma(o, action, gens, dump, out);
        if (expmap->parsed())
            return cmd_expmap(o, action, modulus, oracle_cap, strategy, budget,
                              table_path, out_path, out);
        if (selftest->parsed()) return cmd_selftest(o, only, out);
        err << "error: no command\n";
        return 2;
    } catch (const CapExceeded& e) {
        err << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const IterationCapExceeded& e) {
        err << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace higman
