#include "higman/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <random>
#include <sstream>

#include "higman/expmap.hpp"
#include "higman/gamma.hpp"
#include "higman/ncpoly.hpp"
#include "higman/rewrite.hpp"
#include "higman/zappa.hpp"
#include "higman/zmod.hpp"

namespace higman {

namespace {

struct Cfg {
    std::uint32_t p;
    std::uint32_t n;
    std::uint64_t k;
};

// (p, k, n) = (3,4,2), (3,4,3), (3,7,2), (5,6,2), (5,11,2)
constexpr Cfg kConfigs[] = {
    {3, 2, 4}, {3, 3, 4}, {3, 2, 7}, {5, 2, 6}, {5, 2, 11}};

// Regression constants pinned from the first completed runs; later runs
// must reproduce them bit-exactly.
constexpr std::uint64_t kOracleMatchMod9 = 4;
constexpr std::uint64_t kOracleBreakpointsMod9 = 5;
constexpr std::uint64_t kBacktrackNodeBudget27 = 400'000'000;
constexpr std::uint64_t kBacktrackMatchMod27 = 18;

RewriteSystem make_system(const Cfg& c, unsigned vars = 4) {
    Modulus mod = Modulus::make(c.p, c.n);
    return RewriteSystem::make(mod, KExp::make(c.k, mod), vars);
}

Monomial random_monomial(std::mt19937_64& rng, unsigned vars, unsigned maxdeg) {
    unsigned d = 1 + static_cast<unsigned>(rng() % maxdeg);
    std::vector<Var> w(d);
    for (auto& v : w) v = static_cast<Var>(rng() % vars);
    return Monomial(std::move(w));
}

Poly random_poly(std::mt19937_64& rng, Modulus mod, unsigned vars,
                 unsigned max_terms, unsigned maxdeg) {
    Poly f(mod, vars);
    unsigned t = 1 + static_cast<unsigned>(rng() % max_terms);
    for (unsigned i = 0; i < t; ++i)
        f.add_term(random_monomial(rng, vars, maxdeg), 1 + rng() % (mod.pn - 1));
    return f;
}

// A random unit of the 1 + p*q shape with deg q <= maxdeg.
Poly random_unit(std::mt19937_64& rng, Modulus mod, unsigned vars, unsigned maxdeg) {
    Poly u = Poly::one(mod, vars);
    unsigned t = 1 + static_cast<unsigned>(rng() % 3);
    for (unsigned i = 0; i < t; ++i) {
        std::uint64_t c = (1 + rng() % (mod.pn - 1)) * mod.p % mod.pn;
        u.add_term(random_monomial(rng, vars, maxdeg), c);
    }
    return u;
}

// A nonzero polynomial all of whose monomials are (even block)(odd block).
Poly random_terminal_nonzero(std::mt19937_64& rng, const RewriteSystem& sys,
                             unsigned half_deg) {
    for (;;) {
        Poly f(sys.modulus(), sys.vars());
        unsigned t = 1 + static_cast<unsigned>(rng() % 4);
        for (unsigned i = 0; i < t; ++i) {
            std::vector<Var> w;
            unsigned de = static_cast<unsigned>(rng() % (half_deg + 1));
            unsigned dq = static_cast<unsigned>(rng() % (half_deg + 1));
            for (unsigned j = 0; j < de; ++j) w.push_back(static_cast<Var>(2 * (rng() % 2)));
            for (unsigned j = 0; j < dq; ++j) w.push_back(static_cast<Var>(2 * (rng() % 2) + 1));
            f.add_term(Monomial(std::move(w)), 1 + rng() % (sys.modulus().pn - 1));
        }
        if (!f.is_zero()) return f;
    }
}

WordElement random_word(std::mt19937_64& rng, const WordContext& ctx,
                        unsigned max_letters) {
    RawWord raw;
    unsigned t = 1 + static_cast<unsigned>(rng() % max_letters);
    const long long pn = static_cast<long long>(ctx.modulus().pn);
    for (unsigned i = 0; i < t; ++i)
        raw.emplace_back(static_cast<unsigned>(rng() % 4),
                         static_cast<long long>(rng() % (2 * pn)) - pn);
    return ctx.normalize(raw);
}

GroupWord random_group_word(std::mt19937_64& rng, unsigned gens, unsigned max_letters) {
    GroupWord w;
    unsigned t = 1 + static_cast<unsigned>(rng() % max_letters);
    for (unsigned i = 0; i < t; ++i) {
        long long e = static_cast<long long>(rng() % 5) - 2;
        w.push_back(GroupLetter{static_cast<Var>(rng() % gens), e});
    }
    return w;
}

GroupWord concat(const GroupWord& a, const GroupWord& b) {
    GroupWord r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

GroupWord inverse_word(const GroupWord& a) {
    GroupWord r;
    for (auto it = a.rbegin(); it != a.rend(); ++it)
        r.push_back(GroupLetter{it->gen, -it->exp});
    return r;
}

GroupWord commutator(const GroupWord& a, const GroupWord& b) {
    return concat(concat(inverse_word(a), inverse_word(b)), concat(a, b));
}

GroupWord power_word(const GroupWord& a, unsigned e) {
    GroupWord r;
    for (unsigned i = 0; i < e; ++i) r = concat(r, a);
    return r;
}

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << "FAILED: " << what;
        }
    }

    void note(const std::string& s) {
        if (detail.tellp() > 0) detail << "; ";
        detail << s;
    }
};

template <class Fn>
CriterionResult run_one(const std::string& id, const std::string& name, Fn&& fn) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
        fn(c);
        r.passed = c.ok;
    } catch (const std::exception& e) {
        r.passed = false;
        c.note(std::string("exception: ") + e.what());
    }
    r.detail = c.detail.str();
    r.ms = std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
               .count();
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    std::vector<CriterionResult> results;
    ReduceStats shared_stats;  // accumulated across criteria 1-3, read by 4

    auto wanted = [&](const std::string& id) {
        return opts.only.empty() ||
               std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end();
    };
    auto emit = [&](CriterionResult r) {
        if (opts.progress)
            *opts.progress << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " "
                           << r.name << (r.detail.empty() ? "" : " — " + r.detail)
                           << " (" << static_cast<long long>(r.ms) << " ms)\n";
        results.push_back(std::move(r));
    };

    if (wanted("1"))
        emit(run_one("1", "relator-soundness", [&](Check& c) {
            for (const Cfg& cfg : kConfigs) {
                // Construction itself asserts alpha_i = 2 and the
                // Q1 = x_i Q0(x_{i+1}) shape.
                RewriteSystem sys = make_system(cfg);
                for (std::size_t i = 0; i < sys.relators().g.size(); ++i)
                    c.expect(sys.normal_form(sys.relators().g[i], &shared_stats).is_zero(),
                             "NF(g" + std::to_string(i) + ") = 0 at p=" +
                                 std::to_string(cfg.p) + ",k=" + std::to_string(cfg.k) +
                                 ",n=" + std::to_string(cfg.n));
                // The two-variable system must build under the same shape
                // assertions.
                RewriteSystem two = make_system(cfg, 2);
                c.expect(two.normal_form(two.relators().g[0], &shared_stats).is_zero(),
                         "NF(g0) = 0 in the 2-variable system");
            }
            c.note("5 configs, 4-variable and 2-variable relators");
        }));

    if (wanted("2"))
        emit(run_one("2", "unit-power-collapse", [&](Check& c) {
            std::mt19937_64 rng(opts.seed + 2);
            for (const Cfg& cfg : kConfigs) {
                Modulus mod = Modulus::make(cfg.p, cfg.n);
                Poly one = Poly::one(mod, 4);
                for (unsigned i = 0; i < 4; ++i)
                    c.expect(pow_int(gen_unit(mod, 4, static_cast<Var>(i)), mod.pn) == one,
                             "(1+p·x" + std::to_string(i) + ")^(p^n) = 1 at " + mod.str());
                for (unsigned r = 0; r < 10; ++r) {
                    Poly u = random_unit(rng, mod, 4, 3);
                    c.expect(pow_int(u, mod.pn) == one,
                             "u^(p^n) = 1 for random unit at " + mod.str());
                }
            }
            c.note("4 generators x 5 configs + 50 random units");
        }));

    if (wanted("3"))
        emit(run_one("3", "confluence", [&](Check& c) {
            for (const Cfg& cfg : {kConfigs[0], kConfigs[1]}) {
                RewriteSystem sys = make_system(cfg);
                ConfluenceReport rep =
                    check_confluence(sys, 4, 1000, 8, 4, opts.seed + 3);
                shared_stats.steps += rep.stats.steps;
                shared_stats.measure_violations += rep.stats.measure_violations;
                c.expect(rep.words_checked == 340,
                         "exhaustive word count at n=" + std::to_string(cfg.n));
                c.expect(rep.divergences_found == 0,
                         "no divergences at n=" + std::to_string(cfg.n));
                c.note("n=" + std::to_string(cfg.n) + ": " +
                       std::to_string(rep.site_pairs_checked) + " site pairs, " +
                       std::to_string(rep.random_reductions) + " random reductions");
            }
        }));

    if (wanted("4"))
        emit(run_one("4", "termination-measure", [&](Check& c) {
            c.expect(shared_stats.steps > 0, "reduction steps were recorded");
            c.expect(shared_stats.measure_violations == 0, "zero measure violations");
            c.note(std::to_string(shared_stats.steps) + " steps, " +
                   std::to_string(shared_stats.measure_violations) + " violations");
        }));

    if (wanted("5"))
        emit(run_one("5", "normal-form-linearity", [&](Check& c) {
            RewriteSystem sys = make_system(kConfigs[0]);
            Modulus mod = sys.modulus();
            std::mt19937_64 rng(opts.seed + 5);
            for (unsigned i = 0; i < 500; ++i) {
                Poly f = random_poly(rng, mod, 4, 4, 5);
                Poly g = random_poly(rng, mod, 4, 4, 5);
                long long a = static_cast<long long>(rng() % mod.pn);
                long long b = static_cast<long long>(rng() % mod.pn);
                Poly lhs = sys.normal_form(f.scaled(a) + g.scaled(b));
                Poly rhs = sys.normal_form(f).scaled(a) + sys.normal_form(g).scaled(b);
                if (!(lhs == rhs)) {
                    c.expect(false, "NF(af+bg) = a NF(f) + b NF(g), sample " +
                                        std::to_string(i));
                    break;
                }
            }
            c.note("500 samples at (3,4,2)");
        }));

    if (wanted("6"))
        emit(run_one("6", "ideal-membership", [&](Check& c) {
            RewriteSystem sys = make_system(kConfigs[0]);
            Modulus mod = sys.modulus();
            std::mt19937_64 rng(opts.seed + 6);
            for (unsigned i = 0; i < 200; ++i) {
                Poly f(mod, 4);
                unsigned parts = 1 + static_cast<unsigned>(rng() % 3);
                for (unsigned j = 0; j < parts; ++j) {
                    const Poly& g = sys.relators().g[rng() % 4];
                    Monomial pre = rng() % 3 ? random_monomial(rng, 4, 2) : Monomial::one();
                    Monomial post = rng() % 3 ? random_monomial(rng, 4, 2) : Monomial::one();
                    f = f + mul_monomial_sandwich(pre, g, post)
                                .scaled(static_cast<long long>(1 + rng() % (mod.pn - 1)));
                }
                if (!sys.ideal_member(f)) {
                    c.expect(false, "random ideal combination reduces to 0, sample " +
                                        std::to_string(i));
                    break;
                }
            }
            for (unsigned i = 0; i < 200; ++i) {
                Poly f = random_terminal_nonzero(rng, sys, 2);
                if (sys.ideal_member(f)) {
                    c.expect(false, "terminal nonzero rejected, sample " + std::to_string(i));
                    break;
                }
            }
            c.note("200 members + 200 non-members at (3,4,2)");
        }));

    if (wanted("7"))
        emit(run_one("7", "zappa-szep-factorization", [&](Check& c) {
            GammaContext g2 = GammaContext::make(3, 2, 4);
            ZsReport r2 = g2.zs_check(200);
            c.expect(r2.size_s == 9 && r2.size_t_ == 9 && r2.size_g == 81,
                     "|S| = |S~| = 9, |G| = 81 at (3,4,2)");
            c.expect(r2.intersection_trivial, "S ∩ S~ = {1} at (3,4,2)");
            c.expect(r2.unique_factorization, "unique factorization at (3,4,2)");

            GammaContext g3 = GammaContext::make(3, 3, 4);
            ZsReport r3 = g3.zs_check(70000);
            JacobsonReport j3 = g3.jacobson_check(70000);
            c.expect(r3.size_g == r3.size_s * r3.size_t_, "|G| = |S|·|S~| at (3,4,3)");
            c.expect(j3.equal && j3.size_s == r3.size_s,
                     "|S| matches the free 2-generator enumeration at (3,4,3)");
            c.expect(r3.intersection_trivial && r3.unique_factorization,
                     "flags at (3,4,3)");
            c.note("(3,4,3): |S|=" + std::to_string(r3.size_s) +
                   ", |G|=" + std::to_string(r3.size_g));
        }));

    if (wanted("8"))
        emit(run_one("8", "word-level-compatibility", [&](Check& c) {
            WordContext ctx = WordContext::make(3, 2, 4);
            GammaContext gc = GammaContext::make(3, 2, 4);
            std::mt19937_64 rng(opts.seed + 8);
            for (unsigned i = 0; i < 1000; ++i) {
                WordElement x = random_word(rng, ctx, 5);
                WordElement y = random_word(rng, ctx, 5);
                if (!(ctx.hom_to_gamma(ctx.mul(x, y), gc) ==
                      gc.mul(ctx.hom_to_gamma(x, gc), ctx.hom_to_gamma(y, gc)))) {
                    c.expect(false, "hom(xy) = hom(x)hom(y), sample " + std::to_string(i));
                    break;
                }
            }
            for (unsigned i = 0; i < 1000; ++i) {
                WordElement x = random_word(rng, ctx, 4);
                WordElement y = random_word(rng, ctx, 4);
                WordElement z = random_word(rng, ctx, 4);
                if (!(ctx.mul(ctx.mul(x, y), z) == ctx.mul(x, ctx.mul(y, z)))) {
                    c.expect(false, "associativity, sample " + std::to_string(i));
                    break;
                }
            }
            for (unsigned i = 0; i < 4; ++i) {
                unsigned j = (i + 1) % 4;
                WordElement lhs = ctx.normalize({{j, 1}, {i, 1}});
                WordElement rhs = ctx.normalize({{i, 1}, {j, 4}});
                c.expect(lhs == rhs, "relation a" + std::to_string(j) + " a" +
                                         std::to_string(i) + " under normalize");
                c.expect(ctx.hom_to_gamma(lhs, gc) == ctx.hom_to_gamma(rhs, gc),
                         "relation under hom");
            }
            c.note("1000 pairs + 1000 triples + 4 relations at (3,4,2)");
        }));

    if (wanted("9"))
        emit(run_one("9", "magnus-jacobson", [&](Check& c) {
            GroupWord a0{{0, 1}}, a1{{1, 1}};
            IntPoly m = magnus_expand(commutator(a0, a1), 2, 2);
            IntPoly want(2, 2);
            want.add_term(Monomial::one(), 1);
            want.add_term(Monomial::var(0) * Monomial::var(1), 1);
            want.add_term(Monomial::var(1) * Monomial::var(0), -1);
            c.expect(m == want, "magnus([a0,a1], 2) = 1 + x0x1 - x1x0");

            c.expect(p_class(a0, 3, 6, 2) == 1, "p_class(a0) = 1");
            c.expect(p_class(power_word(a0, 3), 3, 6, 2) == 2, "p_class(a0^3) = 2");
            c.expect(p_class(commutator(a0, a1), 3, 6, 2) == 2, "p_class([a0,a1]) = 2");
            c.expect(p_class(commutator(commutator(a0, a1), a1), 3, 6, 2) == 3,
                     "p_class([[a0,a1],a1]) = 3");

            std::mt19937_64 rng(opts.seed + 9);
            const unsigned nmax = 4;
            unsigned samples = 0;
            for (unsigned i = 0; i < 100; ++i) {
                std::uint32_t p = i % 2 ? 3 : 5;
                GroupWord w = random_group_word(rng, 2, 3);
                GroupWord v = random_group_word(rng, 2, 3);
                unsigned cw = p_class(w, p, nmax, 2);
                unsigned cv = p_class(v, p, nmax, 2);
                bool ok = p_class(concat(w, v), p, nmax, 2) >= std::min(cw, cv) &&
                          p_class(power_word(w, p), p, nmax, 2) >=
                              std::min(nmax, cw + 1) &&
                          p_class(commutator(w, v), p, nmax, 2) >=
                              std::min(nmax, cw + cv);
                samples++;
                if (!ok) {
                    c.expect(false, "filtration property, sample " + std::to_string(i));
                    break;
                }
            }
            c.note(std::to_string(samples) + " filtration samples, p in {3,5}");
        }));

    if (wanted("10"))
        emit(run_one("10", "almost-exponential-bijection", [&](Check& c) {
            OracleResult oracle = brute_oracle(9, 4);
            VerifyReport ow = verify(oracle.witness);
            c.expect(ow.is_bijection && ow.four_periodic, "oracle witness verifies");
            c.expect(ow.match_count == oracle.max_match, "oracle witness achieves max");
            c.expect(oracle.max_match == kOracleMatchMod9,
                     "pinned oracle match at modulus 9 (got " +
                         std::to_string(oracle.max_match) + ")");
            c.expect(ow.breakpoints == kOracleBreakpointsMod9,
                     "pinned breakpoints at modulus 9 (got " +
                         std::to_string(ow.breakpoints) + ")");

            SearchResult ex = search_best(9, 4, Strategy::exhaustive, SearchBudget{});
            c.expect(ex.exhausted, "exhaustive search completed");
            c.expect(ex.report.match_count == oracle.max_match,
                     "exhaustive search equals the oracle");
            c.expect(ex.report.is_bijection && ex.report.four_periodic,
                     "exhaustive witness verifies");

            SearchResult bt = search_best(
                27, 4, Strategy::backtrack,
                SearchBudget{kBacktrackNodeBudget27, 0});
            c.expect(bt.report.is_bijection && bt.report.four_periodic,
                     "backtrack witness verifies");
            c.expect(bt.report.match_count == kBacktrackMatchMod27,
                     "pinned backtrack match at modulus 27 (got " +
                         std::to_string(bt.report.match_count) + ")");

            VerifyReport idr = verify(CycleFunction::identity(9, 4));
            c.expect(idr.match_count == 0, "identity control has match_count 0");
            c.note("oracle(9,4) = " + std::to_string(oracle.max_match) + " over " +
                   std::to_string(oracle.tables_explored) + " tables; backtrack(27) = " +
                   std::to_string(bt.report.match_count) + " in " +
                   std::to_string(bt.nodes_explored) + " nodes");
        }));

    if (wanted("control-1"))
        emit(run_one("control-1", "corrupted-relation-detected", [&](Check& c) {
            // k' = 7 also satisfies p | k'-1, but a1^7 != a1^4 once n = 3
            // (the generator order is 9), so the corrupted relation must be
            // rejected there.
            GammaContext gc = GammaContext::make(3, 3, 4);
            c.expect(gc.check_relators(), "true relations hold");
            Residue wrong(7, gc.modulus());
            GammaElement lhs = gc.mul(gc.generator(1), gc.generator(0));
            GammaElement rhs = gc.mul(gc.generator(0), gc.pow(gc.generator(1), wrong));
            c.expect(!(lhs == rhs), "falsified relation detected");
        }));

    return results;
}

}  // namespace higman
