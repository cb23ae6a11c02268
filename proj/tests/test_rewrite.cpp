#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>

#include "higman/rewrite.hpp"

using namespace higman;

namespace {

// Oracle for the relators: expand (a1 a0 - a0 a1^k) / p^2 over exact
// integers with string words, independently of IntPoly.
using OraclePoly = std::map<std::string, long long>;

OraclePoly o_mul(const OraclePoly& a, const OraclePoly& b) {
    OraclePoly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            r[ma + mb] += ca * cb;
            if (r[ma + mb] == 0) r.erase(ma + mb);
        }
    return r;
}

OraclePoly o_sub(OraclePoly a, const OraclePoly& b) {
    for (const auto& [m, c] : b) {
        a[m] -= c;
        if (a[m] == 0) a.erase(m);
    }
    return a;
}

OraclePoly o_unit(char var, long long p) { return {{"", 1}, {std::string(1, var), p}}; }

OraclePoly o_pow(const OraclePoly& a, unsigned e) {
    OraclePoly r{{"", 1}};
    for (unsigned i = 0; i < e; ++i) r = o_mul(r, a);
    return r;
}

Poly oracle_relator(Modulus mod, std::uint64_t k, unsigned vars, char lo, char hi) {
    OraclePoly diff = o_sub(o_mul(o_unit(hi, mod.p), o_unit(lo, mod.p)),
                            o_mul(o_unit(lo, mod.p),
                                  o_pow(o_unit(hi, mod.p), static_cast<unsigned>(k))));
    Poly g(mod, vars);
    long long p2 = static_cast<long long>(mod.p) * mod.p;
    for (const auto& [w, c] : diff) {
        REQUIRE(c % p2 == 0);
        std::vector<Var> word;
        for (char ch : w) word.push_back(static_cast<Var>(ch - '0'));
        long long cc = (c / p2) % static_cast<long long>(mod.pn);
        if (cc < 0) cc += static_cast<long long>(mod.pn);
        g.add_term(Monomial(word), static_cast<std::uint64_t>(cc));
    }
    return g;
}

RewriteSystem make_342(unsigned vars = 4, Direction dir = Direction::left) {
    Modulus mod = Modulus::make(3, 2);
    return RewriteSystem::make(mod, KExp::make(4, mod), vars, dir);
}

Poly shift_vars(const Poly& f, unsigned vars, unsigned shift) {
    Poly r(f.modulus(), vars);
    for (const auto& [m, c] : f.terms()) {
        std::vector<Var> w;
        for (Var v : m.word()) w.push_back(static_cast<Var>((v + shift) % vars));
        r.add_term(Monomial(w), c);
    }
    return r;
}

bool in_zs_basis(const Monomial& m) {  // even letters then odd letters
    bool seen_odd = false;
    for (Var v : m.word()) {
        if (v % 2 == 1)
            seen_odd = true;
        else if (seen_odd)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("build_q0 matches the exact-integer oracle") {
    Modulus mod = Modulus::make(3, 2);
    RewriteSystem sys = make_342(2);
    CHECK(sys.relators().q0.str() == "8*x0 + 3*x0.x0 + 6*x0.x0.x0");
    CHECK(sys.relators().g[0] == oracle_relator(mod, 4, 2, '0', '1'));

    Modulus mod1 = Modulus::make(3, 1);
    RewriteSystem sys1 = RewriteSystem::make(mod1, KExp::make(4, mod1), 2);
    CHECK(sys1.relators().q0.str() == "2*x0");

    // k - 1 = p makes the linear coefficient -1.
    Modulus mod5 = Modulus::make(5, 2);
    RewriteSystem sys5 = RewriteSystem::make(mod5, KExp::make(6, mod5), 2);
    CHECK(sys5.relators().q0.coeff(Monomial::var(0)) == 24);
}

TEST_CASE("build_relators matches the oracle in all four slots") {
    for (auto [p, n, k] :
         {std::tuple{3u, 2u, 4ull}, {3u, 3u, 4ull}, {3u, 2u, 7ull}, {5u, 2u, 6ull}}) {
        Modulus mod = Modulus::make(p, n);
        RewriteSystem sys = RewriteSystem::make(mod, KExp::make(k, mod), 4);
        REQUIRE(sys.relators().g.size() == 4);
        const char names[] = "0123";
        for (unsigned i = 0; i < 4; ++i)
            CHECK(sys.relators().g[i] ==
                  oracle_relator(mod, k, 4, names[i], names[(i + 1) % 4]));
    }
}

TEST_CASE("relator g1 is g0 with shifted variables") {
    RewriteSystem sys = make_342();
    CHECK(sys.relators().g[1] == shift_vars(sys.relators().g[0], 4, 1));
    CHECK(sys.relators().g[2] == shift_vars(sys.relators().g[1], 4, 1));
    CHECK(sys.relators().g[0] ==
          Poly::parse("x1.x0 - 4*x0.x1 - x1 - 6*x1.x1 - 3*x1.x1.x1", sys.modulus(), 4));
}

TEST_CASE("rule left-hand sides and the displayed right-hand side") {
    RewriteSystem sys = make_342();
    REQUIRE(sys.rules().size() == 4);
    CHECK(sys.rules()[0].lhs == Monomial::var(1) * Monomial::var(0));
    CHECK(sys.rules()[1].lhs == Monomial::var(1) * Monomial::var(2));
    CHECK(sys.rules()[2].lhs == Monomial::var(3) * Monomial::var(2));
    CHECK(sys.rules()[3].lhs == Monomial::var(3) * Monomial::var(0));
    CHECK(sys.rules()[0].rhs ==
          Poly::parse("4*x0.x1 + x1 + 6*x1.x1 + 3*x1.x1.x1", sys.modulus(), 4));

    RewriteSystem two = make_342(2);
    REQUIRE(two.rules().size() == 1);
    CHECK(two.rules()[0].lhs == Monomial::var(1) * Monomial::var(0));

    // lhs - rhs rearranges the relator exactly.
    Poly diff = Poly::monomial(sys.modulus(), 4, sys.rules()[0].lhs) - sys.rules()[0].rhs;
    CHECK(diff == sys.relators().g[0]);
}

TEST_CASE("one_step") {
    RewriteSystem sys = make_342();
    Poly f = Poly::parse("x1.x0", sys.modulus(), 4);
    auto ss = sys.sites(f);
    REQUIRE(ss.size() == 1);
    CHECK(sys.one_step(f, ss[0]) == sys.rules()[0].rhs);

    CHECK(sys.sites(Poly::parse("x0.x1", sys.modulus(), 4)).empty());

    auto gs = sys.sites(sys.relators().g[0]);
    REQUIRE(gs.size() == 1);
    CHECK(sys.one_step(sys.relators().g[0], gs[0]).is_zero());

    CHECK_THROWS_AS(sys.one_step(f, Site{Monomial::var(2), 0, 0}), SiteInvalid);
    CHECK_THROWS_AS(sys.one_step(f, Site{f.terms().begin()->first, 0, 2}), SiteInvalid);
}

TEST_CASE("is_terminal and the even-then-odd basis") {
    RewriteSystem sys = make_342();
    CHECK(sys.is_terminal(Poly::parse("x0.x2.x0.x1.x3", sys.modulus(), 4)));
    CHECK(!sys.is_terminal(Poly::parse("x1.x2", sys.modulus(), 4)));
    CHECK(sys.is_terminal(Poly::constant(sys.modulus(), 4, 5)));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        unsigned d = 1 + static_cast<unsigned>(rng() % 6);
        std::vector<Var> w(d);
        for (auto& v : w) v = static_cast<Var>(rng() % 4);
        Monomial m(w);
        CHECK(sys.is_terminal(Poly::monomial(sys.modulus(), 4, m)) == in_zs_basis(m));
    }
}

TEST_CASE("normal forms") {
    RewriteSystem sys = make_342();
    for (const auto& g : sys.relators().g) CHECK(sys.normal_form(g).is_zero());
    Poly t = Poly::parse("x0.x1", sys.modulus(), 4);
    CHECK(sys.normal_form(t) == t);
    CHECK(sys.normal_form(Poly::parse("x1.x0", sys.modulus(), 4)) ==
          sys.rules()[0].rhs);
}

TEST_CASE("normal form is idempotent and strategy independent") {
    RewriteSystem sys = make_342();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        unsigned d = 1 + static_cast<unsigned>(rng() % 6);
        std::vector<Var> w(d);
        for (auto& v : w) v = static_cast<Var>(rng() % 4);
        Poly f = Poly::monomial(sys.modulus(), 4, Monomial(w), 1 + rng() % 8);
        Poly nf = sys.normal_form(f);
        CHECK(sys.is_terminal(nf));
        CHECK(sys.normal_form(nf) == nf);
        for (int s = 0; s < 100; ++s) CHECK(sys.normal_form_random(f, rng) == nf);
    }
}

TEST_CASE("normal form is linear") {
    RewriteSystem sys = make_342();
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        Poly f(sys.modulus(), 4), g(sys.modulus(), 4);
        for (int t = 0; t < 3; ++t) {
            unsigned d = 1 + static_cast<unsigned>(rng() % 5);
            std::vector<Var> w(d);
            for (auto& v : w) v = static_cast<Var>(rng() % 4);
            f.add_term(Monomial(w), rng() % 9);
            std::vector<Var> u(d);
            for (auto& v : u) v = static_cast<Var>(rng() % 4);
            g.add_term(Monomial(u), rng() % 9);
        }
        long long a = static_cast<long long>(rng() % 9);
        long long b = static_cast<long long>(rng() % 9);
        CHECK(sys.normal_form(f.scaled(a) + g.scaled(b)) ==
              sys.normal_form(f).scaled(a) + sys.normal_form(g).scaled(b));
    }
}

TEST_CASE("right-reduced normal forms mirror the left ones") {
    RewriteSystem sys = make_342(4, Direction::right);
    REQUIRE(sys.rules().size() == 4);
    for (const auto& g : sys.relators().g) CHECK(sys.normal_form(g).is_zero());
    // odd-then-even words are terminal on the right
    CHECK(sys.is_terminal(Poly::parse("x1.x3.x0.x2", sys.modulus(), 4)));
    CHECK(!sys.is_terminal(Poly::parse("x0.x1", sys.modulus(), 4)));
    Poly nf = sys.normal_form(Poly::parse("x0.x1", sys.modulus(), 4));
    CHECK(sys.is_terminal(nf));

    RewriteSystem two = make_342(2, Direction::right);
    CHECK(two.rules()[0].lhs == Monomial::var(0) * Monomial::var(1));
    CHECK(two.normal_form(two.relators().g[0]).is_zero());
}

TEST_CASE("termination measure") {
    RewriteSystem sys = make_342();
    Monomial x1x0 = Monomial::var(1) * Monomial::var(0);
    TermMeasure m1 = sys.measure(x1x0, 3);
    CHECK(m1.torder == 1);
    CHECK(m1.nodd == 1);
    CHECK(m1.defect == 1);

    Monomial x1x0x1x0 = x1x0 * x1x0;
    TermMeasure m2 = sys.measure(x1x0x1x0, 1);
    CHECK(m2.torder == 2);
    CHECK(m2.nodd == 2);
    CHECK(m2.defect == 3);  // jk + jm + rm with j = k = r = m = 1

    CHECK(sys.measure(Monomial::var(0) * Monomial::var(1), 1).defect == 0);
    CHECK(TermMeasure{1, 5, 5} < TermMeasure{2, 0, 0});
    CHECK(TermMeasure{1, 2, 9} < TermMeasure{1, 3, 0});

    // 2-variable systems count x0 letters, as in the displayed example
    // n0(x1^i x0^j) = j.
    RewriteSystem two = make_342(2);
    CHECK(two.measure(Monomial::var(1) * Monomial::var(1) * Monomial::var(0), 1).nodd == 1);
}

TEST_CASE("every applied step strictly decreases the measure") {
    RewriteSystem sys = make_342();
    std::mt19937_64 rng(21);
    ReduceStats stats;
    for (int i = 0; i < 100; ++i) {
        unsigned d = 1 + static_cast<unsigned>(rng() % 7);
        std::vector<Var> w(d);
        for (auto& v : w) v = static_cast<Var>(rng() % 4);
        sys.normal_form(Poly::monomial(sys.modulus(), 4, Monomial(w)), &stats);
    }
    CHECK(stats.steps > 0);
    CHECK(stats.measure_violations == 0);
}

TEST_CASE("ideal membership") {
    RewriteSystem sys = make_342();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        unsigned d1 = static_cast<unsigned>(rng() % 3);
        unsigned d2 = static_cast<unsigned>(rng() % 3);
        std::vector<Var> w1(d1), w2(d2);
        for (auto& v : w1) v = static_cast<Var>(rng() % 4);
        for (auto& v : w2) v = static_cast<Var>(rng() % 4);
        Poly f = mul_monomial_sandwich(Monomial(w1), sys.relators().g[rng() % 4],
                                       Monomial(w2));
        CHECK(sys.ideal_member(f));
    }
    CHECK(!sys.ideal_member(Poly::variable(sys.modulus(), 4, 0)));
    Poly combo = sys.relators().g[0].scaled(3) +
                 sys.relators().g[1] * Poly::variable(sys.modulus(), 4, 2);
    CHECK(sys.ideal_member(combo));
}

TEST_CASE("disjoint redexes meet at one normal form") {
    RewriteSystem sys = make_342();
    Poly f = Poly::parse("x1.x0.x3.x2", sys.modulus(), 4);
    auto ss = sys.sites(f);
    REQUIRE(ss.size() == 2);
    Poly nf_a = sys.normal_form(sys.one_step(f, ss[0]));
    Poly nf_b = sys.normal_form(sys.one_step(f, ss[1]));
    CHECK(nf_a == nf_b);
    CHECK(nf_a == sys.normal_form(f));
    CHECK(sys.is_terminal(nf_a));
}

TEST_CASE("confluence report") {
    RewriteSystem sys = make_342();
    ConfluenceReport rep = check_confluence(sys, 3, 50, 6, 2, 12345);
    CHECK(rep.words_checked == 4 + 16 + 64);
    CHECK(rep.random_words_checked == 50);
    CHECK(rep.divergences_found == 0);
    CHECK(rep.stats.measure_violations == 0);
}

TEST_CASE("p = 2 builds but only as the capped experimental mode") {
    Modulus mod = Modulus::make(2, 2);
    RewriteSystem sys = RewriteSystem::make(mod, KExp::make(3, mod), 4);
    CHECK(sys.rules().size() == 4);
    sys.set_iteration_cap(50000);
    // No termination claim at p = 2; the engine must either finish under
    // the cap or throw IterationCapExceeded, never loop forever.
    try {
        Poly nf = sys.normal_form(Poly::parse("x1.x0.x3.x2", mod, 4));
        CHECK(sys.is_terminal(nf));
    } catch (const IterationCapExceeded&) {
        CHECK(true);
    }
}
