#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>

#include "higman/ncpoly.hpp"

using namespace higman;

namespace {

// Hand-rolled oracle ring: words as strings of digit characters, exact
// int64 coefficients. Entirely independent of the Poly implementation.
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

OraclePoly o_unit(char var, long long p) {  // 1 + p*x_var
    return OraclePoly{{"", 1}, {std::string(1, var), p}};
}

OraclePoly o_pow(const OraclePoly& a, unsigned e) {
    OraclePoly r{{"", 1}};
    for (unsigned i = 0; i < e; ++i) r = o_mul(r, a);
    return r;
}

Poly from_oracle(const OraclePoly& o, Modulus mod, unsigned vars) {
    Poly f(mod, vars);
    for (const auto& [w, c] : o) {
        std::vector<Var> word;
        for (char ch : w) word.push_back(static_cast<Var>(ch - '0'));
        long long cc = c % static_cast<long long>(mod.pn);
        f.add_term(Monomial(word), static_cast<std::uint64_t>(
                                       cc < 0 ? cc + static_cast<long long>(mod.pn) : cc));
    }
    return f;
}

Monomial random_monomial(std::mt19937_64& rng, unsigned vars, unsigned maxdeg) {
    unsigned d = static_cast<unsigned>(rng() % (maxdeg + 1));
    std::vector<Var> w(d);
    for (auto& v : w) v = static_cast<Var>(rng() % vars);
    return Monomial(std::move(w));
}

Poly random_poly(std::mt19937_64& rng, Modulus mod, unsigned vars, unsigned maxdeg) {
    Poly f(mod, vars);
    unsigned terms = 1 + static_cast<unsigned>(rng() % 4);
    for (unsigned i = 0; i < terms; ++i)
        f.add_term(random_monomial(rng, vars, maxdeg), rng() % mod.pn);
    return f;
}

const Modulus kMod9 = Modulus::make(3, 2);

}  // namespace

TEST_CASE("monomial order: degree first, then lexicographic") {
    DegLexLess less;
    Monomial one, x0 = Monomial::var(0), x1 = Monomial::var(1);
    CHECK(less(one, x0));
    CHECK(less(x0, x1));
    CHECK(less(x1, x0 * x1));
    CHECK(less(x0 * x1, x1 * x0));
    CHECK(less(x1 * x0, x0 * x0 * x0));
    CHECK(!less(x0, x0));
}

TEST_CASE("multiplication is concatenation, not commutative") {
    Poly x0 = Poly::variable(kMod9, 2, 0);
    Poly x1 = Poly::variable(kMod9, 2, 1);
    CHECK(x0 * x1 == Poly::monomial(kMod9, 2, Monomial::var(0) * Monomial::var(1)));
    CHECK(!(x0 * x1 == x1 * x0));
    std::mt19937_64 rng(1);
    Poly f = random_poly(rng, kMod9, 2, 3);
    CHECK(f * Poly::one(kMod9, 2) == f);
    CHECK((x0.scaled(3) * x1.scaled(3)).is_zero());  // 9 = 0 mod 9
}

TEST_CASE("ring axioms hold on random samples") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        Poly a = random_poly(rng, kMod9, 4, 4);
        Poly b = random_poly(rng, kMod9, 4, 4);
        Poly c = random_poly(rng, kMod9, 4, 4);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + b == b + a);
        CHECK(a - a == Poly::zero(kMod9, 4));
    }
}

TEST_CASE("gen_unit") {
    Poly u = gen_unit(kMod9, 4, 0);
    CHECK(u.str() == "1 + 3*x0");
    CHECK(gen_unit(Modulus::make(3, 1), 4, 0) == Poly::one(Modulus::make(3, 1), 4));
    CHECK(gen_unit(Modulus::make(5, 2), 4, 2).str() == "1 + 5*x2");
    CHECK_THROWS_AS(gen_unit(kMod9, 2, 3), UsageError);
}

TEST_CASE("unit_inverse matches the truncated geometric series") {
    Poly u = gen_unit(kMod9, 2, 0);
    CHECK(unit_inverse(u).str() == "1 + 6*x0");  // 1 - 3*x0 mod 9
    CHECK(unit_inverse(Poly::one(kMod9, 2)) == Poly::one(kMod9, 2));

    Poly v = Poly::parse("1 + 3*x0 + 3*x1", kMod9, 2);
    Poly vi = unit_inverse(v);
    CHECK(vi == Poly::parse("1 + 6*x0 + 6*x1", kMod9, 2));
    CHECK(v * vi == Poly::one(kMod9, 2));
    CHECK(vi * v == Poly::one(kMod9, 2));

    CHECK_THROWS_AS(unit_inverse(Poly::parse("1 + x0", kMod9, 2)), NotInvertibleForm);
    CHECK_THROWS_AS(unit_inverse(Poly::parse("2 + 3*x0", kMod9, 2)), NotInvertibleForm);
}

TEST_CASE("unit_inverse is a two-sided inverse for random units") {
    std::mt19937_64 rng(7);
    Modulus m27 = Modulus::make(3, 3);
    for (int i = 0; i < 100; ++i) {
        Poly u = Poly::one(m27, 3);
        unsigned terms = 1 + static_cast<unsigned>(rng() % 3);
        for (unsigned t = 0; t < terms; ++t) {
            Monomial mono = random_monomial(rng, 3, 3);
            if (mono.is_one()) continue;
            u.add_term(mono, (rng() % m27.pn) * m27.p % m27.pn);
        }
        Poly ui = unit_inverse(u);
        CHECK(u * ui == Poly::one(m27, 3));
        CHECK(ui * u == Poly::one(m27, 3));
    }
}

TEST_CASE("unit powers collapse at p^n") {
    Poly u = gen_unit(kMod9, 2, 1);
    CHECK(pow_int(u, 9) == Poly::one(kMod9, 2));
    // (1+3x)^3 = 1 mod 9: the binomial oracle agrees.
    OraclePoly cube = o_pow(o_unit('1', 3), 3);
    CHECK(pow_int(u, 3) == from_oracle(cube, kMod9, 2));
    CHECK(pow_int(u, 3) == Poly::one(kMod9, 2));
    CHECK(pow_int(u, 0) == Poly::one(kMod9, 2));
}

TEST_CASE("unit_pow depends only on the exponent mod p^n") {
    std::mt19937_64 rng(11);
    Poly u = gen_unit(kMod9, 2, 0) * gen_unit(kMod9, 2, 1);
    for (int i = 0; i < 20; ++i) {
        std::uint64_t e = rng() % 50;
        CHECK(pow_int(u, e) == pow_int(u, e + 9));
        CHECK(unit_pow(u, Residue(static_cast<long long>(e), kMod9)) ==
              pow_int(u, e % 9));
    }
    CHECK_THROWS_AS(unit_pow(Poly::variable(kMod9, 2, 0), Residue(2, kMod9)),
                    NotInvertibleForm);
}

TEST_CASE("word_expand") {
    GroupWord w{{1, 1}, {0, 1}};  // a1 a0
    CHECK(word_expand(w, kMod9, 2) == Poly::parse("1 + 3*x0 + 3*x1", kMod9, 2));
    CHECK(word_expand({}, kMod9, 2) == Poly::one(kMod9, 2));
    CHECK(word_expand({{0, 1}, {0, -1}}, kMod9, 2) == Poly::one(kMod9, 2));
    CHECK(word_expand({{0, -2}, {0, 5}, {0, -3}}, kMod9, 2) == Poly::one(kMod9, 2));
}

TEST_CASE("word_expand is a homomorphism") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        GroupWord w, v;
        for (int j = 0; j < 3; ++j) {
            w.push_back({static_cast<Var>(rng() % 2),
                         static_cast<long long>(rng() % 7) - 3});
            v.push_back({static_cast<Var>(rng() % 2),
                         static_cast<long long>(rng() % 7) - 3});
        }
        GroupWord wv = w;
        wv.insert(wv.end(), v.begin(), v.end());
        CHECK(word_expand(wv, kMod9, 2) ==
              word_expand(w, kMod9, 2) * word_expand(v, kMod9, 2));
    }
}

TEST_CASE("text grammar round trip") {
    Poly f = Poly::parse("4*x0.x1 + x1 + 6*x1.x1 + 3*x1.x1.x1", kMod9, 2);
    // Canonical print order is deglex, not the input order.
    CHECK(f.str() == "x1 + 4*x0.x1 + 6*x1.x1 + 3*x1.x1.x1");
    CHECK(Poly::parse(f.str(), kMod9, 2) == f);

    CHECK(Poly::parse("0", kMod9, 2).is_zero());
    CHECK(Poly::parse(" 12 ", kMod9, 2) == Poly::constant(kMod9, 2, 3));
    CHECK(Poly::parse("x0 - x0", kMod9, 2).is_zero());
    CHECK(Poly::parse("-x0", kMod9, 2) == Poly::variable(kMod9, 2, 0).scaled(-1));
    CHECK(Poly::parse("2*x1.x1", kMod9, 2).str() == "2*x1.x1");

    CHECK_THROWS_AS(Poly::parse("", kMod9, 2), ParseError);
    CHECK_THROWS_AS(Poly::parse("x5", kMod9, 2), ParseError);
    CHECK_THROWS_AS(Poly::parse("3*", kMod9, 2), ParseError);
    CHECK_THROWS_AS(Poly::parse("x0 & x1", kMod9, 2), ParseError);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        Poly g = random_poly(rng, kMod9, 4, 4);
        CHECK(Poly::parse(g.str(), kMod9, 4) == g);
    }
}

TEST_CASE("magnus expansion") {
    GroupWord a0{{0, 1}}, a1{{1, 1}};
    GroupWord comm{{0, -1}, {1, -1}, {0, 1}, {1, 1}};  // [a0, a1]

    IntPoly m = magnus_expand(comm, 2, 2);
    IntPoly want(2, 2);
    want.add_term(Monomial::one(), 1);
    want.add_term(Monomial::var(0) * Monomial::var(1), 1);
    want.add_term(Monomial::var(1) * Monomial::var(0), -1);
    CHECK(m == want);

    CHECK(magnus_expand(a0, 2, 3).str() == "1 + x0");

    // Nested commutator [[a0,a1],a1]: nothing between 1 and degree 3.
    GroupWord winv{{1, -1}, {0, -1}, {1, 1}, {0, 1}};
    GroupWord nested = winv;
    nested.push_back({1, -1});
    nested.insert(nested.end(), comm.begin(), comm.end());
    nested.push_back({1, 1});
    IntPoly d3 = magnus_expand(nested, 2, 3);
    bool has_deg3 = false;
    for (const auto& [mono, coeff] : d3.terms()) {
        if (mono.degree() >= 1 && mono.degree() <= 2)
            CHECK(coeff == 0);  // unreachable: zero coefficients are pruned
        if (mono.degree() == 3 && coeff != 0) has_deg3 = true;
    }
    CHECK(has_deg3);
    CHECK(d3.coeff(Monomial::one()) == 1);
}

TEST_CASE("magnus expansion of left-normed commutators starts at its depth") {
    GroupWord w{{0, 1}};
    GroupWord comm{{0, -1}, {1, -1}, {0, 1}, {1, 1}};
    GroupWord cur = comm;
    for (unsigned depth = 2; depth <= 4; ++depth) {
        IntPoly e = magnus_expand(cur, 2, depth);
        for (const auto& [mono, coeff] : e.terms()) {
            (void)coeff;
            CHECK((mono.degree() == 0 || mono.degree() >= depth));
        }
        // next: [cur, a1]
        GroupWord inv;
        for (auto it = cur.rbegin(); it != cur.rend(); ++it)
            inv.push_back({it->gen, -it->exp});
        GroupWord next = inv;
        next.push_back({1, -1});
        next.insert(next.end(), cur.begin(), cur.end());
        next.push_back({1, 1});
        cur = next;
    }
}

TEST_CASE("p_class") {
    GroupWord a0{{0, 1}}, a03{{0, 3}}, a09{{0, 9}};
    GroupWord comm{{0, -1}, {1, -1}, {0, 1}, {1, 1}};
    CHECK(p_class(a0, 3, 6, 2) == 1);
    CHECK(p_class(a03, 3, 6, 2) == 2);
    CHECK(p_class(a09, 3, 6, 2) == 3);
    CHECK(p_class(comm, 3, 6, 2) == 2);
    CHECK(p_class({{0, 1}, {0, -1}}, 3, 4, 2) == 4);  // identity: capped at nmax
    CHECK(p_class(a0, 5, 6, 2) == 1);
    CHECK(p_class({{0, 5}}, 5, 6, 2) == 2);
}

TEST_CASE("int polynomial arithmetic is exact and capped") {
    IntPoly a(2, 3), b(2, 3);
    a.add_term(Monomial::var(0), 1);
    a.add_term(Monomial::one(), 1);
    b.add_term(Monomial::var(1) * Monomial::var(1) * Monomial::var(1), 5);
    IntPoly ab = a * b;
    CHECK(ab.coeff(Monomial::var(1) * Monomial::var(1) * Monomial::var(1)) == 5);
    // degree 4 exceeds the cap and is dropped
    CHECK(ab.terms().size() == 1);

    CHECK_THROWS_AS(checked_mul(std::int64_t{1} << 62, 4), OverflowError);
    CHECK_THROWS_AS(checked_pow(10, 20), OverflowError);
    CHECK(checked_pow(3, 4) == 81);

    IntPoly d(2, 3);
    d.add_term(Monomial::var(0), 9);
    CHECK(d.divided_exact(3).coeff(Monomial::var(0)) == 3);
    CHECK_THROWS_AS(d.divided_exact(2), ShapeMismatch);
}
