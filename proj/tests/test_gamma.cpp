#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <unordered_set>

#include "higman/gamma.hpp"

using namespace higman;

namespace {

GammaElement random_element(std::mt19937_64& rng, const GammaContext& gc,
                            unsigned len = 6) {
    GammaElement e = gc.identity();
    for (unsigned i = 0; i < len; ++i) {
        GammaElement g = gc.generator(static_cast<unsigned>(rng() % 4));
        e = rng() % 2 ? gc.mul(e, g) : gc.mul(e, gc.inv(g));
    }
    return e;
}

Poly rotate_poly(const Poly& f, unsigned shift) {
    Poly r(f.modulus(), f.vars());
    for (const auto& [m, c] : f.terms()) {
        std::vector<Var> w;
        for (Var v : m.word()) w.push_back(static_cast<Var>((v + shift) % f.vars()));
        r.add_term(Monomial(w), c);
    }
    return r;
}

}  // namespace

TEST_CASE("generators") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    CHECK(gc.generator(1).poly().str() == "1 + 3*x1");
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = i + 1; j < 4; ++j)
            CHECK(!(gc.generator(i) == gc.generator(j)));
    CHECK_THROWS_AS(gc.generator(4), UsageError);

    // n = 1 is degenerate: every generator collapses to the identity.
    GammaContext g1 = GammaContext::make(3, 1, 4);
    for (unsigned i = 0; i < 4; ++i) CHECK(g1.generator(i).is_identity());

    CHECK_THROWS_AS(GammaContext::make(2, 2, 3), UsageError);  // p = 2 refused
}

TEST_CASE("group laws") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 40; ++i) {
        GammaElement a = random_element(rng, gc);
        GammaElement b = random_element(rng, gc);
        GammaElement c = random_element(rng, gc);
        CHECK(gc.mul(gc.mul(a, b), c) == gc.mul(a, gc.mul(b, c)));
        CHECK(gc.mul(a, gc.inv(a)).is_identity());
        CHECK(gc.mul(gc.inv(a), a).is_identity());
        CHECK(gc.mul(a, gc.identity()) == a);
    }
}

TEST_CASE("defining relation and conjugation law") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    Residue k(4, gc.modulus());
    for (unsigned i = 0; i < 4; ++i) {
        unsigned j = (i + 1) % 4;
        GammaElement ai = gc.generator(i), aj = gc.generator(j);
        CHECK(gc.mul(aj, ai) == gc.mul(ai, gc.pow(aj, k)));
        CHECK(gc.mul(gc.mul(gc.inv(ai), aj), ai) == gc.pow(aj, k));
    }
    CHECK(gc.check_relators());
    CHECK(GammaContext::make(3, 3, 4).check_relators());
    CHECK(GammaContext::make(5, 2, 6).check_relators());
}

TEST_CASE("powers and orders") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    CHECK(gc.pow(gc.generator(1), Residue(9, gc.modulus())).is_identity());
    CHECK(gc.order(gc.generator(1)) == 3);
    CHECK(gc.order(gc.identity()) == 1);
    CHECK(GammaContext::make(3, 3, 4).order(
              GammaContext::make(3, 3, 4).generator(1)) == 9);

    // Unit powers collapse at p^n, so orders always divide p^n.
    std::mt19937_64 rng(37);
    for (int i = 0; i < 50; ++i) {
        std::uint64_t ord = gc.order(random_element(rng, gc));
        CHECK(9 % ord == 0);
    }
}

TEST_CASE("enumeration") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    auto all = gc.enumerate({gc.generator(0), gc.generator(1), gc.generator(2),
                             gc.generator(3)},
                            200);
    CHECK(all.size() == 81);
    CHECK(gc.enumerate({gc.generator(0), gc.generator(2)}, 200).size() == 9);
    CHECK(gc.enumerate({gc.identity()}, 200).size() == 1);
    CHECK_THROWS_AS(gc.enumerate({gc.generator(0), gc.generator(1), gc.generator(2),
                                  gc.generator(3)},
                                 10),
                    CapExceeded);
}

TEST_CASE("zappa-szep factorization report") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    ZsReport r = gc.zs_check(200);
    CHECK(r.size_s == 9);
    CHECK(r.size_t_ == 9);
    CHECK(r.size_g == 81);
    CHECK(r.intersection_trivial);
    CHECK(r.unique_factorization);

    ZsReport r1 = GammaContext::make(3, 1, 4).zs_check(10);
    CHECK(r1.size_g == 1);
    CHECK(r1.size_s == 1);
    CHECK(r1.intersection_trivial);
    CHECK(r1.unique_factorization);
}

TEST_CASE("jacobson order cross-check") {
    CHECK(free_two_generator_group_size(Modulus::make(3, 2), 100) == 9);
    CHECK(free_two_generator_group_size(Modulus::make(3, 3), 1000) == 243);
    CHECK(free_two_generator_group_size(Modulus::make(3, 1), 10) == 1);

    JacobsonReport jr = GammaContext::make(3, 2, 4).jacobson_check(200);
    CHECK(jr.free_size == 9);
    CHECK(jr.size_s == 9);
    CHECK(jr.equal);
}

TEST_CASE("two routes to a word's image agree") {
    // Reducing once after a plain ring expansion must equal reducing after
    // every group multiplication.
    GammaContext gc = GammaContext::make(3, 2, 4);
    std::mt19937_64 rng(67);
    for (int i = 0; i < 100; ++i) {
        GroupWord w;
        GammaElement stepwise = gc.identity();
        unsigned t = 1 + static_cast<unsigned>(rng() % 6);
        for (unsigned j = 0; j < t; ++j) {
            Var gen = static_cast<Var>(rng() % 4);
            long long exp = static_cast<long long>(rng() % 9) - 4;
            w.push_back(GroupLetter{gen, exp});
            GammaElement g = gc.pow(gc.generator(gen),
                                    Residue(exp < 0 ? -exp : exp, gc.modulus()));
            if (exp < 0) g = gc.inv(g);
            stepwise = gc.mul(stepwise, g);
        }
        Poly expanded = word_expand(w, gc.modulus(), 4);
        CHECK(gc.system().normal_form(expanded) == stepwise.poly());
    }
}

TEST_CASE("variable rotation permutes the relators and the group") {
    GammaContext gc = GammaContext::make(3, 2, 4);
    const auto& g = gc.system().relators().g;
    for (unsigned i = 0; i < 4; ++i) CHECK(rotate_poly(g[i], 1) == g[(i + 1) % 4]);

    auto all = gc.enumerate({gc.generator(0), gc.generator(1), gc.generator(2),
                             gc.generator(3)},
                            200);
    std::unordered_set<std::string> keys;
    for (const auto& e : all) keys.insert(e.key());
    for (const auto& e : all) {
        Poly r = e.poly();
        for (int step = 0; step < 4; ++step) {
            r = gc.system().normal_form(rotate_poly(r, 1));
            CHECK(keys.count(r.str()) == 1);
        }
        CHECK(r == e.poly());  // rotation has order 4
    }
}
