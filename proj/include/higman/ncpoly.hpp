#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "higman/errors.hpp"
#include "higman/zmod.hpp"

namespace higman {

using Var = std::uint8_t;

// A word in the non-commutative variables x0, x1, ...; the empty word is
// the monomial 1. The product of monomials is concatenation.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<Var> word) : w_(std::move(word)) {}

    static Monomial one() { return Monomial(); }
    static Monomial var(Var i) { return Monomial({i}); }

    std::size_t degree() const { return w_.size(); }
    bool is_one() const { return w_.empty(); }
    const std::vector<Var>& word() const { return w_; }

    Monomial operator*(const Monomial& o) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    std::string str() const;  // "x0.x1" ; "1" for the empty word

private:
    std::vector<Var> w_;
};

// Canonical monomial order: degree first, then lexicographic on letter
// indices. Used for printing, deterministic iteration, and the "largest
// monomial" of the reduction strategy.
int deglex_compare(const Monomial& a, const Monomial& b);

struct DegLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return deglex_compare(a, b) < 0;
    }
};

// Sparse polynomial over Z/p^n: a term map with canonical coefficients in
// [1, p^n); zero coefficients are never stored.
class Poly {
public:
    using Terms = std::map<Monomial, std::uint64_t, DegLexLess>;

    Poly(Modulus mod, unsigned vars) : mod_(mod), vars_(vars) {}

    static Poly zero(Modulus mod, unsigned vars) { return Poly(mod, vars); }
    static Poly constant(Modulus mod, unsigned vars, long long c);
    static Poly one(Modulus mod, unsigned vars) { return constant(mod, vars, 1); }
    static Poly variable(Modulus mod, unsigned vars, Var i);
    static Poly monomial(Modulus mod, unsigned vars, const Monomial& m, long long c = 1);

    const Modulus& modulus() const { return mod_; }
    unsigned vars() const { return vars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    std::size_t degree() const;  // 0 for the zero polynomial
    std::uint64_t coeff(const Monomial& m) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(long long c) const;

    friend bool operator==(const Poly&, const Poly&) = default;

    // Canonical text form, terms in deglex order:
    // "x1 + 4*x0.x1 + 6*x1.x1 + 3*x1.x1.x1"; "0" when zero.
    std::string str() const;
    static Poly parse(std::string_view text, Modulus mod, unsigned vars);

    // Adds c * m into this polynomial, pruning a vanishing coefficient.
    void add_term(const Monomial& m, std::uint64_t c) { add_term(Monomial(m), c); }
    void add_term(Monomial&& m, std::uint64_t c);

private:
    void check_compatible(const Poly& o) const;

    Modulus mod_;
    unsigned vars_;
    Terms terms_;
};

// f * m and m * f without building a one-term Poly at the call site.
Poly mul_monomial_sandwich(const Monomial& pre, const Poly& f, const Monomial& post);

// The unit generator 1 + p*x_i of the group Gamma.
Poly gen_unit(Modulus mod, unsigned vars, Var i);

// Series inverse of u = 1 + p*q: sum_{j=0}^{n-1} (-p q)^j. Requires
// constant term 1 and every other coefficient divisible by p.
Poly unit_inverse(const Poly& u);

// Plain ring power with an integer exponent (square and multiply).
Poly pow_int(const Poly& u, std::uint64_t e);

// u^e for a residue exponent; well defined because u^(p^n) = 1 for units
// of the 1 + p*q form.
Poly unit_pow(const Poly& u, const Residue& e);

struct GroupLetter {
    Var gen;
    long long exp;
};
using GroupWord = std::vector<GroupLetter>;

// Image of a free-group word under a_i -> 1 + p*x_i. Negative exponents
// go through unit_inverse.
Poly word_expand(const GroupWord& w, Modulus mod, unsigned vars);

// Sparse polynomial with exact (checked 64-bit) integer coefficients and
// a hard degree cap; terms above the cap are dropped by every operation.
class IntPoly {
public:
    using Terms = std::map<Monomial, std::int64_t, DegLexLess>;

    IntPoly(unsigned vars, unsigned degree_cap) : vars_(vars), cap_(degree_cap) {}

    static IntPoly constant(unsigned vars, unsigned cap, std::int64_t c);
    static IntPoly one(unsigned vars, unsigned cap) { return constant(vars, cap, 1); }

    unsigned vars() const { return vars_; }
    unsigned degree_cap() const { return cap_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::int64_t coeff(const Monomial& m) const;

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;

    // Divides every coefficient by d, throwing ShapeMismatch unless the
    // division is exact.
    IntPoly divided_exact(std::int64_t d) const;

    // Reduction mod p^n into the sparse ring over Z/p^n.
    Poly reduced(Modulus mod) const;

    void add_term(const Monomial& m, std::int64_t c);

    friend bool operator==(const IntPoly&, const IntPoly&) = default;
    std::string str() const;

private:
    unsigned vars_;
    unsigned cap_;
    Terms terms_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_pow(std::int64_t base, std::uint32_t e);

// Expansion of a word under a_i -> 1 + scale*x_i over exact integers,
// truncated above the degree cap. Inverse letters expand through the
// truncated geometric series of 1 + scale*x_i.
IntPoly expand_word_int(const GroupWord& w, std::int64_t scale, unsigned vars,
                        unsigned degree_cap);

// Magnus expansion: a_i -> 1 + x_i, truncated above degree D.
IntPoly magnus_expand(const GroupWord& w, unsigned vars, unsigned degree_cap);

// Largest n <= nmax with w in the n-th term of the p-central series of
// the free group, detected through the expansion a_i -> 1 + p*x_i: all
// coefficients of (w - 1) in degree < n must be divisible by p^n.
unsigned p_class(const GroupWord& w, std::uint32_t p, unsigned nmax, unsigned vars);

}  // namespace higman
