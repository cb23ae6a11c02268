#include "higman/ncpoly.hpp"

#include <algorithm>
#include <cctype>

namespace higman {

Monomial Monomial::operator*(const Monomial& o) const {
    std::vector<Var> w;
    w.reserve(w_.size() + o.w_.size());
    w.insert(w.end(), w_.begin(), w_.end());
    w.insert(w.end(), o.w_.begin(), o.w_.end());
    return Monomial(std::move(w));
}

std::string Monomial::str() const {
    if (w_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (i) s += '.';
        s += 'x';
        s += std::to_string(static_cast<unsigned>(w_[i]));
    }
    return s;
}

int deglex_compare(const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    const auto& wa = a.word();
    const auto& wb = b.word();
    for (std::size_t i = 0; i < wa.size(); ++i)
        if (wa[i] != wb[i]) return wa[i] < wb[i] ? -1 : 1;
    return 0;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t canon(long long c, std::uint64_t pn) {
    long long r = c % static_cast<long long>(pn);
    if (r < 0) r += static_cast<long long>(pn);
    return static_cast<std::uint64_t>(r);
}

}  // namespace

Poly Poly::constant(Modulus mod, unsigned vars, long long c) {
    Poly f(mod, vars);
    f.add_term(Monomial::one(), canon(c, mod.pn));
    return f;
}

Poly Poly::variable(Modulus mod, unsigned vars, Var i) {
    if (i >= vars) throw UsageError("variable index out of range");
    Poly f(mod, vars);
    f.add_term(Monomial::var(i), 1);
    return f;
}

Poly Poly::monomial(Modulus mod, unsigned vars, const Monomial& m, long long c) {
    for (Var v : m.word())
        if (v >= vars) throw UsageError("variable index out of range");
    Poly f(mod, vars);
    f.add_term(m, canon(c, mod.pn));
    return f;
}

bool Poly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.is_one() &&
           terms_.begin()->second == 1;
}

std::size_t Poly::degree() const {
    return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

std::uint64_t Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

void Poly::add_term(Monomial&& m, std::uint64_t c) {
    c %= mod_.pn;
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
        it->second = (it->second + c) % mod_.pn;
        if (it->second == 0) terms_.erase(it);
    }
}

void Poly::check_compatible(const Poly& o) const {
    if (!(mod_ == o.mod_)) throw ModulusMismatch();
    if (vars_ != o.vars_) throw ContextMismatch();
}

Poly Poly::operator+(const Poly& o) const {
    check_compatible(o);
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    check_compatible(o);
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, mod_.pn - c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_compatible(o);
    Poly r(mod_, vars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_)
            r.add_term(ma * mb, mulmod(ca, cb, mod_.pn));
    return r;
}

Poly Poly::operator-() const { return scaled(-1); }

Poly Poly::scaled(long long c) const {
    std::uint64_t cc = canon(c, mod_.pn);
    Poly r(mod_, vars_);
    for (const auto& [m, v] : terms_) r.add_term(m, mulmod(v, cc, mod_.pn));
    return r;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        if (m.is_one())
            s += std::to_string(c);
        else if (c == 1)
            s += m.str();
        else
            s += std::to_string(c) + "*" + m.str();
    }
    return s;
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    Modulus mod;
    unsigned vars;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("polynomial parse error at offset " + std::to_string(pos) +
                         ": " + what);
    }

    std::uint64_t number() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected a number");
        std::uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
            if (v > (std::uint64_t{1} << 62)) fail("coefficient too large");
            ++pos;
        }
        return v;
    }

    Var variable() {
        skip_ws();
        if (peek() != 'x') fail("expected a variable");
        ++pos;
        std::uint64_t idx = number();
        if (idx >= vars) fail("variable index out of range");
        return static_cast<Var>(idx);
    }

    Monomial mono() {
        std::vector<Var> w{variable()};
        while (peek() == '.') {
            ++pos;
            w.push_back(variable());
        }
        return Monomial(std::move(w));
    }

    // term := coeff ('*' mono)? | mono
    void term(Poly& acc, bool negate) {
        std::uint64_t c = 1;
        Monomial m;
        if (peek() == 'x') {
            m = mono();
        } else {
            c = number() % mod.pn;
            if (peek() == '*') {
                ++pos;
                m = mono();
            }
        }
        acc.add_term(m, negate ? (mod.pn - c % mod.pn) % mod.pn : c);
    }

    Poly poly() {
        Poly acc(mod, vars);
        bool neg = false;
        if (peek() == '-') { neg = true; ++pos; }
        else if (peek() == '+') ++pos;
        term(acc, neg);
        while (!eof()) {
            char op = peek();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            ++pos;
            term(acc, op == '-');
        }
        return acc;
    }
};

}  // namespace

Poly Poly::parse(std::string_view text, Modulus mod, unsigned vars) {
    Parser p{text, 0, mod, vars};
    if (p.eof()) throw ParseError("empty polynomial text");
    return p.poly();
}

Poly mul_monomial_sandwich(const Monomial& pre, const Poly& f, const Monomial& post) {
    Poly r(f.modulus(), f.vars());
    for (const auto& [m, c] : f.terms()) r.add_term(pre * m * post, c);
    return r;
}

Poly gen_unit(Modulus mod, unsigned vars, Var i) {
    if (i >= vars) throw UsageError("generator index out of range");
    Poly f = Poly::one(mod, vars);
    f.add_term(Monomial::var(i), mod.p % mod.pn);
    return f;
}

namespace {

// u must be 1 + p*q: constant term 1, every other coefficient divisible by p.
void require_unit_form(const Poly& u) {
    if (u.coeff(Monomial::one()) != 1) throw NotInvertibleForm();
    for (const auto& [m, c] : u.terms())
        if (!m.is_one() && c % u.modulus().p != 0) throw NotInvertibleForm();
}

}  // namespace

Poly unit_inverse(const Poly& u) {
    require_unit_form(u);
    // v = sum_{j<n} (1-u)^j; the series stops because (1-u)^n = 0 mod p^n.
    Poly neg = Poly::one(u.modulus(), u.vars()) - u;
    Poly acc = Poly::one(u.modulus(), u.vars());
    Poly pw = Poly::one(u.modulus(), u.vars());
    for (std::uint32_t j = 1; j < u.modulus().n; ++j) {
        pw = pw * neg;
        if (pw.is_zero()) break;
        acc = acc + pw;
    }
    return acc;
}

Poly pow_int(const Poly& u, std::uint64_t e) {
    Poly acc = Poly::one(u.modulus(), u.vars());
    Poly base = u;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

Poly unit_pow(const Poly& u, const Residue& e) {
    if (!(u.modulus() == e.modulus())) throw ModulusMismatch();
    require_unit_form(u);
    return pow_int(u, e.value());
}

Poly word_expand(const GroupWord& w, Modulus mod, unsigned vars) {
    Poly acc = Poly::one(mod, vars);
    for (const auto& [gen, exp] : w) {
        if (exp == 0) continue;
        Poly base = gen_unit(mod, vars, gen);
        std::uint64_t mag;
        if (exp < 0) {
            base = unit_inverse(base);
            mag = static_cast<std::uint64_t>(-(exp + 1)) + 1;
        } else {
            mag = static_cast<std::uint64_t>(exp);
        }
        acc = acc * pow_int(base, mag % mod.pn);
    }
    return acc;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError();
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError();
    return r;
}

std::int64_t checked_pow(std::int64_t base, std::uint32_t e) {
    std::int64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r = checked_mul(r, base);
    return r;
}

IntPoly IntPoly::constant(unsigned vars, unsigned cap, std::int64_t c) {
    IntPoly f(vars, cap);
    f.add_term(Monomial::one(), c);
    return f;
}

std::int64_t IntPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

void IntPoly::add_term(const Monomial& m, std::int64_t c) {
    if (c == 0 || m.degree() > cap_) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second = checked_add(it->second, c);
        if (it->second == 0) terms_.erase(it);
    }
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    if (vars_ != o.vars_ || cap_ != o.cap_) throw ContextMismatch();
    IntPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    if (vars_ != o.vars_ || cap_ != o.cap_) throw ContextMismatch();
    IntPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, checked_mul(c, -1));
    return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (vars_ != o.vars_ || cap_ != o.cap_) throw ContextMismatch();
    IntPoly r(vars_, cap_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            if (ma.degree() + mb.degree() > cap_) continue;
            r.add_term(ma * mb, checked_mul(ca, cb));
        }
    }
    return r;
}

IntPoly IntPoly::divided_exact(std::int64_t d) const {
    IntPoly r(vars_, cap_);
    for (const auto& [m, c] : terms_) {
        if (c % d != 0)
            throw ShapeMismatch("coefficient " + std::to_string(c) +
                                " not divisible by " + std::to_string(d));
        r.add_term(m, c / d);
    }
    return r;
}

Poly IntPoly::reduced(Modulus mod) const {
    Poly r(mod, vars_);
    for (const auto& [m, c] : terms_) r.add_term(m, canon(c, mod.pn));
    return r;
}

std::string IntPoly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        if (m.is_one())
            s += std::to_string(c);
        else if (c == 1)
            s += m.str();
        else
            s += std::to_string(c) + "*" + m.str();
    }
    return s;
}

namespace {

IntPoly int_pow(const IntPoly& u, std::uint64_t e) {
    IntPoly acc = IntPoly::one(u.vars(), u.degree_cap());
    IntPoly base = u;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

}  // namespace

IntPoly expand_word_int(const GroupWord& w, std::int64_t scale, unsigned vars,
                        unsigned degree_cap) {
    IntPoly acc = IntPoly::one(vars, degree_cap);
    for (const auto& [gen, exp] : w) {
        if (exp == 0) continue;
        if (gen >= vars) throw UsageError("generator index out of range");
        IntPoly base(vars, degree_cap);
        if (exp > 0) {
            base.add_term(Monomial::one(), 1);
            base.add_term(Monomial::var(gen), scale);
        } else {
            // Truncated geometric series: exact inverse in the quotient by
            // degrees above the cap.
            std::int64_t c = 1;
            Monomial m = Monomial::one();
            for (unsigned j = 0; j <= degree_cap; ++j) {
                base.add_term(m, c);
                c = checked_mul(c, -scale);
                m = m * Monomial::var(gen);
            }
        }
        std::uint64_t mag = exp > 0 ? static_cast<std::uint64_t>(exp)
                                    : static_cast<std::uint64_t>(-(exp + 1)) + 1;
        acc = acc * int_pow(base, mag);
    }
    return acc;
}

IntPoly magnus_expand(const GroupWord& w, unsigned vars, unsigned degree_cap) {
    return expand_word_int(w, 1, vars, degree_cap);
}

unsigned p_class(const GroupWord& w, std::uint32_t p, unsigned nmax, unsigned vars) {
    if (nmax < 1) throw UsageError("nmax must be >= 1");
    // Membership at level n only needs degrees < n: higher monomials of the
    // p-scaled expansion carry p^n automatically.
    unsigned cls = 1;
    for (unsigned n = 2; n <= nmax; ++n) {
        IntPoly f = expand_word_int(w, p, vars, n - 1);
        std::int64_t pn = checked_pow(p, n);
        bool member = true;
        for (const auto& [m, c] : f.terms()) {
            std::int64_t want = m.is_one() ? 1 : 0;
            if ((c - want) % pn != 0) {
                member = false;
                break;
            }
        }
        if (!member) break;
        cls = n;
    }
    return cls;
}

}  // namespace higman
