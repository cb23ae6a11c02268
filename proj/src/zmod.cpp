#include "higman/zmod.hpp"

namespace higman {

namespace {

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

Modulus Modulus::make(std::uint32_t p, std::uint32_t n) {
    if (!is_prime(p)) throw UsageError("p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw UsageError("n must be >= 1");
    std::uint64_t pn = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (pn > (std::uint64_t{1} << 62) / p)
            throw UsageError("p^n exceeds the exact 63-bit range");
        pn *= p;
    }
    return Modulus{p, n, pn};
}

std::string Modulus::str() const {
    return std::to_string(p) + "^" + std::to_string(n);
}

Residue::Residue(long long value, Modulus m) : m_(m) {
    long long r = value % static_cast<long long>(m.pn);
    if (r < 0) r += static_cast<long long>(m.pn);
    v_ = static_cast<std::uint64_t>(r);
}

Residue Residue::operator+(const Residue& o) const {
    if (!(m_ == o.m_)) throw ModulusMismatch();
    return Residue(static_cast<long long>((v_ + o.v_) % m_.pn), m_);
}

Residue Residue::operator-(const Residue& o) const {
    if (!(m_ == o.m_)) throw ModulusMismatch();
    return Residue(static_cast<long long>((v_ + m_.pn - o.v_) % m_.pn), m_);
}

Residue Residue::operator*(const Residue& o) const {
    if (!(m_ == o.m_)) throw ModulusMismatch();
    return Residue(static_cast<long long>(mulmod(v_, o.v_, m_.pn)), m_);
}

Residue Residue::operator-() const {
    return Residue(static_cast<long long>((m_.pn - v_) % m_.pn), m_);
}

std::string Residue::str() const { return std::to_string(v_); }

Residue res_inv(const Residue& a) {
    if (a.value() % a.modulus().p == 0) throw NotAUnit();
    // Extended Euclid on (a, p^n).
    long long r0 = static_cast<long long>(a.modulus().pn);
    long long r1 = static_cast<long long>(a.value());
    long long s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    return Residue(s0, a.modulus());
}

std::uint32_t vp_value(std::uint64_t v, const Modulus& m) {
    if (v == 0) return m.n;
    std::uint32_t e = 0;
    while (e < m.n && v % m.p == 0) {
        v /= m.p;
        ++e;
    }
    return e;
}

std::uint32_t vp(const Residue& a) { return vp_value(a.value(), a.modulus()); }

std::uint64_t modpow(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) acc = mulmod(acc, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return acc;
}

KExp KExp::make(std::uint64_t k, Modulus m) {
    if (k < 2) throw UsageError("k must be >= 2");
    if (k > (std::uint64_t{1} << 31))
        throw UsageError("k exceeds the supported range");
    if ((k - 1) % m.p != 0)
        throw UsageError("p must divide k-1 (got p=" + std::to_string(m.p) +
                         ", k=" + std::to_string(k) + ")");
    // k = 1 mod p makes k a unit; its order mod p^n is a power of p.
    std::uint64_t ord = 1;
    for (std::uint32_t t = 0; t < m.n; ++t) {
        if (modpow(k, ord, m.pn) == 1) return KExp(k, m, ord);
        ord *= m.p;
    }
    if (modpow(k, ord, m.pn) == 1) return KExp(k, m, ord);
    throw Error("order of k is not a p-power; unreachable for p | k-1");
}

Residue KExp::pow(const Residue& r) const {
    if (!(r.modulus() == m_)) throw ModulusMismatch();
    return Residue(static_cast<long long>(modpow(k_, r.value() % order_, m_.pn)), m_);
}

Residue KExp::pow_signed(long long e) const {
    long long r = e % static_cast<long long>(order_);
    if (r < 0) r += static_cast<long long>(order_);
    return Residue(static_cast<long long>(modpow(k_, static_cast<std::uint64_t>(r), m_.pn)), m_);
}

}  // namespace higman
