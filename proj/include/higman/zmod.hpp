#pragma once

#include <cstdint>
#include <string>

#include "higman/errors.hpp"

namespace higman {

// The modulus p^n. p is checked prime by trial division; p^n is computed
// exactly and rejected if it would overflow the 63-bit working range.
struct Modulus {
    std::uint32_t p = 0;
    std::uint32_t n = 0;
    std::uint64_t pn = 0;

    static Modulus make(std::uint32_t p, std::uint32_t n);

    friend bool operator==(const Modulus&, const Modulus&) = default;
    std::string str() const;  // "3^2"
};

// An element of Z/p^n, stored canonically in [0, p^n).
class Residue {
public:
    Residue(long long value, Modulus m);

    std::uint64_t value() const { return v_; }
    const Modulus& modulus() const { return m_; }
    bool is_zero() const { return v_ == 0; }

    Residue operator+(const Residue& o) const;
    Residue operator-(const Residue& o) const;
    Residue operator*(const Residue& o) const;
    Residue operator-() const;
    friend bool operator==(const Residue&, const Residue&) = default;

    std::string str() const;

private:
    std::uint64_t v_;
    Modulus m_;
};

// Multiplicative inverse mod p^n; throws NotAUnit when p divides a.
Residue res_inv(const Residue& a);

// p-adic valuation, capped at n; vp(0) = n by convention.
std::uint32_t vp(const Residue& a);
std::uint32_t vp_value(std::uint64_t v, const Modulus& m);

// a^e mod m for plain integers.
std::uint64_t modpow(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// The exponential base k with the standing hypothesis p | (k-1), which
// makes r -> k^r a well-defined function Z/p^n -> Z/p^n.
class KExp {
public:
    static KExp make(std::uint64_t k, Modulus m);

    std::uint64_t k() const { return k_; }
    const Modulus& modulus() const { return m_; }

    // Multiplicative order of k mod p^n; always a power of p dividing
    // p^(n-1).
    std::uint64_t order() const { return order_; }

    // k^r for a residue exponent, evaluated as k^(r mod order).
    Residue pow(const Residue& r) const;

    // k^e for a signed integer exponent.
    Residue pow_signed(long long e) const;

private:
    KExp(std::uint64_t k, Modulus m, std::uint64_t order)
        : k_(k), m_(m), order_(order) {}

    std::uint64_t k_;
    Modulus m_;
    std::uint64_t order_;
};

inline std::uint64_t korder(const KExp& ke) { return ke.order(); }
inline Residue kpow(const KExp& ke, const Residue& r) { return ke.pow(r); }

}  // namespace higman
