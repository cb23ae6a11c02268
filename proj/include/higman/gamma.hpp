#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "higman/rewrite.hpp"

namespace higman {

// An element of the finite group Gamma_I: a normal-form unit 1 + p*(...).
// The normal form is a complete invariant of the coset, so equality and
// hashing go through the polynomial (its canonical text form as key).
class GammaElement {
public:
    explicit GammaElement(Poly nf, const RewriteSystem& sys);

    const Poly& poly() const { return nf_; }
    bool is_identity() const { return nf_.is_one(); }
    std::string key() const { return nf_.str(); }

    friend bool operator==(const GammaElement&, const GammaElement&) = default;

private:
    Poly nf_;
};

struct ZsReport {
    std::size_t size_s = 0;
    std::size_t size_t_ = 0;
    std::size_t size_g = 0;
    bool intersection_trivial = false;
    bool unique_factorization = false;
};

struct JacobsonReport {
    std::size_t free_size = 0;
    std::size_t size_s = 0;
    bool equal = false;
};

class GammaContext {
public:
    // Requires p odd: group arithmetic rests on unique normal forms.
    static GammaContext make(std::uint32_t p, std::uint32_t n, std::uint64_t k);

    const RewriteSystem& system() const { return sys_; }
    const Modulus& modulus() const { return sys_.modulus(); }
    const KExp& kexp() const { return sys_.kexp(); }

    GammaElement identity() const;
    GammaElement generator(unsigned i) const;

    GammaElement mul(const GammaElement& a, const GammaElement& b,
                     ReduceStats* stats = nullptr) const;
    GammaElement inv(const GammaElement& a) const;
    GammaElement pow(const GammaElement& a, const Residue& e) const;

    // Exact order; always a power of p.
    std::uint64_t order(const GammaElement& a) const;

    // Breadth-first closure under right multiplication by the generators.
    // Throws CapExceeded when the subgroup outgrows cap.
    std::vector<GammaElement> enumerate(const std::vector<GammaElement>& gens,
                                        std::size_t cap) const;

    // Same closure keeping only canonical keys; the memory-light variant
    // for large subgroups.
    std::unordered_set<std::string> enumerate_key_set(
        const std::vector<GammaElement>& gens, std::size_t cap) const;

    // a_{i+1} a_i = a_i a_{i+1}^k for all i mod 4.
    bool check_relators() const;

    ZsReport zs_check(std::size_t cap) const;
    JacobsonReport jacobson_check(std::size_t cap) const;

private:
    explicit GammaContext(RewriteSystem sys) : sys_(std::move(sys)) {}

    RewriteSystem sys_;
};

// Size of the group generated by 1 + p*y0, 1 + p*y1 in the relator-free
// two-variable ring; finite because degree-n monomials of p-scaled
// polynomials vanish mod p^n.
std::size_t free_two_generator_group_size(Modulus mod, std::size_t cap);

}  // namespace higman
