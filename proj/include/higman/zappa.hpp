#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "higman/gamma.hpp"
#include "higman/zmod.hpp"

namespace higman {

// One block a_g^e of a normal-form word; e is a nonzero residue mod p^n.
struct Block {
    unsigned gen = 0;
    std::uint64_t exp = 0;
};

// Normal form of the word-level group: an alternating word in the even
// generators a0, a2 followed by an alternating word in the odd generators
// a1, a3, all exponents in Z/p^n. The empty element is the identity.
class WordElement {
public:
    WordElement() = default;
    WordElement(std::vector<Block> even, std::vector<Block> odd)
        : even_(std::move(even)), odd_(std::move(odd)) {}

    const std::vector<Block>& even() const { return even_; }
    const std::vector<Block>& odd() const { return odd_; }
    bool is_identity() const { return even_.empty() && odd_.empty(); }

    friend bool operator==(const WordElement& a, const WordElement& b) {
        auto eq = [](const std::vector<Block>& x, const std::vector<Block>& y) {
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i].gen != y[i].gen || x[i].exp != y[i].exp) return false;
            return true;
        };
        return eq(a.even_, b.even_) && eq(a.odd_, b.odd_);
    }

private:
    std::vector<Block> even_;
    std::vector<Block> odd_;
};

using RawWord = std::vector<std::pair<unsigned, long long>>;

class WordContext {
public:
    // When validate is set (and p is odd) the four block-commutation rules
    // are checked against the image in Gamma_I at the same parameters.
    static WordContext make(std::uint32_t p, std::uint32_t n, std::uint64_t k,
                            bool validate = true);

    const Modulus& modulus() const { return ke_.modulus(); }
    const KExp& kexp() const { return ke_; }

    // Moves one odd-generator letter from the left of an even word to its
    // right, twisting exponents blockwise:
    //   a1^m a0^r = a0^r a1^(m k^r)      a1^m a2^r = a2^(r k^-m) a1^m
    //   a3^m a0^r = a0^(r k^-m) a3^m     a3^m a2^r = a2^r a3^(m k^r)
    std::pair<std::vector<Block>, Block> push(Block odd_letter,
                                              const std::vector<Block>& w) const;

    WordElement normalize(const RawWord& raw) const;
    WordElement mul(const WordElement& a, const WordElement& b) const;
    WordElement inv(const WordElement& a) const;

    GammaElement hom_to_gamma(const WordElement& a, const GammaContext& gc) const;

    // Word grammar: comma-separated "a<i>^<exp>" tokens; the empty string
    // is the identity.
    std::string str(const WordElement& a) const;
    WordElement parse(std::string_view text) const;

private:
    explicit WordContext(KExp ke) : ke_(std::move(ke)) {}

    KExp ke_;
};

}  // namespace higman
