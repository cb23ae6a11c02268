#include "higman/zappa.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace higman {

namespace {

bool is_odd_gen(unsigned g) { return g % 2 == 1; }

// Prepends a_g^e onto an alternating block list, merging with the head
// block and dropping it if the merged exponent vanishes.
void prepend(std::deque<Block>& blocks, unsigned gen, std::uint64_t exp,
             std::uint64_t pn) {
    exp %= pn;
    if (exp == 0) return;
    if (!blocks.empty() && blocks.front().gen == gen) {
        std::uint64_t merged = (blocks.front().exp + exp) % pn;
        if (merged == 0)
            blocks.pop_front();
        else
            blocks.front().exp = merged;
        return;
    }
    blocks.push_front(Block{gen, exp});
}

}  // namespace

WordContext WordContext::make(std::uint32_t p, std::uint32_t n, std::uint64_t k,
                              bool validate) {
    Modulus mod = Modulus::make(p, n);
    WordContext ctx(KExp::make(k, mod));
    if (validate && p != 2) {
        // The a3 rules are derived, not quoted; check all four blockwise
        // identities against the image in Gamma_I (exhaustively for small
        // p^n, on a fixed grid otherwise).
        GammaContext gc = GammaContext::make(p, n, k);
        const std::uint64_t pn = mod.pn;
        const std::uint64_t step = pn <= 32 ? 1 : pn / 16;
        for (unsigned odd : {1u, 3u})
            for (unsigned even : {0u, 2u})
                for (std::uint64_t m = 1; m < pn; m += step)
                    for (std::uint64_t r = 1; r < pn; r += step) {
                        auto [w, moved] = ctx.push(
                            Block{odd, m}, {Block{even, r}});
                        GammaElement lhs = gc.mul(
                            gc.pow(gc.generator(odd), Residue(static_cast<long long>(m), mod)),
                            gc.pow(gc.generator(even), Residue(static_cast<long long>(r), mod)));
                        GammaElement rhs = gc.pow(
                            gc.generator(moved.gen),
                            Residue(static_cast<long long>(moved.exp), mod));
                        for (auto it = w.rbegin(); it != w.rend(); ++it)
                            rhs = gc.mul(
                                gc.pow(gc.generator(it->gen),
                                       Residue(static_cast<long long>(it->exp), mod)),
                                rhs);
                        if (!(lhs == rhs))
                            throw ShapeMismatch("block commutation rule fails under hom");
                    }
    }
    return ctx;
}

std::pair<std::vector<Block>, Block> WordContext::push(
    Block odd_letter, const std::vector<Block>& w) const {
    if (!is_odd_gen(odd_letter.gen) || odd_letter.exp == 0)
        throw UsageError("push expects a nonzero odd-generator letter");
    const Modulus& mod = ke_.modulus();
    std::vector<Block> out;
    out.reserve(w.size());
    Residue m(static_cast<long long>(odd_letter.exp), mod);
    for (const Block& b : w) {
        Residue r(static_cast<long long>(b.exp), mod);
        const bool fixes_even = (odd_letter.gen == 1) == (b.gen == 0);
        if (fixes_even) {
            // a_odd^m a_even^r = a_even^r a_odd^(m k^r)
            m = m * ke_.pow(r);
            out.push_back(b);
        } else {
            // a_odd^m a_even^r = a_even^(r k^-m) a_odd^m
            Residue scaled = r * res_inv(ke_.pow(m));
            out.push_back(Block{b.gen, scaled.value()});
        }
    }
    // Twisting by units never kills a block.
    return {std::move(out), Block{odd_letter.gen, m.value()}};
}

WordElement WordContext::normalize(const RawWord& raw) const {
    const std::uint64_t pn = ke_.modulus().pn;
    std::deque<Block> even, odd;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
        long long e = it->second % static_cast<long long>(pn);
        if (e < 0) e += static_cast<long long>(pn);
        if (e == 0) continue;
        unsigned gen = it->first;
        if (gen > 3) throw UsageError("generator index out of range");
        if (is_odd_gen(gen)) {
            auto [w, moved] = push(Block{gen, static_cast<std::uint64_t>(e)},
                                   {even.begin(), even.end()});
            even.assign(w.begin(), w.end());
            prepend(odd, moved.gen, moved.exp, pn);
        } else {
            prepend(even, gen, static_cast<std::uint64_t>(e), pn);
        }
    }
    return WordElement({even.begin(), even.end()}, {odd.begin(), odd.end()});
}

namespace {

void append_raw(RawWord& raw, const WordElement& a) {
    for (const Block& b : a.even()) raw.emplace_back(b.gen, static_cast<long long>(b.exp));
    for (const Block& b : a.odd()) raw.emplace_back(b.gen, static_cast<long long>(b.exp));
}

}  // namespace

WordElement WordContext::mul(const WordElement& a, const WordElement& b) const {
    RawWord raw;
    raw.reserve(a.even().size() + a.odd().size() + b.even().size() + b.odd().size());
    append_raw(raw, a);
    append_raw(raw, b);
    return normalize(raw);
}

WordElement WordContext::inv(const WordElement& a) const {
    RawWord raw;
    append_raw(raw, a);
    std::reverse(raw.begin(), raw.end());
    for (auto& [gen, exp] : raw) exp = -exp;
    return normalize(raw);
}

GammaElement WordContext::hom_to_gamma(const WordElement& a,
                                       const GammaContext& gc) const {
    if (!(gc.modulus() == ke_.modulus()) || gc.kexp().k() != ke_.k())
        throw ContextMismatch();
    GammaElement acc = gc.identity();
    auto mul_block = [&](const Block& b) {
        acc = gc.mul(acc, gc.pow(gc.generator(b.gen),
                                 Residue(static_cast<long long>(b.exp), ke_.modulus())));
    };
    for (const Block& b : a.even()) mul_block(b);
    for (const Block& b : a.odd()) mul_block(b);
    return acc;
}

std::string WordContext::str(const WordElement& a) const {
    std::string s;
    auto emit = [&](const Block& b) {
        if (!s.empty()) s += ", ";
        s += "a" + std::to_string(b.gen) + "^" + std::to_string(b.exp);
    };
    for (const Block& b : a.even()) emit(b);
    for (const Block& b : a.odd()) emit(b);
    return s;
}

WordElement WordContext::parse(std::string_view text) const {
    RawWord raw;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ','))
            ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != 'a')
            throw ParseError("word parse error at offset " + std::to_string(pos));
        ++pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ParseError("expected generator index");
        unsigned gen = static_cast<unsigned>(text[pos] - '0');
        ++pos;
        long long exp = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            bool neg = false;
            if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
                neg = text[pos] == '-';
                ++pos;
            }
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
                throw ParseError("expected exponent");
            exp = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                exp = exp * 10 + (text[pos] - '0');
                if (exp > (1LL << 40)) throw ParseError("exponent too large");
                ++pos;
            }
            if (neg) exp = -exp;
        }
        raw.emplace_back(gen, exp);
        skip_ws();
    }
    return normalize(raw);
}

}  // namespace higman
