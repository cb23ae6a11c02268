#include "higman/gamma.hpp"

#include <deque>
#include <unordered_set>

namespace higman {

GammaElement::GammaElement(Poly nf, const RewriteSystem& sys) : nf_(std::move(nf)) {
    if (!sys.is_terminal(nf_))
        throw ShapeMismatch("gamma element is not in normal form");
    if (nf_.coeff(Monomial::one()) != 1)
        throw ShapeMismatch("gamma element has constant term != 1");
    for (const auto& [m, c] : nf_.terms())
        if (!m.is_one() && c % nf_.modulus().p != 0)
            throw ShapeMismatch("gamma element has a non-p-divisible coefficient");
}

GammaContext GammaContext::make(std::uint32_t p, std::uint32_t n, std::uint64_t k) {
    if (p == 2)
        throw UsageError("gamma requires odd p; p = 2 has no termination guarantee");
    Modulus mod = Modulus::make(p, n);
    KExp ke = KExp::make(k, mod);
    return GammaContext(RewriteSystem::make(mod, ke, 4, Direction::left));
}

GammaElement GammaContext::identity() const {
    return GammaElement(Poly::one(modulus(), 4), sys_);
}

GammaElement GammaContext::generator(unsigned i) const {
    if (i >= 4) throw UsageError("generator index out of range");
    // 1 + p*x_i is already terminal.
    return GammaElement(gen_unit(modulus(), 4, static_cast<Var>(i)), sys_);
}

GammaElement GammaContext::mul(const GammaElement& a, const GammaElement& b,
                               ReduceStats* stats) const {
    return GammaElement(sys_.normal_form(a.poly() * b.poly(), stats), sys_);
}

GammaElement GammaContext::inv(const GammaElement& a) const {
    return GammaElement(sys_.normal_form(unit_inverse(a.poly())), sys_);
}

GammaElement GammaContext::pow(const GammaElement& a, const Residue& e) const {
    if (!(e.modulus() == modulus())) throw ModulusMismatch();
    GammaElement acc = identity();
    GammaElement base = a;
    std::uint64_t x = e.value();
    while (x) {
        if (x & 1) acc = mul(acc, base);
        x >>= 1;
        if (x) base = mul(base, base);
    }
    return acc;
}

std::uint64_t GammaContext::order(const GammaElement& a) const {
    GammaElement x = a;
    std::uint64_t ord = 1;
    for (std::uint32_t t = 0; t <= modulus().n; ++t) {
        if (x.is_identity()) return ord;
        x = pow(x, Residue(modulus().p, modulus()));
        ord *= modulus().p;
    }
    throw Error("element order is not a p-power; unreachable");
}

std::vector<GammaElement> GammaContext::enumerate(const std::vector<GammaElement>& gens,
                                                  std::size_t cap) const {
    std::vector<GammaElement> out{identity()};
    std::unordered_set<std::string> seen{out[0].key()};
    std::deque<GammaElement> frontier{out[0]};
    while (!frontier.empty()) {
        GammaElement e = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : gens) {
            GammaElement ne = mul(e, g);
            if (seen.insert(ne.key()).second) {
                if (out.size() + 1 > cap)
                    throw CapExceeded("subgroup enumeration exceeded cap " +
                                      std::to_string(cap));
                out.push_back(ne);
                frontier.push_back(std::move(ne));
            }
        }
    }
    return out;
}

std::unordered_set<std::string> GammaContext::enumerate_key_set(
    const std::vector<GammaElement>& gens, std::size_t cap) const {
    GammaElement id = identity();
    std::unordered_set<std::string> seen{id.key()};
    std::deque<GammaElement> frontier{id};
    while (!frontier.empty()) {
        GammaElement e = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : gens) {
            GammaElement ne = mul(e, g);
            if (seen.insert(ne.key()).second) {
                if (seen.size() > cap)
                    throw CapExceeded("subgroup enumeration exceeded cap " +
                                      std::to_string(cap));
                frontier.push_back(std::move(ne));
            }
        }
    }
    return seen;
}

bool GammaContext::check_relators() const {
    Residue k(static_cast<long long>(kexp().k()), modulus());
    for (unsigned i = 0; i < 4; ++i) {
        GammaElement ai = generator(i);
        GammaElement an = generator((i + 1) % 4);
        if (!(mul(an, ai) == mul(ai, pow(an, k)))) return false;
    }
    return true;
}

ZsReport GammaContext::zs_check(std::size_t cap) const {
    ZsReport rep;
    auto S = enumerate({generator(0), generator(2)}, cap);
    auto T = enumerate({generator(1), generator(3)}, cap);
    auto g_keys = enumerate_key_set(
        {generator(0), generator(1), generator(2), generator(3)}, cap);
    rep.size_s = S.size();
    rep.size_t_ = T.size();
    rep.size_g = g_keys.size();

    std::unordered_set<std::string> t_keys;
    for (const auto& e : T) t_keys.insert(e.key());
    std::size_t common = 0;
    for (const auto& e : S) common += t_keys.count(e.key());
    rep.intersection_trivial = common == 1;  // the identity only

    // Products s * t land in the even-then-odd basis, so each pair costs a
    // plain multiplication; uniqueness and coverage are set comparisons.
    std::unordered_set<std::string> products;
    products.reserve(S.size() * T.size() * 2);
    bool all_in_g = true;
    for (const auto& s : S)
        for (const auto& t : T) {
            std::string key = mul(s, t).key();
            all_in_g = all_in_g && g_keys.count(key) > 0;
            products.insert(std::move(key));
        }
    rep.unique_factorization = all_in_g &&
                               products.size() == S.size() * T.size() &&
                               products.size() == g_keys.size();
    return rep;
}

JacobsonReport GammaContext::jacobson_check(std::size_t cap) const {
    JacobsonReport rep;
    rep.free_size = free_two_generator_group_size(modulus(), cap);
    rep.size_s = enumerate({generator(0), generator(2)}, cap).size();
    rep.equal = rep.free_size == rep.size_s;
    return rep;
}

std::size_t free_two_generator_group_size(Modulus mod, std::size_t cap) {
    const Poly id = Poly::one(mod, 2);
    const std::vector<Poly> gens{gen_unit(mod, 2, 0), gen_unit(mod, 2, 1)};
    std::unordered_set<std::string> seen{id.str()};
    std::deque<Poly> frontier{id};
    while (!frontier.empty()) {
        Poly f = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : gens) {
            Poly nf = f * g;
            if (seen.insert(nf.str()).second) {
                if (seen.size() > cap)
                    throw CapExceeded("free group enumeration exceeded cap " +
                                      std::to_string(cap));
                frontier.push_back(std::move(nf));
            }
        }
    }
    return seen.size();
}

}  // namespace higman
