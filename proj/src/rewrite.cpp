#include "higman/rewrite.hpp"

#include <algorithm>

namespace higman {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

Monomial power_word(Var v, unsigned j) {
    return Monomial(std::vector<Var>(j, v));
}

// Image of the one-variable polynomial q under x0 -> x_target, widened to
// the full variable set.
Poly substitute_single(const Poly& q, unsigned vars, Var target) {
    Poly r(q.modulus(), vars);
    for (const auto& [m, c] : q.terms())
        r.add_term(power_word(target, static_cast<unsigned>(m.degree())), c);
    return r;
}

bool is_even_letter(Var v) { return v % 2 == 0; }

}  // namespace

Poly build_q0(const KExp& ke) {
    const Modulus& mod = ke.modulus();
    Poly q(mod, 1);
    const std::uint64_t k = ke.k();
    // Linear term: (k-1)/p, exact by the standing hypothesis p | k-1.
    std::uint64_t linear = (k - 1) / mod.p % mod.pn;
    q.add_term(power_word(0, 1), (mod.pn - linear) % mod.pn);
    // Higher terms C(k,j) p^(j-2) vanish mod p^n once j >= n+2.
    std::int64_t binom = static_cast<std::int64_t>(k);  // C(k,1)
    std::uint64_t ppow = 1;                             // p^(j-2)
    for (std::uint64_t j = 2; j <= k && j <= mod.n + 1; ++j) {
        binom = checked_mul(binom, static_cast<std::int64_t>(k - j + 1)) /
                static_cast<std::int64_t>(j);
        std::uint64_t c = mulmod(static_cast<std::uint64_t>(binom) % mod.pn, ppow, mod.pn);
        q.add_term(power_word(0, static_cast<unsigned>(j)), (mod.pn - c) % mod.pn);
        ppow = mulmod(ppow, mod.p, mod.pn);
    }
    return q;
}

RelatorSet build_relators(Modulus mod, const KExp& ke, unsigned vars) {
    if (vars != 2 && vars != 4) throw UsageError("relator systems have 2 or 4 variables");
    if (!(ke.modulus() == mod)) throw ModulusMismatch();

    RelatorSet rel{build_q0(ke), {}};
    const std::uint64_t k = ke.k();
    const std::int64_t p2 = static_cast<std::int64_t>(mod.p) * mod.p;
    const unsigned count = vars == 2 ? 1 : 4;
    const unsigned cap = static_cast<unsigned>(k) + 2;

    for (unsigned i = 0; i < count; ++i) {
        const Var lo = static_cast<Var>(i);
        const Var hi = static_cast<Var>((i + 1) % vars);
        // a_{i+1} a_i - a_i a_{i+1}^k over exact integers.
        IntPoly lhs = expand_word_int({{hi, 1}, {lo, 1}}, mod.p, vars, cap);
        IntPoly rhs = expand_word_int({{lo, 1}, {hi, static_cast<long long>(k)}},
                                      mod.p, vars, cap);
        IntPoly diff = lhs - rhs;
        IntPoly scaled = diff.divided_exact(p2);  // ShapeMismatch if not exact
        std::int64_t lead = scaled.coeff(Monomial::var(hi) * Monomial::var(lo));
        if (lead % mod.p == 0)
            throw ShapeMismatch("normalization exponent alpha != 2");
        Poly g = scaled.reduced(mod);

        // The relator must match its closed form in Q0 exactly.
        Poly q0v = substitute_single(rel.q0, vars, hi);
        Poly expected = Poly::monomial(mod, vars, Monomial::var(hi) * Monomial::var(lo)) -
                        Poly::monomial(mod, vars, Monomial::var(lo) * Monomial::var(hi)) +
                        q0v +
                        mul_monomial_sandwich(Monomial::var(lo), q0v, Monomial::one())
                            .scaled(static_cast<long long>(mod.p));
        if (!(g == expected))
            throw ShapeMismatch("relator g" + std::to_string(i) +
                                " does not match its closed form");
        rel.g.push_back(std::move(g));
    }
    return rel;
}

RewriteSystem RewriteSystem::make(Modulus mod, KExp ke, unsigned vars, Direction dir) {
    RewriteSystem sys(mod, ke, vars, dir);
    sys.rel_ = build_relators(mod, ke, vars);

    const unsigned count = vars == 2 ? 1 : 4;
    for (unsigned i = 0; i < count; ++i) {
        const Var lo = static_cast<Var>(i);
        const Var hi = static_cast<Var>((i + 1) % vars);
        // The redex starts with the moving-parity letter: odd first for the
        // left system, even first for the right one.
        const bool hi_first = (dir == Direction::left) == !is_even_letter(hi);
        const Var a = hi_first ? hi : lo;
        const Var b = hi_first ? lo : hi;

        Poly q0v = substitute_single(sys.rel_.q0, vars, hi);
        Poly twist = q0v + mul_monomial_sandwich(Monomial::var(lo), q0v, Monomial::one())
                               .scaled(static_cast<long long>(mod.p));
        Poly swap = Poly::monomial(mod, vars, Monomial::var(b) * Monomial::var(a));
        Poly rhs = hi_first ? swap - twist : swap + twist;

        // lhs - rhs must rearrange the relator exactly.
        Monomial lhs = Monomial::var(a) * Monomial::var(b);
        Poly diff = Poly::monomial(mod, vars, lhs) - rhs;
        Poly want = hi_first ? sys.rel_.g[i] : -sys.rel_.g[i];
        if (!(diff == want))
            throw ShapeMismatch("rule " + std::to_string(i) +
                                " is not a rearrangement of its relator");

        sys.lhs_table_[a * vars + b] = static_cast<int>(sys.rules_.size()) + 1;
        sys.rules_.push_back(RewriteRule{lhs, std::move(rhs)});
    }
    return sys;
}

int RewriteSystem::rule_at(const Monomial& m, std::size_t pos) const {
    const auto& w = m.word();
    if (pos + 1 >= w.size()) return -1;
    return lhs_table_[w[pos] * vars_ + w[pos + 1]] - 1;
}

bool RewriteSystem::is_terminal(const Poly& f) const {
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        for (std::size_t pos = 0; pos + 1 < m.word().size(); ++pos)
            if (rule_at(m, pos) >= 0) return false;
    }
    return true;
}

std::vector<Site> RewriteSystem::sites(const Poly& f) const {
    std::vector<Site> out;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        for (std::size_t pos = 0; pos + 1 < m.word().size(); ++pos) {
            int r = rule_at(m, pos);
            if (r >= 0) out.push_back(Site{m, pos, static_cast<std::size_t>(r)});
        }
    }
    return out;
}

TermMeasure RewriteSystem::measure(const Monomial& m, std::uint64_t coeff) const {
    TermMeasure t;
    t.torder = mod_.n - vp_value(coeff, mod_);
    const auto& w = m.word();
    if (vars_ == 2) {
        for (Var v : w) t.nodd += (v == 0);
    } else {
        const bool count_odd = dir_ == Direction::left;
        for (Var v : w) t.nodd += (is_even_letter(v) != count_odd);
    }
    // Inversions: moving-parity letter before other-parity letter.
    const bool moving_odd = dir_ == Direction::left;
    std::uint64_t moving_seen = 0;
    for (Var v : w) {
        if (is_even_letter(v) != moving_odd)
            moving_seen++;
        else
            t.defect += moving_seen;
    }
    return t;
}

void RewriteSystem::apply_step(Poly& f, const Site& s, ReduceStats* stats,
                               std::vector<StepTrace>* trace) const {
    const std::uint64_t c = f.coeff(s.mono);
    if (c == 0) throw SiteInvalid();
    if (s.rule >= rules_.size() ||
        rule_at(s.mono, s.pos) != static_cast<int>(s.rule))
        throw SiteInvalid();

    const auto& w = s.mono.word();
    const TermMeasure parent = measure(s.mono, c);
    if (trace) trace->push_back(StepTrace{s.mono, c, parent, s.rule});

    f.add_term(s.mono, mod_.pn - c);
    std::vector<Var> buf;
    for (const auto& [rm, rc] : rules_[s.rule].rhs.terms()) {
        std::uint64_t c2 = mulmod(c, rc, mod_.pn);
        if (c2 == 0) continue;
        buf.clear();
        buf.reserve(w.size() - 2 + rm.degree());
        buf.insert(buf.end(), w.begin(), w.begin() + static_cast<long>(s.pos));
        buf.insert(buf.end(), rm.word().begin(), rm.word().end());
        buf.insert(buf.end(), w.begin() + static_cast<long>(s.pos) + 2, w.end());
        Monomial m2(buf);
        if (stats && !(measure(m2, c2) < parent)) stats->measure_violations++;
        f.add_term(std::move(m2), c2);
    }
    if (stats) stats->steps++;
}

std::optional<Site> RewriteSystem::canonical_site(const Poly& f) const {
    const auto& terms = f.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        for (std::size_t pos = 0; pos + 1 < it->first.word().size(); ++pos) {
            int r = rule_at(it->first, pos);
            if (r >= 0) return Site{it->first, pos, static_cast<std::size_t>(r)};
        }
    }
    return std::nullopt;
}

Poly RewriteSystem::one_step(const Poly& f, const Site& s, ReduceStats* stats) const {
    Poly r = f;
    apply_step(r, s, stats, nullptr);
    return r;
}

Poly RewriteSystem::normal_form(const Poly& f, ReduceStats* stats,
                                std::vector<StepTrace>* trace) const {
    Poly r = f;
    std::uint64_t steps = 0;
    while (auto s = canonical_site(r)) {
        if (++steps > iteration_cap_)
            throw IterationCapExceeded("normal form exceeded " +
                                       std::to_string(iteration_cap_) + " steps");
        apply_step(r, *s, stats, trace);
    }
    return r;
}

Poly RewriteSystem::normal_form_random(const Poly& f, std::mt19937_64& rng,
                                       ReduceStats* stats) const {
    Poly r = f;
    // Redex positions per monomial, maintained incrementally so the uniform
    // site choice does not rescan the whole polynomial every step.
    std::map<Monomial, std::vector<std::uint16_t>, DegLexLess> redex;
    std::size_t total = 0;

    auto scan = [&](const Monomial& m) {
        std::vector<std::uint16_t> pos;
        for (std::size_t i = 0; i + 1 < m.word().size(); ++i)
            if (rule_at(m, i) >= 0) pos.push_back(static_cast<std::uint16_t>(i));
        return pos;
    };
    auto refresh = [&](const Monomial& m) {
        auto it = redex.find(m);
        std::size_t had = it == redex.end() ? 0 : it->second.size();
        std::vector<std::uint16_t> now;
        if (r.coeff(m) != 0) now = scan(m);
        total += now.size();
        total -= had;
        if (now.empty()) {
            if (it != redex.end()) redex.erase(it);
        } else if (it != redex.end()) {
            it->second = std::move(now);
        } else {
            redex.emplace(m, std::move(now));
        }
    };

    for (const auto& [m, c] : r.terms()) {
        (void)c;
        auto ps = scan(m);
        if (!ps.empty()) {
            total += ps.size();
            redex.emplace(m, std::move(ps));
        }
    }

    std::uint64_t steps = 0;
    std::vector<Var> buf;
    while (total) {
        if (++steps > iteration_cap_)
            throw IterationCapExceeded("normal form exceeded " +
                                       std::to_string(iteration_cap_) + " steps");
        std::size_t pick = rng() % total;
        auto it = redex.begin();
        while (pick >= it->second.size()) {
            pick -= it->second.size();
            ++it;
        }
        const Monomial mono = it->first;  // copy: the entry mutates below
        const std::size_t pos = it->second[pick];
        const std::size_t rule = static_cast<std::size_t>(rule_at(mono, pos));
        const std::uint64_t c = r.coeff(mono);
        const auto& w = mono.word();
        const TermMeasure parent = measure(mono, c);

        r.add_term(mono, mod_.pn - c);
        refresh(mono);
        for (const auto& [rm, rc] : rules_[rule].rhs.terms()) {
            std::uint64_t c2 = mulmod(c, rc, mod_.pn);
            if (c2 == 0) continue;
            buf.clear();
            buf.reserve(w.size() - 2 + rm.degree());
            buf.insert(buf.end(), w.begin(), w.begin() + static_cast<long>(pos));
            buf.insert(buf.end(), rm.word().begin(), rm.word().end());
            buf.insert(buf.end(), w.begin() + static_cast<long>(pos) + 2, w.end());
            Monomial m2(buf);
            if (stats && !(measure(m2, c2) < parent)) stats->measure_violations++;
            r.add_term(Monomial(m2), c2);
            refresh(m2);
        }
        if (stats) stats->steps++;
    }
    return r;
}

bool RewriteSystem::ideal_member(const Poly& f, ReduceStats* stats) const {
    return normal_form(f, stats).is_zero();
}

namespace {

void record_divergence(ConfluenceReport& rep, const Poly& input, const std::string& a,
                       const std::string& b, const Poly& nfa, const Poly& nfb) {
    rep.divergences_found++;
    if (rep.divergences.size() < 16)
        rep.divergences.push_back(
            Divergence{input.str(), a, b, nfa.str(), nfb.str()});
}

std::string site_str(const Site& s) {
    return s.mono.str() + "@" + std::to_string(s.pos) + "/r" + std::to_string(s.rule);
}

}  // namespace

ConfluenceReport check_confluence(const RewriteSystem& sys, unsigned exhaustive_degree,
                                  std::uint64_t random_samples, unsigned random_degree,
                                  unsigned strategies_per_word, std::uint64_t seed) {
    ConfluenceReport rep;
    const unsigned vars = sys.vars();

    for (unsigned d = 1; d <= exhaustive_degree; ++d) {
        std::vector<Var> w(d, 0);
        for (;;) {
            Poly f = Poly::monomial(sys.modulus(), vars, Monomial(w));
            rep.words_checked++;
            auto ss = sys.sites(f);
            if (!ss.empty()) {
                Poly nf0 = sys.normal_form(f, &rep.stats);
                std::vector<Poly> nfs;
                nfs.reserve(ss.size());
                for (const auto& s : ss)
                    nfs.push_back(sys.normal_form(sys.one_step(f, s, &rep.stats), &rep.stats));
                for (std::size_t i = 0; i < ss.size(); ++i) {
                    if (!(nfs[i] == nf0))
                        record_divergence(rep, f, site_str(ss[i]), "canonical", nfs[i], nf0);
                    for (std::size_t j = i + 1; j < ss.size(); ++j) {
                        rep.site_pairs_checked++;
                        if (!(nfs[i] == nfs[j]))
                            record_divergence(rep, f, site_str(ss[i]), site_str(ss[j]),
                                              nfs[i], nfs[j]);
                    }
                }
            }
            // next word in lexicographic order
            std::size_t i = d;
            while (i > 0 && w[i - 1] == vars - 1) w[--i] = 0;
            if (i == 0) break;
            w[i - 1]++;
        }
    }

    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < random_samples; ++s) {
        unsigned d = 1 + static_cast<unsigned>(rng() % random_degree);
        std::vector<Var> w(d);
        for (auto& v : w) v = static_cast<Var>(rng() % vars);
        Poly f = Poly::monomial(sys.modulus(), vars, Monomial(w));
        rep.random_words_checked++;
        Poly nf0 = sys.normal_form(f, &rep.stats);
        for (unsigned t = 0; t < strategies_per_word; ++t) {
            Poly nfr = sys.normal_form_random(f, rng, &rep.stats);
            rep.random_reductions++;
            if (!(nfr == nf0))
                record_divergence(rep, f, "random-strategy", "canonical", nfr, nf0);
        }
    }
    return rep;
}

}  // namespace higman
