#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "higman/ncpoly.hpp"
#include "higman/zmod.hpp"

namespace higman {

// Relators g_i = (a_{i+1} a_i - a_i a_{i+1}^k) / p^2 under a_i = 1 + p*x_i,
// reduced mod p^n. Each has the shape
//   x_{i+1} x_i - x_i x_{i+1} + Q0(x_{i+1}) + p * x_i * Q0(x_{i+1}).
struct RelatorSet {
    Poly q0;              // Q0 as a polynomial in one variable
    std::vector<Poly> g;  // one relator (2-variable system) or four
};

// Q0(y) = -[ ((k-1)/p) y + sum_{j=2..k} C(k,j) p^(j-2) y^j ] mod p^n,
// binomials taken over exact integers before reduction.
Poly build_q0(const KExp& ke);

RelatorSet build_relators(Modulus mod, const KExp& ke, unsigned vars);

// left: normal forms are (even-letter block)(odd-letter block);
// right: the mirror image.
enum class Direction { left, right };

struct RewriteRule {
    Monomial lhs;  // a two-letter word
    Poly rhs;      // lhs - rhs is (up to sign) one of the relators
};

// Termination measure of a term, compared lexicographically:
//   torder  — minimal j with p^j * t = 0;
//   nodd    — letters of the moving parity (odd letters for the left
//             4-variable system, even for right; x0 count in the
//             2-variable system, either direction);
//   defect  — inversions, i.e. pairs (moving-parity letter, other-parity
//             letter) in that order.
struct TermMeasure {
    std::uint32_t torder = 0;
    std::uint64_t nodd = 0;
    std::uint64_t defect = 0;

    friend auto operator<=>(const TermMeasure&, const TermMeasure&) = default;
};

struct ReduceStats {
    std::uint64_t steps = 0;
    std::uint64_t measure_violations = 0;
};

struct Site {
    Monomial mono;
    std::size_t pos = 0;
    std::size_t rule = 0;
};

struct StepTrace {
    Monomial mono;
    std::uint64_t coeff = 0;
    TermMeasure measure;
    std::size_t rule = 0;
};

class RewriteSystem {
public:
    static RewriteSystem make(Modulus mod, KExp ke, unsigned vars,
                              Direction dir = Direction::left);

    const Modulus& modulus() const { return mod_; }
    const KExp& kexp() const { return ke_; }
    unsigned vars() const { return vars_; }
    Direction direction() const { return dir_; }
    const RelatorSet& relators() const { return rel_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }

    std::uint64_t iteration_cap() const { return iteration_cap_; }
    void set_iteration_cap(std::uint64_t cap) { iteration_cap_ = cap; }

    // Index of the rule whose lhs sits at position pos of m, or -1.
    int rule_at(const Monomial& m, std::size_t pos) const;
    bool is_terminal(const Poly& f) const;
    std::vector<Site> sites(const Poly& f) const;

    TermMeasure measure(const Monomial& m, std::uint64_t coeff) const;

    Poly one_step(const Poly& f, const Site& s, ReduceStats* stats = nullptr) const;

    // Deterministic strategy: leftmost redex of the largest monomial.
    // Throws IterationCapExceeded past the step cap (reachable only for
    // p = 2, where no termination measure is claimed).
    Poly normal_form(const Poly& f, ReduceStats* stats = nullptr,
                     std::vector<StepTrace>* trace = nullptr) const;

    // Uniformly random site each step; same normal form for p odd.
    Poly normal_form_random(const Poly& f, std::mt19937_64& rng,
                            ReduceStats* stats = nullptr) const;

    bool ideal_member(const Poly& f, ReduceStats* stats = nullptr) const;

private:
    RewriteSystem(Modulus mod, KExp ke, unsigned vars, Direction dir)
        : mod_(mod), ke_(ke), vars_(vars), dir_(dir), rel_{Poly(mod, 1), {}} {}

    void apply_step(Poly& f, const Site& s, ReduceStats* stats,
                    std::vector<StepTrace>* trace) const;
    std::optional<Site> canonical_site(const Poly& f) const;

    Modulus mod_;
    KExp ke_;
    unsigned vars_;
    Direction dir_;
    RelatorSet rel_;
    std::vector<RewriteRule> rules_;
    int lhs_table_[16] = {};  // (a * vars + b) -> rule index + 1, 0 = none
    std::uint64_t iteration_cap_ = 10'000'000;
};

struct Divergence {
    std::string input;
    std::string site_a;
    std::string site_b;
    std::string nf_a;
    std::string nf_b;
};

struct ConfluenceReport {
    std::uint64_t words_checked = 0;
    std::uint64_t site_pairs_checked = 0;
    std::uint64_t random_words_checked = 0;
    std::uint64_t random_reductions = 0;
    std::uint64_t divergences_found = 0;
    std::vector<Divergence> divergences;  // at most 16 samples retained
    ReduceStats stats;
};

// Exhaustive over all monomials of degree <= exhaustive_degree (all
// first-step site pairs), plus random higher-degree monomials reduced
// under randomized strategies.
ConfluenceReport check_confluence(const RewriteSystem& sys, unsigned exhaustive_degree,
                                  std::uint64_t random_samples, unsigned random_degree,
                                  unsigned strategies_per_word, std::uint64_t seed);

}  // namespace higman
