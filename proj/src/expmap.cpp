#include "higman/expmap.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "higman/zmod.hpp"

namespace higman {

namespace {

// modulus must be p^m for a prime p.
std::uint32_t prime_base(std::uint64_t modulus) {
    if (modulus < 2) return 0;
    std::uint64_t p = 2;
    while (p * p <= modulus && modulus % p != 0) ++p;
    if (p * p > modulus) p = modulus;
    std::uint64_t m = modulus;
    while (m % p == 0) m /= p;
    if (m != 1) throw UsageError("modulus " + std::to_string(modulus) +
                                 " is not a prime power");
    return static_cast<std::uint32_t>(p);
}

std::uint64_t modinv(std::uint64_t a, std::uint64_t m) {
    long long r0 = static_cast<long long>(m), r1 = static_cast<long long>(a % m);
    long long s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw NotAUnit();
    s0 %= static_cast<long long>(m);
    if (s0 < 0) s0 += static_cast<long long>(m);
    return static_cast<std::uint64_t>(s0);
}

}  // namespace

CycleFunction CycleFunction::make(std::uint64_t modulus, std::uint64_t k,
                                  std::vector<std::uint32_t> table) {
    if (modulus < 1) throw UsageError("modulus must be >= 1");
    prime_base(modulus == 1 ? 2 : modulus);  // validates the prime-power shape
    if (table.size() != modulus)
        throw UsageError("table size does not match the modulus");
    for (std::uint32_t v : table)
        if (v >= modulus) throw UsageError("table entry out of range");
    return CycleFunction{modulus, k, std::move(table)};
}

CycleFunction CycleFunction::identity(std::uint64_t modulus, std::uint64_t k) {
    std::vector<std::uint32_t> t(modulus);
    for (std::uint64_t x = 0; x < modulus; ++x) t[x] = static_cast<std::uint32_t>(x);
    return make(modulus, k, std::move(t));
}

VerifyReport verify(const CycleFunction& f) {
    const std::uint64_t m = f.modulus;
    VerifyReport rep;
    rep.eps_den = m;

    std::vector<bool> hit(m, false);
    rep.is_bijection = true;
    for (std::uint32_t v : f.table) {
        if (hit[v]) rep.is_bijection = false;
        hit[v] = true;
    }

    rep.four_periodic = true;
    for (std::uint64_t x = 0; x < m; ++x) {
        std::uint32_t y = f.table[x];
        y = f.table[f.table[f.table[y]]];
        if (y != x) { rep.four_periodic = false; break; }
    }

    for (std::uint64_t x = 0; x < m; ++x)
        if (f.table[(x + 1) % m] ==
            static_cast<unsigned __int128>(f.k) * f.table[x] % m)
            rep.match_count++;
    rep.eps_num = m - rep.match_count;

    if (m == 1) {
        rep.breakpoints = 0;
        return rep;
    }
    // a(x) = f(x) k^-x; matches are exactly the x with a(x+1) = a(x).
    const std::uint32_t p = prime_base(m);
    if (f.k % p == 0) throw NotAUnit("k must be a unit mod the modulus");
    std::vector<std::uint64_t> a(m);
    std::uint64_t kx = 1;
    for (std::uint64_t x = 0; x < m; ++x) {
        a[x] = static_cast<unsigned __int128>(f.table[x]) * modinv(kx, m) % m;
        kx = static_cast<unsigned __int128>(kx) * f.k % m;
    }
    for (std::uint64_t x = 0; x < m; ++x)
        if (a[(x + 1) % m] != a[x]) rep.breakpoints++;
    return rep;
}

namespace {

struct OracleSearch {
    std::uint64_t m, k;
    std::vector<std::uint32_t> f;
    std::vector<bool> used;
    OracleResult best;
    bool have_best = false;

    void evaluate() {
        best.tables_explored++;
        std::uint64_t matches = 0;
        for (std::uint64_t x = 0; x < m; ++x)
            if (f[(x + 1) % m] == static_cast<unsigned __int128>(k) * f[x] % m)
                matches++;
        if (!have_best || matches > best.max_match ||
            (matches == best.max_match && f < best.witness.table)) {
            best.max_match = matches;
            best.witness.table = f;
            have_best = true;
        }
    }

    void rec(std::uint64_t from) {
        std::uint64_t i = from;
        while (i < m && f[i] != m) ++i;
        if (i == m) { evaluate(); return; }
        // fixed point
        f[i] = static_cast<std::uint32_t>(i);
        rec(i + 1);
        f[i] = static_cast<std::uint32_t>(m);
        // 2-cycle (i j)
        for (std::uint64_t j = i + 1; j < m; ++j) {
            if (f[j] != m) continue;
            f[i] = static_cast<std::uint32_t>(j);
            f[j] = static_cast<std::uint32_t>(i);
            rec(i + 1);
            f[i] = f[j] = static_cast<std::uint32_t>(m);
        }
        // 4-cycle (i a b c), i smallest
        for (std::uint64_t a = i + 1; a < m; ++a) {
            if (f[a] != m) continue;
            for (std::uint64_t b = i + 1; b < m; ++b) {
                if (b == a || f[b] != m) continue;
                for (std::uint64_t c = i + 1; c < m; ++c) {
                    if (c == a || c == b || f[c] != m) continue;
                    f[i] = static_cast<std::uint32_t>(a);
                    f[a] = static_cast<std::uint32_t>(b);
                    f[b] = static_cast<std::uint32_t>(c);
                    f[c] = static_cast<std::uint32_t>(i);
                    rec(i + 1);
                    f[i] = f[a] = f[b] = f[c] = static_cast<std::uint32_t>(m);
                }
            }
        }
    }
};

}  // namespace

OracleResult brute_oracle(std::uint64_t modulus, std::uint64_t k, std::uint64_t cap) {
    if (modulus > cap)
        throw CapExceeded("brute oracle limited to modulus <= " + std::to_string(cap));
    OracleSearch s;
    s.m = modulus;
    s.k = k;
    s.f.assign(modulus, static_cast<std::uint32_t>(modulus));  // modulus = unset
    s.best.witness = CycleFunction::identity(modulus, k);
    s.rec(0);
    s.best.witness = CycleFunction::make(modulus, k, s.best.witness.table);
    return s.best;
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "exhaustive") return Strategy::exhaustive;
    if (name == "backtrack") return Strategy::backtrack;
    if (name == "block_ansatz" || name == "block-ansatz") return Strategy::block_ansatz;
    throw UsageError("unknown strategy '" + name + "'");
}

namespace {

// Branch and bound over sequential assignments f(0), f(1), ... with the
// f^4 = id constraint propagated through the partial cycle structure:
// joining two chains is legal while the combined length stays <= 4, and a
// chain may only close into a cycle of length 1, 2 or 4.
struct BnB {
    std::uint64_t m, k;
    std::vector<std::uint32_t> f, pred;
    std::vector<std::uint32_t> other_end, path_len;
    std::uint64_t matches = 0;

    std::uint64_t best_match = 0;
    std::vector<std::uint32_t> best_table;
    bool have_best = false;

    std::uint64_t nodes = 0;
    std::uint64_t node_budget = 0;
    double second_budget = 0;
    std::chrono::steady_clock::time_point t0;
    bool stopped = false;
    bool complete = true;

    static constexpr std::uint32_t kUnset = 0xffffffff;

    void init() {
        f.assign(m, kUnset);
        pred.assign(m, kUnset);
        other_end.resize(m);
        path_len.assign(m, 1);
        for (std::uint64_t i = 0; i < m; ++i) other_end[i] = static_cast<std::uint32_t>(i);
        t0 = std::chrono::steady_clock::now();
    }

    bool out_of_budget() {
        if (node_budget && nodes >= node_budget) return true;
        if (second_budget > 0 && (nodes & 0x1fff) == 0) {
            auto dt = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            if (dt > second_budget) return true;
        }
        return false;
    }

    bool legal(std::uint64_t x, std::uint32_t v) const {
        if (pred[v] != kUnset) return false;
        if (other_end[x] == v)  // closing the chain into a cycle
            return path_len[x] == 1 || path_len[x] == 2 || path_len[x] == 4;
        return path_len[x] + path_len[v] <= 4;
    }

    void record() {
        std::uint64_t total =
            matches + (f[0] == static_cast<unsigned __int128>(k) * f[m - 1] % m);
        if (!have_best || total > best_match) {
            best_match = total;
            best_table.assign(f.begin(), f.end());
            have_best = true;
        }
    }

    void rec(std::uint64_t t) {
        if (t == m) { record(); return; }
        if (out_of_budget()) { stopped = true; complete = false; return; }
        // Undecided slots: t-1 .. m-1, i.e. m - t + 1 of them.
        if (have_best && matches + (m - t + 1) <= best_match) return;

        std::uint32_t vm = kUnset;
        if (t > 0)
            vm = static_cast<std::uint32_t>(
                static_cast<unsigned __int128>(k) * f[t - 1] % m);

        auto attempt = [&](std::uint32_t v) {
            if (stopped) return;
            if (!legal(t, v)) return;
            nodes++;
            bool closing = other_end[t] == v;
            std::uint32_t hx = other_end[t], tv = other_end[v];
            std::uint32_t save_hx_end = other_end[hx], save_tv_end = other_end[tv];
            std::uint32_t save_hx_len = path_len[hx], save_tv_len = path_len[tv];
            bool matched = t > 0 && v == vm;

            f[t] = v;
            pred[v] = static_cast<std::uint32_t>(t);
            if (!closing) {
                std::uint32_t len = path_len[t] + path_len[v];
                other_end[hx] = tv;
                other_end[tv] = hx;
                path_len[hx] = path_len[tv] = len;
            }
            if (matched) matches++;

            rec(t + 1);

            if (matched) matches--;
            if (!closing) {
                other_end[hx] = save_hx_end;
                other_end[tv] = save_tv_end;
                path_len[hx] = save_hx_len;
                path_len[tv] = save_tv_len;
            }
            pred[v] = kUnset;
            f[t] = kUnset;
        };

        if (vm != kUnset) attempt(vm);
        for (std::uint32_t v = 0; v < m && !stopped; ++v)
            if (v != vm) attempt(v);
    }
};

SearchResult run_bnb(std::uint64_t m, std::uint64_t k, SearchBudget budget) {
    BnB e;
    e.m = m;
    e.k = k;
    e.node_budget = budget.nodes;
    e.second_budget = budget.seconds;
    e.init();
    e.rec(0);
    if (!e.have_best)
        throw CapExceeded("budget too small to reach any complete table");
    SearchResult res;
    res.best = CycleFunction::make(m, k, e.best_table);
    res.report = verify(res.best);
    res.exhausted = e.complete;
    res.budget_exceeded = e.stopped;
    res.nodes_explored = e.nodes;
    return res;
}

// Piecewise-exponential candidates f(x) = c_j k^x on random blocks,
// discarded unless bijective, then cycle lengths repaired to {1,2,4}.
SearchResult run_block_ansatz(std::uint64_t m, std::uint64_t k, SearchBudget budget,
                              std::uint64_t seed) {
    const std::uint64_t trials = budget.nodes ? budget.nodes : 1000;
    std::mt19937_64 rng(seed);
    SearchResult res;
    bool have = false;

    std::vector<std::uint32_t> table(m);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        res.nodes_explored++;
        // blocks: sorted distinct breakpoints, a constant per block
        std::uint64_t nblocks = 1 + rng() % std::min<std::uint64_t>(m, 8);
        std::vector<std::uint64_t> starts{0};
        for (std::uint64_t b = 1; b < nblocks; ++b) starts.push_back(rng() % m);
        std::sort(starts.begin(), starts.end());
        starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
        std::vector<std::uint64_t> consts(starts.size());
        for (auto& c : consts) c = rng() % m;

        std::uint64_t kx = 1;
        std::size_t blk = 0;
        for (std::uint64_t x = 0; x < m; ++x) {
            while (blk + 1 < starts.size() && starts[blk + 1] <= x) ++blk;
            table[x] = static_cast<std::uint32_t>(
                static_cast<unsigned __int128>(consts[blk]) * kx % m);
            kx = static_cast<unsigned __int128>(kx) * k % m;
        }

        // Light repair: reassign colliding positions to unused values. A
        // candidate whose image misses more than a third of the range is a
        // bijection failure and gets discarded (a single exponential block
        // can never recover: its image lies in one coset).
        std::vector<bool> hit(m, false);
        std::vector<std::uint64_t> colliding;
        for (std::uint64_t x = 0; x < m; ++x) {
            if (hit[table[x]])
                colliding.push_back(x);
            else
                hit[table[x]] = true;
        }
        if (colliding.size() * 3 > m) {
            res.discarded_non_bijections++;
            continue;
        }
        std::size_t next = 0;
        for (std::uint64_t x : colliding) {
            while (hit[next]) ++next;
            table[x] = static_cast<std::uint32_t>(next);
            hit[next] = true;
        }

        // Cycle surgery: split every cycle into 4/2/1-chunks.
        std::vector<bool> visited(m, false);
        for (std::uint64_t x = 0; x < m; ++x) {
            if (visited[x]) continue;
            std::vector<std::uint32_t> cyc;
            std::uint32_t y = static_cast<std::uint32_t>(x);
            while (!visited[y]) {
                visited[y] = true;
                cyc.push_back(y);
                y = table[y];
            }
            std::size_t L = cyc.size();
            if (L == 1 || L == 2 || L == 4) continue;
            std::size_t i = 0;
            while (i < L) {
                std::size_t left = L - i;
                std::size_t chunk = left >= 4 ? 4 : (left == 3 ? 2 : left);
                for (std::size_t j = 0; j < chunk; ++j)
                    table[cyc[i + j]] = cyc[i + (j + 1) % chunk];
                i += chunk;
            }
        }

        CycleFunction cand = CycleFunction::make(m, k, table);
        VerifyReport rep = verify(cand);
        if (!rep.four_periodic || !rep.is_bijection)
            throw Error("cycle surgery failed; unreachable");
        if (!have || rep.match_count > res.report.match_count ||
            (rep.match_count == res.report.match_count &&
             cand.table < res.best.table)) {
            res.best = cand;
            res.report = rep;
            have = true;
        }
    }
    if (!have) throw CapExceeded("no bijective candidate found");
    return res;
}

}  // namespace

SearchResult search_best(std::uint64_t modulus, std::uint64_t k, Strategy strategy,
                         SearchBudget budget, std::uint64_t seed) {
    if (modulus < 1) throw UsageError("modulus must be >= 1");
    prime_base(modulus == 1 ? 2 : modulus);
    switch (strategy) {
        case Strategy::exhaustive:
            if (modulus > 14)
                throw CapExceeded("exhaustive search infeasible beyond modulus 14");
            return run_bnb(modulus, k, SearchBudget{});
        case Strategy::backtrack:
            return run_bnb(modulus, k, budget);
        case Strategy::block_ansatz:
            return run_block_ansatz(modulus, k, budget, seed);
    }
    throw UsageError("unknown strategy");
}

void write_csv(std::ostream& out, const CycleFunction& f) {
    out << "x,f(x)\n";
    for (std::uint64_t x = 0; x < f.modulus; ++x)
        out << x << "," << f.table[x] << "\n";
}

CycleFunction read_csv(std::istream& in, std::uint64_t modulus, std::uint64_t k) {
    std::vector<std::uint32_t> table(modulus, 0);
    std::vector<bool> seen(modulus, false);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;  // header
        std::istringstream ls(line);
        std::uint64_t x, v;
        char comma;
        if (!(ls >> x >> comma >> v) || comma != ',')
            throw ParseError("bad csv row: " + line);
        if (x >= modulus || v >= modulus)
            throw UsageError("csv entry out of range: " + line);
        if (seen[x]) throw UsageError("duplicate x in csv: " + std::to_string(x));
        seen[x] = true;
        table[x] = static_cast<std::uint32_t>(v);
    }
    for (std::uint64_t x = 0; x < modulus; ++x)
        if (!seen[x]) throw UsageError("csv missing x = " + std::to_string(x));
    return CycleFunction::make(modulus, k, std::move(table));
}

}  // namespace higman
