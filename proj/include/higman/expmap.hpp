#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "higman/errors.hpp"

namespace higman {

// A table f : Z/p^m -> Z/p^m. Entries are range-checked at construction;
// bijectivity and 4-periodicity are verified properties, not invariants.
struct CycleFunction {
    std::uint64_t modulus = 1;  // a prime power
    std::uint64_t k = 2;
    std::vector<std::uint32_t> table;

    static CycleFunction make(std::uint64_t modulus, std::uint64_t k,
                              std::vector<std::uint32_t> table);
    static CycleFunction identity(std::uint64_t modulus, std::uint64_t k);
};

struct VerifyReport {
    bool is_bijection = false;
    bool four_periodic = false;
    std::uint64_t match_count = 0;  // #{x : f(x+1) = k f(x)}, x+1 mod p^m
    std::uint64_t breakpoints = 0;  // #{x : a(x+1) != a(x)}, a(x) = f(x) k^-x
    std::uint64_t eps_num = 0;      // epsilon = 1 - match_count/p^m
    std::uint64_t eps_den = 1;
};

VerifyReport verify(const CycleFunction& f);

struct OracleResult {
    std::uint64_t max_match = 0;
    CycleFunction witness;          // lexicographically least optimal table
    std::uint64_t tables_explored = 0;
};

// Exhausts every permutation with f^4 = id (built from fixed points,
// 2-cycles and 4-cycles) and returns the exact maximum of match_count.
OracleResult brute_oracle(std::uint64_t modulus, std::uint64_t k,
                          std::uint64_t cap = 9);

enum class Strategy { exhaustive, backtrack, block_ansatz };

Strategy strategy_from_name(const std::string& name);

// nodes = 0 and seconds = 0 mean unlimited. Node budgets are exact and
// reproducible; wall-clock budgets are a convenience only.
struct SearchBudget {
    std::uint64_t nodes = 0;
    double seconds = 0;
};

struct SearchResult {
    CycleFunction best;
    VerifyReport report;
    bool exhausted = false;         // the full tree was searched: exact max
    bool budget_exceeded = false;
    std::uint64_t nodes_explored = 0;
    std::uint64_t discarded_non_bijections = 0;  // block_ansatz only
};

// Every returned witness satisfies f^4 = id exactly; the exhaustive and
// backtrack strategies share one branch-and-bound engine (bounded by the
// number of still-undecided match slots), block_ansatz seeds piecewise
// f(x) = c_j k^x tables and repairs their cycle structure.
SearchResult search_best(std::uint64_t modulus, std::uint64_t k, Strategy strategy,
                         SearchBudget budget, std::uint64_t seed = 0);

void write_csv(std::ostream& out, const CycleFunction& f);
CycleFunction read_csv(std::istream& in, std::uint64_t modulus, std::uint64_t k);

}  // namespace higman
