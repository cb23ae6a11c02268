// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion ids may be passed as arguments to run a subset.

#include <iostream>
#include <string>

#include "higman/selftest.hpp"

int main(int argc, char** argv) {
    higman::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) opts.only.emplace_back(argv[i]);
    opts.progress = &std::cout;

    auto results = higman::run_acceptance(opts);
    bool all = !results.empty();
    for (const auto& r : results) all = all && r.passed;
    std::cout << (all ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL") << " ("
              << results.size() << " criteria)\n";
    return all ? 0 : 1;
}
