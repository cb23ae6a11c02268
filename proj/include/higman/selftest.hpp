#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace higman {

struct CriterionResult {
    std::string id;
    std::string name;
    bool passed = false;
    std::string detail;
    double ms = 0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20260801;
    std::vector<std::string> only;   // empty = run everything
    std::ostream* progress = nullptr;
};

// The acceptance suite; one result per criterion plus negative controls.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace higman
