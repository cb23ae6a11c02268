#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace higman {

inline constexpr const char* kToolName = "higman";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 a checked property is false, 2 usage/config
// error, 3 resource cap hit.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace higman
