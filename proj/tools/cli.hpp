#pragma once

// Command-line front end. Exit codes: 0 pass, 1 check failure or invalid
// input, 2 usage, parse or I/O error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mkcx::cli {

inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// FNV-1a 64-bit digest, as 16 lowercase hex digits.
std::string fnv1a64(std::string_view bytes);

// argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mkcx::cli
