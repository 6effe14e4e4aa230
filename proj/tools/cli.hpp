#pragma once

// Command-line front end. run() is the whole program minus process setup so
// tests can drive it in-process.
//
// Exit codes: 0 success, 1 other runtime error, 2 invalid configuration or
// malformed input file, 3 quadrature failure, 4 statistical check failed.

#include <iosfwd>
#include <string>
#include <vector>

namespace sdl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitQuadrature = 3;
inline constexpr int kExitStatFail = 4;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace sdl::cli
