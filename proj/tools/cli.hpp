#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twkde::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_degenerate = 3;

//! Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

} // namespace twkde::cli
