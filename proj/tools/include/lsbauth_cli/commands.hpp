#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsbauth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitModel = 3;

/// Runs the tool with argv-style arguments (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsbauth::cli
