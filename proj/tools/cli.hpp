#pragma once

#include <ostream>

namespace gptlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

/// Full command-line entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gptlab::cli
