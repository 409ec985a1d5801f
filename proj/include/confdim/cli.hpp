#pragma once

#include <iosfwd>

namespace confdim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitComputation = 4;

// Runs one subcommand. Results go to `out` (or --output), error records to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confdim::cli
