#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfourier {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResidual = 3;

// Environment variable overriding the default working precision.
inline constexpr const char* kPrecisionEnv = "QFOURIER_PRECISION";

// Subcommands: bernoulli, integrate, transform, verify. args[0] is the
// program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfourier
