#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ustlocal::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailure = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands: generate, sample, census, resistance, theory, verify,
/// experiment. Global flags: --seed, --threads, --out, --format {json,csv}.
/// Returns 0 when every gate passes, 1 on a gate failure, 2 on usage or
/// input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace ustlocal::harness
