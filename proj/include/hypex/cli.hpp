#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hypex/distribution.hpp"

namespace hypex::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kFailure = 1,
  kUsage = 2,       // unparseable arguments, invalid ranges
  kInfeasible = 3,  // unsatisfiable constraints, failed root finding
  kResource = 4,    // enumeration cap or integer overflow
};

// Comma-separated weights, normalized. Throws ValidationError.
Distribution parse_distribution(std::string_view text);
std::vector<double> parse_reals(std::string_view text);
std::vector<std::uint64_t> parse_counts(std::string_view text);

// 17 significant digits; infinities as `inf` / `-inf`.
std::string format_real(double x);

// Runs one subcommand. `args` excludes the program name. CSV goes to `out`
// (or to --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypex::cli
