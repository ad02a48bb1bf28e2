#pragma once

#include <iosfwd>
#include <string>

#include "dwig/stieltjes.hpp"

namespace dwig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitUsage = 64;

/// Entry point of the `dwig` binary; all output goes to out/err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// lambda,density,cdf
std::string density_csv(const DensityCurve& c);
/// Reads the format written by density_csv. Throws InputError.
DensityCurve parse_density_csv(const std::string& text);

}  // namespace dwig::cli
