#pragma once

// JSON kernel documents:
//
//   {"type": "coeffs",    "entries": [[k, l, c], ...]}
//   {"type": "explicit",  "entries": [[u, v, R], ...]}
//   {"type": "separable", "rho":     [[k, rho_k], ...]}
//
// A "separable" document may use "entries" instead of "rho", either with
// [k, rho_k] rows or with full [u, v, R] rows (then it must factor exactly).
// Optional "radius" truncates a separable sequence.

#include <optional>
#include <string>
#include <string_view>

#include "dwig/kernel.hpp"

namespace dwig {

struct KernelSpec {
  enum class Type { coeffs, explicit_values, separable };

  Type type = Type::explicit_values;
  CovKernel kernel = CovKernel::identity();
  /// Present for "coeffs" documents.
  std::optional<LinearCoeffs> coeffs;
};

/// Throws InputError for malformed documents (the message names the missing
/// or bad field) and for kernels failing a hard validation check.
KernelSpec parse_kernel_json(std::string_view text);
KernelSpec load_kernel_file(const std::string& path);

/// Coefficients usable to simulate the field: the document's own coeffs, or
/// the spectral square root of a separable kernel. Throws InputError for
/// explicit kernels that are not separable.
LinearCoeffs simulation_coeffs(const KernelSpec& spec);

std::string to_string(KernelSpec::Type t);

}  // namespace dwig
