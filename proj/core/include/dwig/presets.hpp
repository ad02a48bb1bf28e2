#pragma once

// Worked model families with a known limiting law.
//
//   example1  2-D AR(1) field, R(u,v) = rho^{|u|+|v|}: mu_r [x] mu_s, r the AR(1) spectral density.
//   example2  box sums of (N+1)^2 i.i.d. inputs: mu_r [x] mu_s with a triangular r.
//   example3  independent stationary sequences along diagonals: semicircle.
//   example4  orthogonal-row coefficients: semicircle dilated by sigma = (sum c^2)^{1/2}.
//   example5  R(u,v) = sinc(u) sinc(v) (not summable): law of Pi W, Pi in {sqrt(pi), 0}.
//   example6  r(x) = (sqrt(pi)/2)|x|^{-1/2}: mu_r [x] mu_s with infinite fourth moment.

#include <optional>
#include <string>

#include "dwig/freeconv.hpp"
#include "dwig/kernel.hpp"

namespace dwig {

struct PresetParams {
  double rho = 0.5;
  int N = 1;
  /// Truncation radius for analytic kernels (example1, 3, 5, 6).
  int radius = 12;
  /// Coefficients for example4; defaults to c_{0,0} = c_{1,1} = sqrt(2).
  std::optional<LagMap> coeffs;
};

struct Preset {
  std::string name;
  std::optional<CovKernel> kernel;
  /// Moving-average coefficients that simulate the (truncated) kernel.
  std::optional<LinearCoeffs> coeffs;
  std::optional<RadialLaw> radial;
  /// Semicircle dilation factor sigma when the limit is a dilated semicircle.
  std::optional<double> dilation;
  /// Compact JSON describing the limit law.
  std::string descriptor_json;
};

/// Throws InvalidArgument for unknown names or invalid parameters.
Preset make_preset(const std::string& name, const PresetParams& params = {});

/// Example-4 orthogonality: sum_l c_{k,l} c_{k',l} = 0 for all k != k'.
bool has_orthogonal_rows(const LagMap& c, double tol = 1e-12);

}  // namespace dwig
