#pragma once

// Limits that are free multiplicative convolutions mu_r [x] mu_s of the
// semicircle law mu_s with the law mu_r of r(U), U ~ Uniform(-pi, pi), where
// r(x) = sum_k R(k,0) exp(-i k x) for separable kernels. Its even moments are
//
//   sum_{sigma in NC2(2m)} prod_{j=1}^{m+1} int x^{l_j} mu_r(dx),
//
// l_j the Kreweras block sizes of sigma.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dwig/kernel.hpp"

namespace dwig {

struct RadialMoment {
  double value = 0.0;
  bool divergent = false;
};

struct RadialLaw {
  std::string name;
  /// r(x) on [-pi, pi].
  std::function<double(double)> evaluator;
  /// R(k,0): moments then come from zero-sum tuples of this sequence.
  std::optional<SeqMap> factor;
  /// Closed-form moments; returns nullopt where unavailable.
  std::function<std::optional<double>(int)> exact;
  /// Moments of order >= divergent_from are infinite (0 = none).
  int divergent_from = 0;
  bool nonneg_certified = false;

  /// Moments 1..j_max in order.
  std::vector<RadialMoment> moments(int j_max) const;
};

/// Law of r(U) for a separable kernel (declared or detected). Non-negativity is
/// certified from 4096 samples of r. Throws InvalidArgument otherwise.
RadialLaw radial_from_kernel(const CovKernel& k);

/// r(x) = (1 - rho^2) / (1 - 2 rho cos x + rho^2), |rho| < 1.
RadialLaw ar1_radial(double rho);

/// Constant r = c, i.e. mu_r = delta_c (c = 1 for orthogonal-row kernels).
RadialLaw constant_radial(double c);

/// int x^j mu_r(dx): closed form when available, otherwise the zero-sum tuple
/// sum over the factor, otherwise (1/2pi) int r(x)^j dx on 4096 points.
RadialMoment mu_r_moment(const RadialLaw& law, int j);

/// (1/2pi) int_{-pi}^{pi} r(x)^j dx by the midpoint rule.
double mu_r_moment_quadrature(const RadialLaw& law, int j, int samples = 4096);

/// sum over (k_1..k_j) with k_1 + ... + k_j = 0 of prod rho_{k_i}.
double zero_sum_moment(const SeqMap& rho, int j);

struct FreeProductMoments {
  /// values[m-1] = 2m-th moment of mu_r [x] mu_s (+inf when divergent).
  std::vector<double> values;
  /// Smallest m whose moment is infinite, 0 if none.
  int first_divergent_m = 0;

  double moment(int p) const;
};

FreeProductMoments free_mult_semicircle(const RadialLaw& law, int m_max);

/// 2m-th moment C_m of the semicircle law.
double semicircle_moment(int m);
/// sqrt(4 - x^2) / (2 pi) on |x| <= 2, zero outside.
double semicircle_density(double x);
double semicircle_cdf(double x);

/// R(k,0) = sin(k)/k (1 at k = 0).
double sinc_correlation(int k);
/// Fourier coefficient (1/2pi) int e^{ikx} (sqrt(pi)/2) |x|^{-1/2} dx.
double inverse_sqrt_correlation(int k);

}  // namespace dwig
