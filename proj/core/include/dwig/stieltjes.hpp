#pragma once

// Stieltjes transform of the limiting law through the grid functional equation
//
//   z H(z,x) = 1 + H(z,x) int_0^1 f(x,y) H(z,y) dy,     G(z) = int_0^1 H(z,x) dx,
//
// and density recovery by -Im G(lambda + i eps) / pi.
//
// Only the neighbourhood of infinity is covered by the uniqueness argument for
// this equation. Solutions closer to the real axis are reached by continuation
// from large Im z and validated against moments and simulation.

#include <complex>
#include <optional>
#include <vector>

#include "dwig/kernel.hpp"

namespace dwig {

using cplx = std::complex<double>;

struct SolverOptions {
  /// Initial damping of H <- (1 - w) H + w / (z - int f H).
  double damping = 0.5;
  /// Sup-norm of the defect |z H - 1 - H int f H| accepted as converged.
  double tol = 1e-11;
  int max_iter = 50000;
  /// After this many damped steps without convergence, Newton steps on the
  /// same equation are attempted (kept only while they reduce the defect).
  int newton_after = 64;
  bool newton = true;
};

struct StieltjesField {
  cplx z;
  std::vector<cplx> h;
  cplx g;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves at z (Im z != 0) from the 1/z start, or from `warm` when given.
/// Throws ConvergenceError carrying the last residual.
StieltjesField solve_H(const SpectralDensity2D& f, cplx z, const SolverOptions& opts = {},
                       const std::vector<cplx>* warm = nullptr);

/// Quadrature of the field values.
cplx g_transform(const SpectralDensity2D& f, const std::vector<cplx>& h);
inline cplx g_transform(const SpectralDensity2D& f, const StieltjesField& field) {
  return g_transform(f, field.h);
}

struct PathSpec {
  /// Number of points on the path, the last being the target. 1 = direct solve.
  int steps = 24;
  /// Starting height; defaults to 4 sqrt(rbar).
  std::optional<double> start_height;
};

/// Solves along a path from i * start_height down to z_target, Im decreasing
/// geometrically and Re moving linearly, warm-starting each point. Requires
/// Im z_target > 0. A failing path point is reported in the ConvergenceError.
StieltjesField continuation_solve(const SpectralDensity2D& f, cplx z_target, const PathSpec& path = {},
                                  const SolverOptions& opts = {});

struct DensityCurve {
  std::vector<double> lambdas;
  std::vector<double> density;
  std::vector<double> cdf;
  double epsilon = 1e-3;
  bool richardson = false;
  /// max density found outside |lambda| <= 2 sqrt(rbar) + support_margin.
  double max_outside_support = 0.0;
  double support_margin = 0.25;

  /// Linear interpolation of the cdf; 0 left of the grid, cdf.back() right of it.
  double cdf_at(double x) const;
  /// Moment int lambda^p density d lambda by the trapezoid rule.
  double moment(int p) const;
};

struct InversionOptions {
  double epsilon = 1e-3;
  /// density = 2 d(eps) - d(2 eps), clipped at zero.
  bool richardson = false;
  SolverOptions solver{};
  PathSpec path{};
};

/// Uniform grid of `points` values on [-2.5 sqrt(rbar), 2.5 sqrt(rbar)].
std::vector<double> default_lambda_grid(double rbar, int points = 601);

/// density(lambda) = -Im G(lambda + i eps) / pi on the grid (grid must be
/// increasing), cdf by trapezoid accumulation. Throws PartialResultError
/// listing lambdas whose solve failed, NumericalConsistencyError when the
/// raw density drops below -1e-9 or the cdf does not end within 1e-3 of 1.
DensityCurve invert_density(const SpectralDensity2D& f, const std::vector<double>& lambda_grid,
                            const InversionOptions& opts = {});

/// Even moments beta_2, ..., beta_{2 m_max} read off the Laurent series
/// G(z) = sum_m beta_2m z^{-2m-1} as contour integrals
///   beta_p = (1/2 pi i) oint z^p G(z) dz   on |z| = radius,
/// by the trapezoid rule on `points` nodes (G(conj z) = conj G(z) halves the
/// solves). Requires radius > 2 sqrt(rbar).
std::vector<double> laurent_moments(const SpectralDensity2D& f, int m_max, double radius = 50.0, int points = 64,
                                    const SolverOptions& opts = {});

}  // namespace dwig
