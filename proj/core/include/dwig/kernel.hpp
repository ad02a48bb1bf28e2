#pragma once

// Covariance kernels R(u,v) = E[Z_{0,0} Z_{-u,v}] of a stationary field on Z^2,
// their construction from moving-average coefficients, diagnostics, and the
// 2-D Fourier transform
//
//   f(x,y) = sum_{k,l} R(k,l) exp(2 pi i (k x + l y)),   x,y in [0,1].
//
// Kernels have finite support. Analytic kernels (AR(1), sinc, ...) are
// truncated by the caller and may carry the dropped tail mass.

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwig/quadrature.hpp"

namespace dwig {

struct Lag {
  int u = 0;
  int v = 0;
  auto operator<=>(const Lag&) const = default;
};

using LagMap = std::map<Lag, double>;
using SeqMap = std::map<int, double>;

/// Coefficients c_{k,l} of Z_{i,j} = sum c_{k,l} eps_{i-k,j-l}.
class LinearCoeffs {
 public:
  /// Requires c_{k,l} = c_{l,k} and 0 < sum |c| < inf. Zero entries are dropped.
  static LinearCoeffs from_entries(const LagMap& entries);

  /// c_{k,l} = a_k a_l. Kept in factored form so fields can be filtered by
  /// rows and columns separately.
  static LinearCoeffs separable(const SeqMap& factor);

  const LagMap& entries() const noexcept { return entries_; }
  /// max |k|, |l| over the support.
  int bound() const noexcept { return bound_; }
  double abs_sum() const;
  const std::optional<SeqMap>& separable_factor() const noexcept { return factor_; }

 private:
  LinearCoeffs() = default;
  LagMap entries_;
  int bound_ = 0;
  std::optional<SeqMap> factor_;
};

class CovKernel {
 public:
  /// Builds a kernel from explicit values. No symmetry checks here; use
  /// validate() for diagnostics. Throws InvalidArgument for non-finite values
  /// or a kernel with no non-zero entries.
  static CovKernel from_values(const LagMap& values);

  /// i.i.d. kernel, R(0,0) = 1 and zero elsewhere.
  static CovKernel identity();

  double operator()(int u, int v) const noexcept {
    if (u < -radius_ || u > radius_ || v < -radius_ || v > radius_) return 0.0;
    return dense_[static_cast<std::size_t>((u + radius_) * width() + (v + radius_))];
  }

  /// max |u|, |v| with a non-zero value.
  int support_radius() const noexcept { return radius_; }
  double variance() const noexcept { return (*this)(0, 0); }
  /// Non-zero entries.
  const LagMap& values() const noexcept { return values_; }

  /// Present when the kernel was declared separable: R(u,v) = rho_u rho_v.
  const std::optional<SeqMap>& separable_factor() const noexcept { return factor_; }

  /// Tail mass sum_{|k|>K} |rho_k| dropped when an analytic kernel was truncated.
  std::optional<double> truncation_error() const noexcept { return truncation_error_; }

  CovKernel with_separable_factor(SeqMap rho) const;
  CovKernel with_truncation_error(double tail) const;

  /// True when R(u,v) = R(u,0) R(0,v) holds to tol on the support, with R(0,0) = 1.
  bool is_separable(double tol = 1e-12) const;

  /// R(k,0) for |k| <= support_radius().
  SeqMap row_factor() const;

 private:
  int width() const noexcept { return 2 * radius_ + 1; }

  LagMap values_;
  std::vector<double> dense_;
  int radius_ = 0;
  std::optional<SeqMap> factor_;
  std::optional<double> truncation_error_;
};

/// R(u,v) = sum_{k,l} c_{k,l} c_{k-u,l+v}.
CovKernel kernel_from_coeffs(const LinearCoeffs& c);

/// R(u,v) = rho_u rho_v on |u|,|v| <= radius. Requires rho_0 = 1
/// (NormalizationError) and rho_k = rho_{-k} (InvalidArgument).
CovKernel separable_kernel(const SeqMap& rho, int radius);

/// Same as above for a sequence given by a function of the lag; the tail
/// sum_{|k|>radius} |rho_k| must be supplied by the caller when known.
CovKernel separable_kernel(const std::function<double(int)>& rho, int radius,
                           std::optional<double> tail = std::nullopt);

struct KernelCheck {
  std::string name;
  bool passed = true;
  /// A failed hard check means the kernel is not usable downstream.
  bool hard = true;
  std::string detail;
};

struct KernelDiagnostics {
  std::vector<KernelCheck> checks;

  bool ok() const;
  const KernelCheck* find(const std::string& name) const;
  std::string to_text() const;
};

/// Symmetry, reflection R(u,v) = R(-v,-u), positive variance, finite rbar and,
/// for separable kernels, factor consistency and r(x) >= 0 on 4096 samples.
KernelDiagnostics validate(const CovKernel& k);

/// sum_{u,v} |R(u,v)|.
double rbar(const CovKernel& k);

/// r(x) = sum_k rho_k exp(-i k x) for a 1-D symmetric sequence; real-valued.
double symbol_1d(const SeqMap& rho, double x);

struct SpectralDensity2D {
  Quadrature quad;
  /// f(x_i, x_j) row-major, size() x size().
  std::vector<double> values;
  /// Upper bound used for continuation paths and grids; rbar of the source
  /// kernel (1 for the constant density).
  double rbar = 1.0;

  std::size_t size() const noexcept { return quad.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * size() + j]; }

  /// f(x,y) = value on every node pair.
  static SpectralDensity2D constant(double value, Quadrature quad);
};

/// Periodic trapezoid with max(64, m_max * support_radius + 1) nodes, which
/// makes the moment recursion exact up to order m_max.
Quadrature default_quadrature(const CovKernel& k, int m_max = 5);

/// Throws NumericalConsistencyError if the imaginary residual of the Fourier
/// sum exceeds 1e-12 * max(1, rbar), which signals a broken kernel invariant.
SpectralDensity2D spectral_density(const CovKernel& k, const Quadrature& quad);

/// 1-D spectral square root of a separable kernel: coefficients a_j, symmetric
/// in j, with sum_j a_j a_{j+u} = rho_u up to tol, obtained from sqrt(r(x)).
/// Throws InvalidArgument when r takes negative values.
SeqMap spectral_sqrt_factor(const SeqMap& rho, double tol = 1e-12);

}  // namespace dwig
