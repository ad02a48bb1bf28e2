#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dwig/field.hpp"

namespace dwig {

/// Spectrum of A_n / sqrt(n).
class EmpiricalSpectrum {
 public:
  /// Sorts and keeps the given (already scaled) eigenvalues.
  explicit EmpiricalSpectrum(std::vector<double> eigenvalues);

  /// Eigenvalues of a / sqrt(a.n).
  static EmpiricalSpectrum of(const SymMatrix& a);

  int n() const noexcept { return static_cast<int>(values_.size()); }
  const std::vector<double>& eigenvalues() const noexcept { return values_; }
  /// (1/n) sum lambda^p; 1 for p = 0.
  double moment(int p) const noexcept;
  /// Fraction of eigenvalues <= x.
  double cdf(double x) const noexcept;

 private:
  std::vector<double> values_;
};

using CdfFn = std::function<double(double)>;

struct Distances {
  double levy = 0.0;
  double ks = 0.0;
};

/// Levy distance inf{e : F(x-e) - e <= G(x) <= F(x+e) + e for all x} between
/// the step CDF F of sorted samples and a right-continuous CDF G, by bisection
/// on e (60 halvings). For a candidate e only the jumps s of F need checking:
///   F(s) - e <= G(s + e)   and   G((s - e)^-) <= F(s^-) + e.
/// The Kolmogorov-Smirnov distance sup |F - G| is taken at the same jumps.
Distances distances(std::span<const double> sorted_samples, const CdfFn& G);

inline Distances distances(const EmpiricalSpectrum& s, const CdfFn& G) { return distances(s.eigenvalues(), G); }

}  // namespace dwig
