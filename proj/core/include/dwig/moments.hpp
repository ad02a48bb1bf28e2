#pragma once

// Even moments beta_2m of the limiting spectral distribution, computed by
//
//  * the combinatorial sum over non-crossing pairings sigma and the lattice
//    S(sigma, N) of tuples whose entries sum to zero on every Kreweras block,
//  * the grid recursion
//      H_0 = 1,  H_2m(x) = sum_{k=1}^m H_{2(m-k)}(x) int f(x,y) H_{2(k-1)}(y) dy,
//      beta_2m = int H_2m(x) dx,
//  * the exact finite-n Gaussian expectation E Tr(A_n^p) by Wick's formula,
//
// which are independent routes to the same numbers.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwig/combinatorics.hpp"
#include "dwig/kernel.hpp"

namespace dwig {

enum class MomentMethod { combinatorial, recursive, empirical, wick_oracle, free_product };

std::string to_string(MomentMethod m);

struct MomentSequence {
  /// even[m-1] = beta_{2m}, m = 1..max_m().
  std::vector<double> even;
  MomentMethod method = MomentMethod::combinatorial;
  /// Human-readable truncation (e.g. "N=12") or grid ("trap:64").
  std::string truncation;

  int max_m() const noexcept { return static_cast<int>(even.size()); }
  /// p-th moment: 1 for p = 0, 0 for odd p, beta_p for even p.
  double moment(int p) const;
};

struct ConstraintSet {
  PairPartition sigma;
  KrewerasComplement kreweras;
  int N = 0;

  /// Throws InvalidArgument for crossing sigma or N < 0.
  static ConstraintSet make(const PairPartition& sigma, int N);
};

/// Visits every k in {-N..N}^{2m} whose entries sum to zero on each Kreweras
/// block. Per block of size l the first l-1 coordinates run freely and the
/// last is determined and range-checked. The span is 0-based (k[0] = k_1).
void for_each_S(const ConstraintSet& cs, const std::function<void(std::span<const int>)>& visit);

std::vector<std::vector<int>> enumerate_S(const ConstraintSet& cs);

/// beta_2m^(N) = sum_{sigma in NC2(2m)} sum_{k in S(sigma,N)} prod_{(u,v) in sigma} R(k_u, k_v).
/// N defaults to the kernel's support radius, which makes the sum exact.
/// Per-sigma sums are compensated and reduced in enumeration order whatever
/// the thread count.
double beta_combinatorial(const CovKernel& k, int m, std::optional<int> N = std::nullopt,
                          unsigned threads = 1);

MomentSequence moments_combinatorial(const CovKernel& k, int m_max, std::optional<int> N = std::nullopt,
                                     unsigned threads = 1);

/// |beta_2m^(N) - beta_2m^(N-1)|, a heuristic convergence indicator for truncated kernels.
double truncation_increment(const CovKernel& k, int m, int N, unsigned threads = 1);

struct RecursiveMoments {
  MomentSequence moments;
  /// H[m][i] = H_2m(x_i), m = 0..m_max.
  std::vector<std::vector<double>> H;
};

/// Requires 1 <= m_max <= 20.
RecursiveMoments beta_recursive(const SpectralDensity2D& f, int m_max);

/// (i,j) * (k,l) = (min(i,j) - min(k,l), max(k,l) - max(i,j)): the lag with
/// E[X_ij X_kl] = R((i,j) * (k,l)).
Lag star(int i, int j, int k, int l) noexcept;

inline constexpr int kWickMaxN = 8;
inline constexpr int kWickMaxPower = 6;

/// Exact E[Tr(A_n^p)] for the Gaussian ensemble with kernel k: sum over
/// i in {1..n}^p and all pairings pi of {1..p} of
/// prod_{(u,v) in pi} R((i_{u-1}, i_u) * (i_{v-1}, i_v)), with i_0 = i_p.
/// p must be even; n <= 8 and p <= 6 (SizeLimitError otherwise).
double wick_expected_trace(const CovKernel& k, int n, int p, unsigned threads = 1);

}  // namespace dwig
