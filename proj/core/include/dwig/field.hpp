#pragma once

// Ensemble generation: inputs eps on the window [1-K, n+K]^2, the moving
// average Z_{i,j} = sum c_{k,l} eps_{i-k,j-l} on [1,n]^2, and the symmetric
// matrix X_{i,j} = Z_{min(i,j), max(i,j)}.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dwig/kernel.hpp"
#include "dwig/rng.hpp"

namespace dwig {

struct EnsembleConfig {
  int n = 100;
  LinearCoeffs coeffs = LinearCoeffs::from_entries({{Lag{0, 0}, 1.0}});
  InputDist input_dist = InputDist::gaussian;
  std::uint64_t seed = 42;
  int replicates = 1;
  /// Bytes allowed for one replicate's buffers.
  std::size_t memory_cap = std::size_t{2} << 30;
};

/// Throws InvalidArgument for n < 1 or replicates < 1.
void validate(const EnsembleConfig& cfg);

/// Dense symmetric matrix, row-major.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;

  double operator()(int i, int j) const noexcept { return a[static_cast<std::size_t>(i) * n + j]; }
  double& operator()(int i, int j) noexcept { return a[static_cast<std::size_t>(i) * n + j]; }
  double trace() const noexcept;
  double frobenius_sq() const noexcept;
};

/// Bytes generate_field needs for cfg; compared against cfg.memory_cap.
std::size_t field_memory_bytes(const EnsembleConfig& cfg);

/// Entry matrix of replicate `replicate`, drawn from RNG stream `replicate`.
/// Separable coefficients are applied by rows and then by columns. Throws
/// SizeLimitError when the buffers would exceed cfg.memory_cap.
SymMatrix generate_field(const EnsembleConfig& cfg, int replicate = 0);

}  // namespace dwig
