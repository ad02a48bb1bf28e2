#pragma once

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by QL iterations with implicit Wilkinson-type shifts.

#include <vector>

#include "dwig/field.hpp"

namespace dwig {

struct EigenDecomposition {
  int n = 0;
  /// Ascending.
  std::vector<double> values;
  /// vectors[k * n + i] = component i of the unit eigenvector for values[k].
  std::vector<double> vectors;
};

inline constexpr int kMaxQlSweeps = 50;

/// Throws InvalidArgument unless |a_ij - a_ji| <= tol * max(1, max |a|).
void require_symmetric(const SymMatrix& a, double tol = 1e-12);

/// Eigenvalues only (no accumulation of the transformations).
/// Throws ConvergenceError after kMaxQlSweeps sweeps on one eigenvalue.
std::vector<double> symmetric_eigenvalues(const SymMatrix& a);

EigenDecomposition symmetric_eigen(const SymMatrix& a);

}  // namespace dwig
