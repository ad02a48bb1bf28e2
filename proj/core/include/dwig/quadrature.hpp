#pragma once

#include <string>
#include <vector>

namespace dwig {

/// Integration rule on [0,1].
struct Quadrature {
  enum class Kind { periodic_trapezoid, gauss_legendre };

  Kind kind = Kind::periodic_trapezoid;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  /// Nodes (i + 1/2)/n with equal weights. Exact for every trigonometric
  /// polynomial sum_j a_j exp(2 pi i j x) with |j| < n.
  static Quadrature periodic_trapezoid(int n);

  /// Gauss-Legendre nodes mapped to [0,1]. Exact for polynomials of degree < 2n.
  static Quadrature gauss_legendre(int n);

  /// Parses "trap:N" or "gl:N".
  static Quadrature parse(const std::string& spec);
};

}  // namespace dwig
