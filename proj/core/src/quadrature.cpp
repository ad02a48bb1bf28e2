#include "dwig/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "dwig/errors.hpp"

namespace dwig {

Quadrature Quadrature::periodic_trapezoid(int n) {
  if (n < 1) throw InvalidArgument("quadrature needs at least one node");
  Quadrature q;
  q.kind = Kind::periodic_trapezoid;
  q.nodes.resize(n);
  q.weights.assign(n, 1.0 / n);
  for (int i = 0; i < n; ++i) q.nodes[i] = (i + 0.5) / n;
  return q;
}

Quadrature Quadrature::gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("quadrature needs at least one node");
  Quadrature q;
  q.kind = Kind::gauss_legendre;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton on P_n from the Chebyshev-like initial guess; symmetric halves.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = 0.5 * (1.0 - x);
    q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    q.weights[i] = q.weights[n - 1 - i] = 0.5 * w;
  }
  return q;
}

Quadrature Quadrature::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("quadrature spec must be kind:N, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("bad node count in quadrature spec '" + spec + "'");
  }
  if (kind == "trap") return periodic_trapezoid(n);
  if (kind == "gl") return gauss_legendre(n);
  throw InvalidArgument("unknown quadrature kind '" + kind + "'");
}

}  // namespace dwig
