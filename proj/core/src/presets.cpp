#include "dwig/presets.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "dwig/errors.hpp"

namespace dwig {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

double geometric(double rho, int k) { return std::pow(rho, std::abs(k)); }

Preset example1(const PresetParams& p) {
  if (!(std::abs(p.rho) < 1.0)) throw InvalidArgument("example1 needs |rho| < 1");
  if (p.radius < 0) throw InvalidArgument("radius must be non-negative");
  const double tail = 2.0 * std::pow(std::abs(p.rho), p.radius + 1) / (1.0 - std::abs(p.rho));
  Preset out;
  out.name = "example1";
  out.kernel = separable_kernel([&](int k) { return geometric(p.rho, k); }, p.radius, tail);
  out.coeffs = LinearCoeffs::separable(spectral_sqrt_factor(*out.kernel->separable_factor()));
  out.radial = ar1_radial(p.rho);
  out.descriptor_json = json{{"preset", "example1"},
                             {"limit", "free_multiplicative_convolution"},
                             {"semicircle", true},
                             {"radial_law", "(1-rho^2)/(1-2*rho*cos(U)+rho^2), U ~ Uniform(-pi,pi)"},
                             {"rho", p.rho},
                             {"kernel_radius", p.radius},
                             {"kernel_truncation_error", tail}}
                            .dump();
  return out;
}

Preset example2(const PresetParams& p) {
  if (p.N < 1) throw InvalidArgument("example2 needs N >= 1");
  const int N = p.N;
  LagMap c;
  for (int k = -N; k <= 0; ++k)
    for (int l = -N; l <= 0; ++l) c[Lag{k, l}] = 1.0;
  Preset out;
  out.name = "example2";
  out.coeffs = LinearCoeffs::from_entries(c);
  out.kernel = kernel_from_coeffs(*out.coeffs);
  // A = (N+1) Y with Y separable, rho_k = (N+1-|k|)/(N+1); scaling r by (N+1) scales the law.
  SeqMap tri;
  for (int k = -N; k <= N; ++k) tri[k] = N + 1 - std::abs(k);
  RadialLaw law;
  law.name = "example2";
  law.factor = tri;
  law.evaluator = [tri](double x) { return symbol_1d(tri, x); };
  law.nonneg_certified = true;  // Fejer kernel
  out.radial = law;
  out.descriptor_json = json{{"preset", "example2"},
                             {"limit", "free_multiplicative_convolution"},
                             {"semicircle", true},
                             {"radial_law", "(N+1) + 2*sum_{k=1}^{N} (N+1-k)*cos(k*U), U ~ Uniform(-pi,pi)"},
                             {"N", N},
                             {"second_moment", static_cast<double>((N + 1) * (N + 1))}}
                            .dump();
  return out;
}

Preset example3(const PresetParams& p) {
  if (!(std::abs(p.rho) < 1.0)) throw InvalidArgument("example3 needs |rho| < 1");
  // Diagonal d = i - j carries an independent copy of a stationary sequence
  // with autocovariance gamma(h) = rho^{|h|}: R(u,v) = gamma(u) 1{u + v = 0}.
  LagMap values;
  SeqMap gamma;
  for (int u = -p.radius; u <= p.radius; ++u) {
    values[Lag{u, -u}] = geometric(p.rho, u);
    gamma[u] = geometric(p.rho, u);
  }
  LagMap c;
  for (const auto& [a, b] : spectral_sqrt_factor(gamma)) c[Lag{a, a}] = b;
  Preset out;
  out.name = "example3";
  out.kernel = CovKernel::from_values(values);
  out.coeffs = LinearCoeffs::from_entries(c);
  out.radial = constant_radial(1.0);
  out.dilation = 1.0;
  out.descriptor_json = json{{"preset", "example3"},
                             {"limit", "semicircle"},
                             {"dilation", 1.0},
                             {"support", {-2.0, 2.0}},
                             {"diagonal_autocovariance", "rho^|h|"},
                             {"rho", p.rho}}
                            .dump();
  return out;
}

Preset example4(const PresetParams& p) {
  const LagMap c = p.coeffs.value_or(LagMap{{Lag{0, 0}, std::sqrt(2.0)}, {Lag{1, 1}, std::sqrt(2.0)}});
  if (!has_orthogonal_rows(c)) throw InvalidArgument("example4 coefficients must have orthogonal rows");
  double energy = 0.0;
  for (const auto& [lag, v] : c) energy += v * v;
  const double sigma = std::sqrt(energy);
  Preset out;
  out.name = "example4";
  out.coeffs = LinearCoeffs::from_entries(c);
  out.kernel = kernel_from_coeffs(*out.coeffs);
  out.radial = constant_radial(sigma);
  out.dilation = sigma;
  out.descriptor_json = json{{"preset", "example4"},
                             {"limit", "semicircle"},
                             {"dilation", sigma},
                             {"support", {-2.0 * sigma, 2.0 * sigma}},
                             {"density", "sqrt(4 - x^2/sigma^2) / (2*pi*sigma)"}}
                            .dump();
  return out;
}

Preset example5(const PresetParams& p) {
  Preset out;
  out.name = "example5";
  out.kernel = separable_kernel(sinc_correlation, p.radius);
  RadialLaw law;
  law.name = "example5";
  law.evaluator = [](double x) { return std::abs(x) <= 1.0 ? kPi : 0.0; };
  law.exact = [](int j) -> std::optional<double> { return std::pow(kPi, j - 1); };
  law.nonneg_certified = true;
  out.radial = law;
  out.descriptor_json =
      json{{"preset", "example5"},
           {"limit", "classical_product"},
           {"radial_atoms", {{{"value", kPi}, {"probability", 1.0 / kPi}}, {{"value", 0.0}, {"probability", 1.0 - 1.0 / kPi}}}},
           {"lsd", "law of Pi*W, W semicircle, Pi in {sqrt(pi), 0} w.p. {1/pi, 1-1/pi}, independent"},
           {"scale_atoms", {{{"value", std::sqrt(kPi)}, {"probability", 1.0 / kPi}}, {{"value", 0.0}, {"probability", 1.0 - 1.0 / kPi}}}},
           {"summable", false},
           {"kernel_radius", p.radius}}
          .dump();
  return out;
}

Preset example6(const PresetParams& p) {
  Preset out;
  out.name = "example6";
  out.kernel = separable_kernel(inverse_sqrt_correlation, p.radius);
  RadialLaw law;
  law.name = "example6";
  law.evaluator = [](double x) { return x == 0.0 ? 0.0 : 0.5 * std::sqrt(kPi) / std::sqrt(std::abs(x)); };
  law.exact = [](int j) -> std::optional<double> {
    if (j == 1) return 1.0;
    return std::nullopt;
  };
  law.divergent_from = 2;
  law.nonneg_certified = true;
  out.radial = law;
  out.descriptor_json = json{{"preset", "example6"},
                             {"limit", "free_multiplicative_convolution"},
                             {"semicircle", true},
                             {"radial_law", "(sqrt(pi)/2)*|U|^(-1/2), U ~ Uniform(-pi,pi)"},
                             {"fourth_moment", "infinite"},
                             {"kernel_radius", p.radius}}
                            .dump();
  return out;
}

}  // namespace

bool has_orthogonal_rows(const LagMap& c, double tol) {
  std::set<int> rows;
  for (const auto& [lag, v] : c) rows.insert(lag.u);
  for (int k : rows)
    for (int k2 : rows) {
      if (k2 <= k) continue;
      double dot = 0.0;
      for (const auto& [lag, v] : c) {
        if (lag.u != k) continue;
        const auto it = c.find(Lag{k2, lag.v});
        if (it != c.end()) dot += v * it->second;
      }
      if (std::abs(dot) > tol) return false;
    }
  return true;
}

Preset make_preset(const std::string& name, const PresetParams& params) {
  if (name == "example1") return example1(params);
  if (name == "example2") return example2(params);
  if (name == "example3") return example3(params);
  if (name == "example4") return example4(params);
  if (name == "example5") return example5(params);
  if (name == "example6") return example6(params);
  throw InvalidArgument("unknown preset '" + name + "' (expected example1..example6)");
}

}  // namespace dwig
