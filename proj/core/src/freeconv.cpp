#include "dwig/freeconv.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dwig/combinatorics.hpp"
#include "dwig/errors.hpp"
#include "dwig/quadrature.hpp"

namespace dwig {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<RadialMoment> RadialLaw::moments(int j_max) const {
  std::vector<RadialMoment> out;
  out.reserve(j_max);
  for (int j = 1; j <= j_max; ++j) out.push_back(mu_r_moment(*this, j));
  return out;
}

RadialLaw radial_from_kernel(const CovKernel& k) {
  std::optional<SeqMap> rho = k.separable_factor();
  if (!rho) {
    if (!k.is_separable()) throw InvalidArgument("radial law needs a separable kernel with R(0,0) = 1");
    rho = k.row_factor();
  }
  RadialLaw law;
  law.name = "kernel";
  law.factor = rho;
  law.evaluator = [r = *rho](double x) { return symbol_1d(r, x); };
  double min_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) min_r = std::min(min_r, law.evaluator(-kPi + 2.0 * kPi * i / 4096));
  law.nonneg_certified = min_r >= -1e-10;
  return law;
}

RadialLaw ar1_radial(double rho) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("AR(1) radial law needs |rho| < 1");
  RadialLaw law;
  law.name = "ar1";
  law.evaluator = [rho](double x) { return (1.0 - rho * rho) / (1.0 - 2.0 * rho * std::cos(x) + rho * rho); };
  law.exact = [rho](int j) -> std::optional<double> {
    if (j == 1) return 1.0;
    if (j == 2) return (1.0 + rho * rho) / (1.0 - rho * rho);
    return std::nullopt;
  };
  law.nonneg_certified = true;
  return law;
}

RadialLaw constant_radial(double c) {
  RadialLaw law;
  law.name = "constant";
  law.evaluator = [c](double) { return c; };
  law.exact = [c](int j) -> std::optional<double> { return std::pow(c, j); };
  law.nonneg_certified = c >= 0.0;
  return law;
}

double zero_sum_moment(const SeqMap& rho, int j) {
  if (j < 1) throw InvalidArgument("moment order must be positive");
  int K = 0;
  for (const auto& [k, v] : rho) K = std::max(K, std::abs(k));
  // dist[s + off] = sum over t-tuples with sum s of prod rho.
  std::vector<double> base(2 * K + 1, 0.0);
  for (const auto& [k, v] : rho) base[k + K] = v;
  auto convolve = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t k = 0; k < b.size(); ++k) c[i + k] += a[i] * b[k];
    }
    return c;
  };
  const int left = j / 2;
  const int right = j - left;
  std::vector<double> a = base;
  for (int t = 1; t < right; ++t) a = convolve(a, base);
  if (left == 0) return a[static_cast<std::size_t>(K)];
  std::vector<double> b = base;
  for (int t = 1; t < left; ++t) b = convolve(b, base);
  // a is indexed by s + right*K, b by s + left*K: sum_s a(s) b(-s).
  double total = 0.0;
  const int ra = right * K, rb = left * K;
  for (int s = -std::min(ra, rb); s <= std::min(ra, rb); ++s) total += a[s + ra] * b[-s + rb];
  return total;
}

double mu_r_moment_quadrature(const RadialLaw& law, int j, int samples) {
  if (!law.evaluator) throw InvalidArgument("radial law has no evaluator");
  double s = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = -kPi + 2.0 * kPi * (i + 0.5) / samples;
    s += std::pow(law.evaluator(x), j);
  }
  return s / samples;
}

RadialMoment mu_r_moment(const RadialLaw& law, int j) {
  if (j < 1) throw InvalidArgument("moment order must be positive");
  if (law.divergent_from > 0 && j >= law.divergent_from)
    return {std::numeric_limits<double>::infinity(), true};
  if (law.exact)
    if (auto v = law.exact(j)) return {*v, false};
  if (law.factor) return {zero_sum_moment(*law.factor, j), false};
  return {mu_r_moment_quadrature(law, j), false};
}

double FreeProductMoments::moment(int p) const {
  if (p == 0) return 1.0;
  if (p % 2 != 0) return 0.0;
  if (p < 0 || p / 2 > static_cast<int>(values.size())) throw InvalidArgument("moment not computed");
  return values[p / 2 - 1];
}

FreeProductMoments free_mult_semicircle(const RadialLaw& law, int m_max) {
  if (m_max < 1) throw InvalidArgument("m_max must be positive");
  if (m_max > kDefaultEnumerationCap)
    throw SizeLimitError("free product moments up to 2m = " + std::to_string(2 * m_max), kDefaultEnumerationCap);
  const auto mom = law.moments(2 * m_max);
  FreeProductMoments out;
  for (int m = 1; m <= m_max; ++m) {
    double total = 0.0;
    bool divergent = false;
    for (const auto& sigma : enumerate_nc2(m)) {
      double prod = 1.0;
      for (int l : kreweras(sigma).block_sizes()) {
        const auto& r = mom[static_cast<std::size_t>(l - 1)];
        divergent = divergent || r.divergent;
        prod *= r.value;
      }
      total += prod;
    }
    if (divergent) {
      total = std::numeric_limits<double>::infinity();
      if (out.first_divergent_m == 0) out.first_divergent_m = m;
    }
    out.values.push_back(total);
  }
  return out;
}

double semicircle_moment(int m) { return static_cast<double>(catalan(m)); }

double semicircle_density(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

double sinc_correlation(int k) { return k == 0 ? 1.0 : std::sin(static_cast<double>(k)) / k; }

double inverse_sqrt_correlation(int k) {
  // (1/2pi) int_{-pi}^{pi} cos(kx) (sqrt(pi)/2) |x|^{-1/2} dx = (1/sqrt(pi)) int_0^{sqrt(pi)} cos(k t^2) dt
  if (k == 0) return 1.0;
  static const Quadrature gl = Quadrature::gauss_legendre(20);
  const double upper = std::sqrt(kPi);
  const int panels = std::abs(k) + 8;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = upper * p / panels, b = upper * (p + 1) / panels;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double t = a + (b - a) * gl.nodes[i];
      s += (b - a) * gl.weights[i] * std::cos(k * t * t);
    }
  }
  return s / std::sqrt(kPi);
}

}  // namespace dwig
