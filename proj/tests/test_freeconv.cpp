#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "dwig/combinatorics.hpp"
#include "dwig/errors.hpp"
#include "dwig/freeconv.hpp"
#include "dwig/kernel.hpp"
#include "dwig/moments.hpp"
#include "dwig/presets.hpp"
#include "support.hpp"

using namespace dwig;

namespace {

constexpr double kPi = std::numbers::pi;

SeqMap geometric(double rho, int K) {
  SeqMap s;
  for (int k = -K; k <= K; ++k) s[k] = std::pow(rho, std::abs(k));
  return s;
}

RadialLaw law_of_factor(const SeqMap& rho) {
  RadialLaw law;
  law.factor = rho;
  law.evaluator = [rho](double x) { return symbol_1d(rho, x); };
  return law;
}

// Zero-sum tuple sum by direct enumeration.
double zero_sum_brute(const SeqMap& rho, int j) {
  int K = rho.rbegin()->first;
  std::vector<int> k(j, -K);
  double total = 0.0;
  for (;;) {
    int s = 0;
    double prod = 1.0;
    for (int x : k) {
      s += x;
      const auto it = rho.find(x);
      prod *= it == rho.end() ? 0.0 : it->second;
    }
    if (s == 0) total += prod;
    int pos = 0;
    while (pos < j && k[pos] == K) k[pos++] = -K;
    if (pos == j) break;
    ++k[pos];
  }
  return total;
}

}  // namespace

TEST(MuR, TrivialMoments) {
  const auto iid = radial_from_kernel(CovKernel::identity());
  for (int j = 1; j <= 6; ++j) EXPECT_DOUBLE_EQ(mu_r_moment(iid, j).value, 1.0);
  auto g = test::rng_for("mu-r-first");
  for (int t = 0; t < 5; ++t) EXPECT_NEAR(mu_r_moment(law_of_factor(test::random_correlation(g, 4)), 1).value, 1.0, 1e-15);
}

TEST(MuR, SecondMomentIsParseval) {
  auto g = test::rng_for("mu-r-parseval");
  for (int t = 0; t < 10; ++t) {
    const SeqMap rho = test::random_correlation(g, 1 + static_cast<int>(g() % 6));
    double s = 0.0;
    for (const auto& [k, v] : rho) s += v * v;
    const auto law = law_of_factor(rho);
    EXPECT_NEAR(mu_r_moment(law, 2).value, s, 1e-14);
    EXPECT_NEAR(mu_r_moment_quadrature(law, 2), s, 1e-12);
  }
}

TEST(MuR, ZeroSumMatchesEnumeration) {
  auto g = test::rng_for("zero-sum");
  for (int t = 0; t < 10; ++t) {
    const SeqMap rho = test::random_correlation(g, 1 + static_cast<int>(g() % 3));
    for (int j = 1; j <= 5; ++j) EXPECT_NEAR(zero_sum_moment(rho, j), zero_sum_brute(rho, j), 1e-13) << j;
  }
}

TEST(MuR, FactorAndQuadratureAgree) {
  auto g = test::rng_for("factor-vs-quadrature");
  for (int t = 0; t < 5; ++t) {
    const auto law = law_of_factor(test::random_correlation(g, 5));
    for (int j = 1; j <= 8; ++j) EXPECT_NEAR(mu_r_moment(law, j).value, mu_r_moment_quadrature(law, j), 1e-9) << j;
  }
}

TEST(Ar1Radial, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(ar1_radial(0.0).evaluator(1.3), 1.0);
  EXPECT_DOUBLE_EQ(ar1_radial(0.5).evaluator(0.0), 3.0);
  EXPECT_TRUE(ar1_radial(0.5).nonneg_certified);
  EXPECT_THROW(ar1_radial(1.0), InvalidArgument);
}

TEST(Ar1Radial, MomentsMatchTruncatedFactorAtRadiusForty) {
  const auto exact = ar1_radial(0.5);
  const auto truncated = law_of_factor(geometric(0.5, 40));
  for (int j = 1; j <= 6; ++j) {
    EXPECT_NEAR(mu_r_moment_quadrature(exact, j), mu_r_moment(truncated, j).value, 1e-8) << j;
  }
  EXPECT_NEAR(mu_r_moment(exact, 2).value, mu_r_moment(truncated, 2).value, 1e-8);
}

TEST(FreeMult, IidIsCatalan) {
  const auto fm = free_mult_semicircle(constant_radial(1.0), 8);
  for (int m = 1; m <= 8; ++m) EXPECT_EQ(fm.values[m - 1], static_cast<double>(catalan(m)));
  EXPECT_EQ(fm.first_divergent_m, 0);
  EXPECT_EQ(fm.moment(3), 0.0);
  EXPECT_EQ(fm.moment(0), 1.0);
}

TEST(FreeMult, FourthMomentFormula) {
  auto g = test::rng_for("free-m2");
  for (int t = 0; t < 10; ++t) {
    const SeqMap rho = test::random_correlation(g, 4);
    double s = 0.0;
    for (const auto& [k, v] : rho) s += v * v;
    EXPECT_NEAR(free_mult_semicircle(law_of_factor(rho), 2).values[1], 2 * s, 1e-14);
  }
}

TEST(FreeMult, SeparableEquivalence) {
  auto g = test::rng_for("separable-equivalence");
  std::vector<SeqMap> factors{geometric(0.5, 12), geometric(-0.4, 6)};
  for (int t = 0; t < 3; ++t) factors.push_back(test::random_correlation(g, 3));
  for (const auto& rho : factors) {
    const int K = rho.rbegin()->first;
    const auto k = separable_kernel(rho, K);
    const auto fm = free_mult_semicircle(radial_from_kernel(k), 5);
    const int m_max = K > 6 ? 4 : 5;
    for (int m = 1; m <= m_max; ++m) {
      const double comb = beta_combinatorial(k, m);
      EXPECT_NEAR(fm.values[m - 1], comb, 1e-9 * std::max(1.0, comb)) << "K=" << K << " m=" << m;
    }
  }
}

TEST(FreeMult, OrthogonalRowsCollapseToSemicircle) {
  const std::vector<LagMap> fixtures{
      {{Lag{0, 0}, 1.0}},
      {{Lag{0, 0}, 1.0}, {Lag{1, 1}, 1.0}},
      {{Lag{0, 0}, 1.0}, {Lag{0, 1}, 1.0}, {Lag{1, 0}, 1.0}, {Lag{1, 1}, -1.0}},
  };
  for (const auto& c : fixtures) {
    ASSERT_TRUE(has_orthogonal_rows(c));
    const auto k = kernel_from_coeffs(LinearCoeffs::from_entries(c));
    for (int u = 1; u <= k.support_radius(); ++u) EXPECT_EQ(k(u, 0), 0.0);
    const double s2 = k.variance();
    for (int m = 1; m <= 5; ++m)
      EXPECT_EQ(beta_combinatorial(k, m), static_cast<double>(catalan(m)) * std::pow(s2, m)) << "m=" << m;
  }
}

TEST(Presets, Example4IsDilatedSemicircle) {
  const auto p = make_preset("example4");
  ASSERT_TRUE(p.dilation);
  EXPECT_DOUBLE_EQ(*p.dilation, 2.0);
  const auto d = nlohmann::json::parse(p.descriptor_json);
  EXPECT_EQ(d["support"], nlohmann::json::array({-4.0, 4.0}));
  for (int m = 1; m <= 4; ++m)
    EXPECT_NEAR(beta_combinatorial(*p.kernel, m), catalan(m) * std::pow(4.0, m), 1e-12 * std::pow(4.0, m));
  PresetParams crossing;
  crossing.coeffs = LagMap{{Lag{0, 0}, 1.0}, {Lag{1, 0}, 1.0}};
  EXPECT_THROW(make_preset("example4", crossing), InvalidArgument);
}

TEST(Presets, Example5Atoms) {
  const auto p = make_preset("example5");
  const auto d = nlohmann::json::parse(p.descriptor_json);
  EXPECT_NEAR(d["radial_atoms"][0]["value"].get<double>(), kPi, 1e-15);
  EXPECT_NEAR(d["radial_atoms"][0]["probability"].get<double>(), 1 / kPi, 1e-15);
  EXPECT_NEAR(d["radial_atoms"][1]["probability"].get<double>(), 1 - 1 / kPi, 1e-15);
  for (int j = 1; j <= 5; ++j) EXPECT_NEAR(mu_r_moment(*p.radial, j).value, std::pow(kPi, j) / kPi, 1e-12);
  const auto fm = free_mult_semicircle(*p.radial, 4);
  for (int m = 1; m <= 4; ++m) EXPECT_NEAR(fm.values[m - 1], std::pow(kPi, m - 1) * catalan(m), 1e-9 * std::pow(kPi, m));
  EXPECT_NEAR(sinc_correlation(3), std::sin(3.0) / 3, 0.0);
}

TEST(Presets, Example3IsSemicircle) {
  const auto p = make_preset("example3");
  const auto d = nlohmann::json::parse(p.descriptor_json);
  EXPECT_EQ(d["limit"], "semicircle");
  for (int m = 1; m <= 4; ++m) EXPECT_NEAR(beta_combinatorial(*p.kernel, m), catalan(m), 1e-12 * catalan(m));
}

TEST(Presets, Example2RadialLawMatchesKernel) {
  for (int N : {1, 2}) {
    PresetParams params;
    params.N = N;
    const auto p = make_preset("example2", params);
    const auto fm = free_mult_semicircle(*p.radial, 3);
    for (int m = 1; m <= 3; ++m) {
      const double comb = beta_combinatorial(*p.kernel, m);
      EXPECT_NEAR(fm.values[m - 1], comb, 1e-9 * comb) << "N=" << N << " m=" << m;
    }
  }
}

TEST(Presets, Example1) {
  const auto p = make_preset("example1");
  EXPECT_TRUE(p.kernel->is_separable());
  EXPECT_DOUBLE_EQ((*p.kernel)(1, 1), 0.25);
  const auto k = kernel_from_coeffs(*p.coeffs);
  for (int u = -3; u <= 3; ++u)
    for (int v = -3; v <= 3; ++v) EXPECT_NEAR(k(u, v), (*p.kernel)(u, v), 1e-9);
}

TEST(Presets, UnknownName) { EXPECT_THROW(make_preset("example7"), InvalidArgument); }

TEST(Semicircle, References) {
  EXPECT_EQ(semicircle_moment(3), 5.0);
  EXPECT_DOUBLE_EQ(semicircle_density(0.0), 1 / kPi);
  EXPECT_EQ(semicircle_density(2.0), 0.0);
  EXPECT_DOUBLE_EQ(semicircle_cdf(0.0), 0.5);
  EXPECT_EQ(semicircle_cdf(-2.5), 0.0);
  EXPECT_EQ(semicircle_cdf(2.0), 1.0);
  // cdf' = density, checked by central differences
  for (double x : {-1.5, -0.3, 0.8, 1.9}) EXPECT_NEAR((semicircle_cdf(x + 1e-6) - semicircle_cdf(x - 1e-6)) / 2e-6, semicircle_density(x), 1e-7);
}

TEST(Example6, DivergenceFlags) {
  const auto p = make_preset("example6");
  EXPECT_FALSE(mu_r_moment(*p.radial, 1).divergent);
  EXPECT_TRUE(mu_r_moment(*p.radial, 2).divergent);
  const auto fm = free_mult_semicircle(*p.radial, 3);
  EXPECT_EQ(fm.values[0], 1.0);
  EXPECT_TRUE(std::isinf(fm.values[1]));
  EXPECT_EQ(fm.first_divergent_m, 2);
}

TEST(Example6, CorrelationMatchesDirectIntegral) {
  // (1/2pi) int e^{ikx} (sqrt(pi)/2)|x|^{-1/2} dx, substituting x = t^2 and using the midpoint rule
  for (int k : {1, 2, 5, 17}) {
    const int n = 200000;
    const double h = std::sqrt(kPi) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) * h;
      s += std::cos(k * t * t);
    }
    EXPECT_NEAR(inverse_sqrt_correlation(k), s * h / std::sqrt(kPi), 1e-9) << k;
  }
}

TEST(Example6, TruncatedFourthMomentGrows) {
  double prev = 0.0;
  for (int K : {10, 30, 100, 300}) {
    SeqMap rho;
    for (int k = -K; k <= K; ++k) rho[k] = inverse_sqrt_correlation(k);
    const double b4 = free_mult_semicircle(law_of_factor(rho), 2).values[1];
    double s = 0.0;
    for (const auto& [k, v] : rho) s += v * v;
    EXPECT_NEAR(b4, 2 * s, 1e-12 * b4);
    EXPECT_GT(b4, prev) << K;
    prev = b4;
  }
}
