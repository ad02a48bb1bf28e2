#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dwig/eigen.hpp"
#include "dwig/errors.hpp"
#include "dwig/experiment.hpp"
#include "dwig/field.hpp"
#include "dwig/freeconv.hpp"
#include "dwig/kernel.hpp"
#include "dwig/presets.hpp"
#include "dwig/rng.hpp"
#include "dwig/spectrum.hpp"
#include "support.hpp"

using namespace dwig;

namespace {

constexpr double kPi = std::numbers::pi;

SymMatrix matrix(int n, std::initializer_list<double> v) { return SymMatrix{n, std::vector<double>(v)}; }

void check_decomposition(const SymMatrix& a) {
  const auto e = symmetric_eigen(a);
  const int n = a.n;
  double norm = 0.0;
  for (double x : a.a) norm = std::max(norm, std::abs(x));
  norm = std::max(norm * n, 1.0);
  for (int k = 0; k < n; ++k) {
    if (k > 0) { EXPECT_LE(e.values[k - 1], e.values[k]); }
    for (int i = 0; i < n; ++i) {
      double av = 0.0;
      for (int j = 0; j < n; ++j) av += a(i, j) * e.vectors[k * n + j];
      EXPECT_LE(std::abs(av - e.values[k] * e.vectors[k * n + i]), 1e-10 * norm);
    }
    for (int l = 0; l < n; ++l) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += e.vectors[k * n + i] * e.vectors[l * n + i];
      EXPECT_NEAR(dot, k == l ? 1.0 : 0.0, 1e-8);
    }
  }
  double s1 = 0.0, s2 = 0.0;
  for (double x : e.values) {
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1, a.trace(), 1e-10 * norm);
  EXPECT_NEAR(s2, a.frobenius_sq(), 1e-10 * a.frobenius_sq());
  const auto values_only = symmetric_eigenvalues(a);
  for (int k = 0; k < n; ++k) EXPECT_NEAR(values_only[k], e.values[k], 1e-10 * norm);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-4.0 * x)); }

// Smallest e on a grid of step h for which the defining corridor holds on a fine x grid.
double levy_grid_oracle(const std::vector<double>& samples, const CdfFn& G, double h) {
  const EmpiricalSpectrum F(samples);
  for (double e = 0.0; e <= 1.0 + h; e += h) {
    bool ok = true;
    for (double x = -4.0; x <= 4.0 && ok; x += 2.5e-4)
      ok = F.cdf(x - e) - e <= G(x) + 1e-12 && G(x) <= F.cdf(x + e) + e + 1e-12;
    if (ok) return e;
  }
  return 1.0;
}

}  // namespace

TEST(Rng, DeterministicAndStreamed) {
  CounterRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, d.next());
  }
  EXPECT_EQ(a.counter(), 100u);
  EXPECT_EQ(parse_input_dist("rademacher"), InputDist::rademacher);
  EXPECT_THROW(parse_input_dist("cauchy"), InvalidArgument);
}

TEST(Rng, InputsHaveUnitVariance) {
  for (auto d : {InputDist::gaussian, InputDist::rademacher, InputDist::uniform}) {
    CounterRng r(7, 3);
    const int n = 400000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = draw(d, r);
      s += x;
      s2 += x * x;
      s4 += x * x * x * x;
      if (d == InputDist::rademacher) { ASSERT_EQ(std::abs(x), 1.0); }
      if (d == InputDist::uniform) { ASSERT_LE(std::abs(x), std::sqrt(3.0)); }
    }
    const double m4 = s4 / n;
    EXPECT_LT(std::abs(s / n), 5 * std::sqrt(1.0 / n)) << to_string(d);
    EXPECT_LT(std::abs(s2 / n - 1.0), 5 * std::sqrt((m4 - 1.0) / n) + 1e-12) << to_string(d);
  }
}

TEST(Eigen, ClosedForms) {
  const auto id = EmpiricalSpectrum::of(matrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  for (double x : id.eigenvalues()) EXPECT_NEAR(x, 1 / std::sqrt(3.0), 1e-15);
  const auto swap = EmpiricalSpectrum::of(matrix(2, {0, 1, 1, 0}));
  EXPECT_NEAR(swap.eigenvalues()[0], -1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(swap.eigenvalues()[1], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(symmetric_eigenvalues(matrix(1, {3.5})), std::vector<double>{3.5});
}

TEST(Eigen, TridiagonalToeplitz) {
  for (int n : {5, 40, 129}) {
    SymMatrix a{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
    const auto v = symmetric_eigenvalues(a);
    for (int k = 1; k <= n; ++k) EXPECT_NEAR(v[n - k], 2 * std::cos(k * kPi / (n + 1)), 1e-12);
  }
}

TEST(Eigen, RandomMatrices) {
  auto g = test::rng_for("eigen");
  for (int n : {2, 3, 8, 8, 8, 17, 60}) check_decomposition(test::random_symmetric(g, n));
}

TEST(Eigen, RepeatedAndZeroEigenvalues) {
  SymMatrix a{6, std::vector<double>(36, 1.0)};
  check_decomposition(a);
  const auto v = symmetric_eigenvalues(a);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(v[i], 0.0, 1e-13);
  EXPECT_NEAR(v[5], 6.0, 1e-13);
  check_decomposition(SymMatrix{4, std::vector<double>(16, 0.0)});
}

TEST(Eigen, RejectsAsymmetric) {
  EXPECT_THROW(symmetric_eigenvalues(matrix(2, {0, 1, 1.1, 0})), InvalidArgument);
  EXPECT_NO_THROW(require_symmetric(matrix(2, {0, 1, 1 + 1e-14, 0})));
}

TEST(Spectrum, MomentsAndCdf) {
  const EmpiricalSpectrum s({2.0, -1.0, 1.0, 0.0});
  EXPECT_EQ(s.eigenvalues(), (std::vector<double>{-1, 0, 1, 2}));
  EXPECT_EQ(s.moment(0), 1.0);
  EXPECT_DOUBLE_EQ(s.moment(2), 1.5);
  EXPECT_DOUBLE_EQ(s.moment(3), 2.0);
  EXPECT_EQ(s.cdf(-1.5), 0.0);
  EXPECT_EQ(s.cdf(0.0), 0.5);
  EXPECT_EQ(s.cdf(5.0), 1.0);
}

TEST(Spectrum, TraceIdentity) {
  auto g = test::rng_for("trace");
  const auto a = test::random_symmetric(g, 50);
  const auto s = EmpiricalSpectrum::of(a);
  double sum = 0.0;
  for (double x : s.eigenvalues()) sum += x;
  EXPECT_NEAR(sum, a.trace() / std::sqrt(50.0), 1e-8 * 50);
}

TEST(Field, DeterministicPerSeedAndReplicate) {
  EnsembleConfig cfg;
  cfg.n = 20;
  cfg.coeffs = LinearCoeffs::from_entries({{Lag{0, 0}, 1.0}, {Lag{1, 0}, 0.5}, {Lag{0, 1}, 0.5}});
  EXPECT_EQ(generate_field(cfg, 3).a, generate_field(cfg, 3).a);
  EXPECT_NE(generate_field(cfg, 3).a, generate_field(cfg, 4).a);
  auto other = cfg;
  other.seed = 43;
  EXPECT_NE(generate_field(cfg, 0).a, generate_field(other, 0).a);
}

TEST(Field, DeltaCoefficientsGiveSymmetrizedInputs) {
  EnsembleConfig cfg;
  cfg.n = 30;
  const auto x = generate_field(cfg);
  double s2 = 0.0;
  int count = 0;
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.n; ++j) {
      EXPECT_EQ(x(i, j), x(j, i));
      if (i <= j) {
        s2 += x(i, j) * x(i, j);
        ++count;
      }
    }
  EXPECT_NEAR(s2 / count, 1.0, 5 * std::sqrt(2.0 / count));

  cfg.input_dist = InputDist::rademacher;
  for (double v : generate_field(cfg).a) EXPECT_EQ(std::abs(v), 1.0);
}

TEST(Field, CovarianceMatchesKernel) {
  auto g = test::rng_for("field-covariance");
  const std::vector<LinearCoeffs> coeffs{
      LinearCoeffs::from_entries(test::random_symmetric_coeffs(g, 1, 9)),
      LinearCoeffs::separable({{-1, 0.6}, {0, 1.0}, {1, 0.3}}),
  };
  for (const auto& c : coeffs) {
    const auto k = kernel_from_coeffs(c);
    EnsembleConfig cfg;
    cfg.n = 12;
    cfg.coeffs = c;
    const int reps = 2000;
    // Z_{a,b} and Z_{a-u, b+v} have covariance R(u,v); both above the diagonal here.
    const int a = 4, b = 8;
    std::vector<std::pair<int, int>> lags{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 1}, {1, -1}, {2, 2}};
    std::vector<double> sum(lags.size(), 0.0), sum2(lags.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
      const auto x = generate_field(cfg, r);
      for (std::size_t t = 0; t < lags.size(); ++t) {
        const double p = x(a - 1, b - 1) * x(a - lags[t].first - 1, b + lags[t].second - 1);
        sum[t] += p;
        sum2[t] += p * p;
      }
    }
    for (std::size_t t = 0; t < lags.size(); ++t) {
      const double mean = sum[t] / reps;
      const double se = std::sqrt((sum2[t] / reps - mean * mean) / reps);
      EXPECT_NEAR(mean, k(lags[t].first, lags[t].second), 5 * se) << lags[t].first << "," << lags[t].second;
    }
  }
}

TEST(Field, MemoryCapAndValidation) {
  EnsembleConfig cfg;
  cfg.n = 1000;
  cfg.memory_cap = 1000;
  EXPECT_GT(field_memory_bytes(cfg), 1000u);
  EXPECT_THROW(generate_field(cfg), SizeLimitError);
  cfg.n = 0;
  EXPECT_THROW(validate(cfg), InvalidArgument);
}

TEST(Distances, IdenticalLawIsZero) {
  const std::vector<double> s{-1.0, 0.0, 2.0};
  const EmpiricalSpectrum F(s);
  const auto d = distances(F.eigenvalues(), [&](double x) { return F.cdf(x); });
  EXPECT_NEAR(d.levy, 0.0, 1e-15);
  EXPECT_NEAR(d.ks, 0.0, 1e-15);
}

TEST(Distances, PointMasses) {
  for (double c : {0.05, 0.2, 0.7, 1.0, 3.0}) {
    const auto d = distances(std::vector<double>{0.0}, [c](double x) { return x >= c ? 1.0 : 0.0; });
    EXPECT_NEAR(d.levy, std::min(c, 1.0), 1e-12) << c;
    EXPECT_NEAR(d.ks, 1.0, 1e-15);
  }
}

TEST(Distances, ShiftedLaw) {
  auto g = test::rng_for("levy-shift");
  std::normal_distribution<double> nd;
  std::vector<double> s(2000);
  for (double& x : s) x = nd(g) / 2.0;
  std::sort(s.begin(), s.end());
  const EmpiricalSpectrum F(s);
  for (double delta : {0.01, 0.05, 0.2}) {
    const auto d = distances(s, [&](double x) { return F.cdf(x - delta); });
    EXPECT_LE(d.levy, delta + 1e-12);
    EXPECT_LE(d.levy, d.ks + 1e-12);
    // an ε-corridor absorbs a shift only up to the slope of F: L >= delta / (1 + sup density)
    EXPECT_GE(d.levy, delta / (1.0 + 2.0 / std::sqrt(2 * kPi) * 1.5));
  }
}

TEST(Distances, MatchGridOracle) {
  auto g = test::rng_for("levy-oracle");
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 6; ++t) {
    std::vector<double> s(3 + t);
    for (double& x : s) x = u(g);
    std::sort(s.begin(), s.end());
    const double shift = u(g) / 4;
    const CdfFn G = [shift](double x) { return logistic(x - shift); };
    const auto d = distances(s, G);
    EXPECT_NEAR(d.levy, levy_grid_oracle(s, G, 1e-3), 2e-3);
    EXPECT_LE(d.levy, d.ks + 1e-12);
    double ks = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ks = std::max(ks, std::abs(static_cast<double>(i + 1) / s.size() - G(s[i])));
      ks = std::max(ks, std::abs(static_cast<double>(i) / s.size() - G(s[i])));
    }
    EXPECT_NEAR(d.ks, ks, 1e-12);
  }
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  EnsembleConfig cfg;
  cfg.n = 60;
  cfg.replicates = 4;
  ExperimentOptions one, three;
  three.threads = 3;
  const auto a = run_experiment(cfg, Theory::semicircle(), one);
  const auto b = run_experiment(cfg, Theory::semicircle(), three);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.moments_csv(), b.moments_csv());
  EXPECT_EQ(a.moments_csv().substr(0, 22), "p,mean,std,stderr,theo");
}

TEST(Experiment, Example4DilatesSecondMoment) {
  const auto p = make_preset("example4");
  EnsembleConfig cfg;
  cfg.n = 200;
  cfg.replicates = 4;
  cfg.coeffs = *p.coeffs;
  const auto r = run_experiment(cfg, Theory::semicircle(*p.dilation));
  EXPECT_NEAR(r.moment(2).mean, 4.0, 3 * r.moment(2).stderr_ + 0.02);
  EXPECT_EQ(*r.moment(2).theory, 4.0);
  ASSERT_TRUE(r.ks_mean);
  EXPECT_LT(*r.ks_mean, 0.1);
}

TEST(Experiment, UniversalityAcrossInputs) {
  EnsembleConfig cfg;
  cfg.n = 250;
  cfg.replicates = 12;
  const auto gauss = run_experiment(cfg, Theory::semicircle());
  for (auto d : {InputDist::rademacher, InputDist::uniform}) {
    cfg.input_dist = d;
    const auto other = run_experiment(cfg, Theory::semicircle());
    for (int p : {2, 4}) {
      const auto& a = gauss.moment(p);
      const auto& b = other.moment(p);
      EXPECT_LE(std::abs(a.mean - b.mean), 3 * (a.stderr_ + b.stderr_)) << to_string(d) << " p=" << p;
    }
  }
}

TEST(Experiment, SymmetryOfTheLaw) {
  EnsembleConfig cfg;
  cfg.n = 150;
  cfg.replicates = 8;
  cfg.coeffs = LinearCoeffs::separable({{-1, 0.5}, {0, 1.0}, {1, 0.5}});
  const auto r = run_experiment(cfg, Theory::semicircle());
  for (int p : {1, 3, 5}) EXPECT_LE(std::abs(r.moment(p).mean), 3 * r.moment(p).stderr_ + 1e-12) << p;
  for (int p : {2, 4, 6})
    for (const auto& row : r.per_replicate) EXPECT_GE(row[p - 1], 0.0);
  EXPECT_LE(std::abs(r.cdf0_mean - 0.5), 3 * r.cdf0_std / std::sqrt(8.0) + 1.0 / cfg.n);
  for (const auto& d : r.replicate_distances) EXPECT_LE(d.levy, d.ks + 1e-12);
}

TEST(Experiment, VarianceDecaysWithN) {
  const std::vector<LinearCoeffs> kernels{LinearCoeffs::from_entries({{Lag{0, 0}, 1.0}}),
                                          LinearCoeffs::separable({{-1, 0.5}, {0, 1.0}, {1, 0.5}})};
  for (const auto& c : kernels) {
    EnsembleConfig cfg;
    cfg.coeffs = c;
    cfg.replicates = 6;
    cfg.n = 250;
    const auto small = run_experiment(cfg, Theory::semicircle());
    cfg.n = 1000;
    const auto large = run_experiment(cfg, Theory::semicircle());
    for (int p : {2, 4}) EXPECT_LT(large.moment(p).std, small.moment(p).std) << p;
  }
}

TEST(Experiment, ReportJsonHasConfigEcho) {
  EnsembleConfig cfg;
  cfg.n = 30;
  cfg.replicates = 2;
  cfg.seed = 7;
  const auto r = run_experiment(cfg, Theory::semicircle());
  const std::string j = r.to_json();
  EXPECT_NE(j.find("\"seed\": 7"), std::string::npos) << j;
  EXPECT_NE(j.find("\"n\": 30"), std::string::npos);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}
