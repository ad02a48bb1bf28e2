#include "dwig/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dwig/errors.hpp"

namespace dwig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSymbolSamples = 4096;

double rel_tol(double scale) { return 1e-12 * std::max(1.0, scale); }

}  // namespace

// ---------------------------------------------------------------------------
// LinearCoeffs

LinearCoeffs LinearCoeffs::from_entries(const LagMap& entries) {
  LinearCoeffs c;
  double scale = 0.0;
  for (const auto& [lag, value] : entries) {
    if (!std::isfinite(value)) throw InvalidArgument("non-finite coefficient");
    if (value != 0.0) c.entries_.emplace(lag, value);
    scale = std::max(scale, std::abs(value));
  }
  if (c.entries_.empty() || c.abs_sum() <= 0.0)
    throw InvalidArgument("coefficients must have 0 < sum |c_{k,l}|");
  for (const auto& [lag, value] : c.entries_) {
    const auto it = c.entries_.find(Lag{lag.v, lag.u});
    const double mirrored = it == c.entries_.end() ? 0.0 : it->second;
    if (std::abs(mirrored - value) > rel_tol(scale))
      throw InvalidArgument("coefficients must satisfy c_{k,l} = c_{l,k}; violated at (" +
                            std::to_string(lag.u) + "," + std::to_string(lag.v) + ")");
    c.bound_ = std::max({c.bound_, std::abs(lag.u), std::abs(lag.v)});
  }
  return c;
}

LinearCoeffs LinearCoeffs::separable(const SeqMap& factor) {
  LagMap entries;
  for (const auto& [k, a] : factor)
    for (const auto& [l, b] : factor)
      if (a != 0.0 && b != 0.0) entries[Lag{k, l}] = a * b;
  LinearCoeffs c = from_entries(entries);
  SeqMap nz;
  for (const auto& [k, a] : factor)
    if (a != 0.0) nz.emplace(k, a);
  c.factor_ = std::move(nz);
  return c;
}

double LinearCoeffs::abs_sum() const {
  double s = 0.0;
  for (const auto& [lag, value] : entries_) s += std::abs(value);
  return s;
}

// ---------------------------------------------------------------------------
// CovKernel

CovKernel CovKernel::from_values(const LagMap& values) {
  CovKernel k;
  for (const auto& [lag, value] : values) {
    if (!std::isfinite(value))
      throw InvalidArgument("non-finite kernel value at (" + std::to_string(lag.u) + "," +
                            std::to_string(lag.v) + ")");
    if (value == 0.0) continue;
    k.values_.emplace(lag, value);
    k.radius_ = std::max({k.radius_, std::abs(lag.u), std::abs(lag.v)});
  }
  if (k.values_.empty()) throw InvalidArgument("kernel has no non-zero entries");
  k.dense_.assign(static_cast<std::size_t>(k.width()) * k.width(), 0.0);
  for (const auto& [lag, value] : k.values_)
    k.dense_[static_cast<std::size_t>((lag.u + k.radius_) * k.width() + (lag.v + k.radius_))] = value;
  return k;
}

CovKernel CovKernel::identity() { return from_values({{Lag{0, 0}, 1.0}}); }

CovKernel CovKernel::with_separable_factor(SeqMap rho) const {
  CovKernel out = *this;
  out.factor_ = std::move(rho);
  return out;
}

CovKernel CovKernel::with_truncation_error(double tail) const {
  CovKernel out = *this;
  out.truncation_error_ = tail;
  return out;
}

bool CovKernel::is_separable(double tol) const {
  if (std::abs(variance() - 1.0) > tol) return false;
  for (int u = -radius_; u <= radius_; ++u)
    for (int v = -radius_; v <= radius_; ++v)
      if (std::abs((*this)(u, v) - (*this)(u, 0) * (*this)(0, v)) > tol) return false;
  return true;
}

SeqMap CovKernel::row_factor() const {
  SeqMap rho;
  for (int k = -radius_; k <= radius_; ++k) {
    const double value = (*this)(k, 0);
    if (value != 0.0) rho.emplace(k, value);
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Construction

CovKernel kernel_from_coeffs(const LinearCoeffs& c) {
  // Pair every stored (k,l) with every (k',l') = (k-u, l+v).
  LagMap r;
  for (const auto& [a, ca] : c.entries())
    for (const auto& [b, cb] : c.entries()) r[Lag{a.u - b.u, b.v - a.v}] += ca * cb;
  return CovKernel::from_values(r);
}

CovKernel separable_kernel(const SeqMap& rho, int radius) {
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  const auto zero = rho.find(0);
  if (zero == rho.end() || std::abs(zero->second - 1.0) > 1e-12)
    throw NormalizationError("separable kernel requires rho_0 = 1");
  double scale = 0.0;
  for (const auto& [k, value] : rho) scale = std::max(scale, std::abs(value));
  for (const auto& [k, value] : rho) {
    const auto it = rho.find(-k);
    const double mirrored = it == rho.end() ? 0.0 : it->second;
    if (std::abs(mirrored - value) > rel_tol(scale))
      throw InvalidArgument("separable factor must satisfy rho_k = rho_{-k}; violated at k = " +
                            std::to_string(k));
  }
  SeqMap kept;
  for (const auto& [k, value] : rho)
    if (std::abs(k) <= radius && value != 0.0) kept.emplace(k, value);
  LagMap values;
  for (const auto& [u, a] : kept)
    for (const auto& [v, b] : kept) values[Lag{u, v}] = a * b;
  double tail = 0.0;
  for (const auto& [k, value] : rho)
    if (std::abs(k) > radius) tail += std::abs(value);
  CovKernel out = CovKernel::from_values(values).with_separable_factor(kept);
  return tail > 0.0 ? out.with_truncation_error(tail) : out;
}

CovKernel separable_kernel(const std::function<double(int)>& rho, int radius, std::optional<double> tail) {
  SeqMap seq;
  for (int k = -radius; k <= radius; ++k) seq[k] = rho(k);
  CovKernel out = separable_kernel(seq, radius);
  return tail ? out.with_truncation_error(*tail) : out;
}

// ---------------------------------------------------------------------------
// Diagnostics

bool KernelDiagnostics::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const KernelCheck& c) { return c.passed || !c.hard; });
}

const KernelCheck* KernelDiagnostics::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string KernelDiagnostics::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS" : (c.hard ? "FAIL" : "WARN")) << "  " << c.name;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  os << (ok() ? "kernel OK" : "kernel INVALID") << '\n';
  return os.str();
}

double symbol_1d(const SeqMap& rho, double x) {
  double s = 0.0;
  for (const auto& [k, value] : rho) s += value * std::cos(k * x);
  return s;
}

KernelDiagnostics validate(const CovKernel& k) {
  KernelDiagnostics d;
  const int K = k.support_radius();
  double scale = 0.0;
  bool finite = true;
  for (const auto& [lag, value] : k.values()) {
    scale = std::max(scale, std::abs(value));
    finite = finite && std::isfinite(value);
  }
  const double tol = rel_tol(scale);

  auto worst = [&](auto&& other) {
    double err = 0.0;
    Lag at{};
    for (int u = -K; u <= K; ++u)
      for (int v = -K; v <= K; ++v) {
        const double e = std::abs(k(u, v) - other(u, v));
        if (e > err) {
          err = e;
          at = Lag{u, v};
        }
      }
    return std::pair{err, at};
  };
  auto describe = [](double err, Lag at) {
    std::ostringstream os;
    os << "max defect " << err << " at (" << at.u << "," << at.v << ")";
    return os.str();
  };

  {
    const auto [err, at] = worst([&](int u, int v) { return k(v, u); });
    d.checks.push_back({"symmetry R(u,v)=R(v,u)", err <= tol, true, describe(err, at)});
  }
  {
    const auto [err, at] = worst([&](int u, int v) { return k(-v, -u); });
    d.checks.push_back({"reflection R(u,v)=R(-v,-u)", err <= tol, true, describe(err, at)});
  }
  {
    std::ostringstream os;
    os << "R(0,0) = " << k.variance();
    d.checks.push_back({"positive variance", k.variance() > 0.0, true, os.str()});
  }
  {
    std::ostringstream os;
    os << "rbar = " << rbar(k);
    d.checks.push_back({"finite rbar", finite && std::isfinite(rbar(k)), true, os.str()});
  }

  std::optional<SeqMap> factor = k.separable_factor();
  if (!factor && k.is_separable()) factor = k.row_factor();
  if (factor) {
    if (k.separable_factor()) {
      const auto& rho = *factor;
      auto at = [&](int i) {
        const auto it = rho.find(i);
        return it == rho.end() ? 0.0 : it->second;
      };
      const auto [err, where] = worst([&](int u, int v) { return at(u) * at(v); });
      d.checks.push_back({"separable factor R(u,v)=rho_u rho_v", err <= tol, true, describe(err, where)});
    }
    double min_r = std::numeric_limits<double>::infinity();
    double argmin = 0.0;
    for (int i = 0; i < kSymbolSamples; ++i) {
      const double x = -std::numbers::pi + kTwoPi * i / kSymbolSamples;
      const double r = symbol_1d(*factor, x);
      if (r < min_r) {
        min_r = r;
        argmin = x;
      }
    }
    std::ostringstream os;
    os << "min r(x) = " << min_r << " at x = " << argmin << " (" << kSymbolSamples << " samples)";
    d.checks.push_back({"separable r(x) >= 0", min_r >= -1e-10, true, os.str()});
  }
  if (k.truncation_error()) {
    std::ostringstream os;
    os << "dropped tail sum |rho_k| = " << *k.truncation_error();
    d.checks.push_back({"truncation", true, false, os.str()});
  }
  return d;
}

double rbar(const CovKernel& k) {
  double s = 0.0;
  for (const auto& [lag, value] : k.values()) s += std::abs(value);
  return s;
}

// ---------------------------------------------------------------------------
// Spectral density

SpectralDensity2D SpectralDensity2D::constant(double value, Quadrature quad) {
  SpectralDensity2D f;
  const std::size_t n = quad.size();
  f.quad = std::move(quad);
  f.values.assign(n * n, value);
  f.rbar = std::abs(value);
  return f;
}

Quadrature default_quadrature(const CovKernel& k, int m_max) {
  return Quadrature::periodic_trapezoid(std::max(64, m_max * k.support_radius() + 1));
}

SpectralDensity2D spectral_density(const CovKernel& k, const Quadrature& quad) {
  const int K = k.support_radius();
  const int W = 2 * K + 1;
  const std::size_t n = quad.size();
  for (double x : quad.nodes)
    if (x < 0.0 || x > 1.0) throw InvalidArgument("quadrature nodes must lie in [0,1]");

  // cos/sin tables indexed [(k + K) * n + i].
  std::vector<double> c(static_cast<std::size_t>(W) * n), s(static_cast<std::size_t>(W) * n);
  for (int kk = -K; kk <= K; ++kk)
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = kTwoPi * kk * quad.nodes[i];
      c[(kk + K) * n + i] = std::cos(phase);
      s[(kk + K) * n + i] = std::sin(phase);
    }

  SpectralDensity2D f;
  f.quad = quad;
  f.values.assign(n * n, 0.0);
  f.rbar = rbar(k);
  const double imag_tol = 1e-12 * std::max(1.0, f.rbar);

  std::vector<double> a(W), b(W);
  double worst_imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // a_l = sum_k R(k,l) cos(2 pi k x_i),  b_l = sum_k R(k,l) sin(2 pi k x_i)
    for (int l = -K; l <= K; ++l) {
      double sa = 0.0, sb = 0.0;
      for (int kk = -K; kk <= K; ++kk) {
        const double r = k(kk, l);
        if (r == 0.0) continue;
        sa += r * c[(kk + K) * n + i];
        sb += r * s[(kk + K) * n + i];
      }
      a[l + K] = sa;
      b[l + K] = sb;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      for (int l = 0; l < W; ++l) {
        re += a[l] * c[l * n + j] - b[l] * s[l * n + j];
        im += b[l] * c[l * n + j] + a[l] * s[l * n + j];
      }
      f.values[i * n + j] = re;
      worst_imag = std::max(worst_imag, std::abs(im));
    }
  }
  if (worst_imag > imag_tol) {
    std::ostringstream os;
    os << "spectral density has imaginary residual " << worst_imag
       << "; the kernel violates R(u,v) = R(-u,-v)";
    throw NumericalConsistencyError(os.str());
  }
  return f;
}

SeqMap spectral_sqrt_factor(const SeqMap& rho, double tol) {
  constexpr int M = 8192;
  constexpr int J_max = M / 8;
  std::vector<double> root(M);
  double scale = 0.0;
  for (const auto& [k, v] : rho) scale += std::abs(v);
  for (int m = 0; m < M; ++m) {
    const double r = symbol_1d(rho, kTwoPi * m / M);
    if (r < -1e-12 * std::max(1.0, scale))
      throw InvalidArgument("spectral square root needs r(x) >= 0; found r = " + std::to_string(r));
    root[m] = std::sqrt(std::max(r, 0.0));
  }
  std::vector<double> a(J_max + 1, 0.0);
  for (int j = 0; j <= J_max; ++j) {
    double s = 0.0;
    for (int m = 0; m < M; ++m) s += root[m] * std::cos(kTwoPi * static_cast<double>(j) * m / M);
    a[j] = s / M;
  }
  // Smallest J whose two-sided tail is below tol.
  int J = J_max;
  double tail = 0.0;
  while (J > 0 && tail + 2.0 * std::abs(a[J]) <= tol) {
    tail += 2.0 * std::abs(a[J]);
    --J;
  }
  SeqMap out;
  for (int j = -J; j <= J; ++j) out[j] = a[std::abs(j)];
  return out;
}

}  // namespace dwig
