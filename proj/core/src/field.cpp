#include "dwig/field.hpp"

#include "dwig/errors.hpp"

namespace dwig {

void validate(const EnsembleConfig& cfg) {
  if (cfg.n < 1) throw InvalidArgument("ensemble size n must be at least 1");
  if (cfg.replicates < 1) throw InvalidArgument("replicates must be at least 1");
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_sq() const noexcept {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

std::size_t field_memory_bytes(const EnsembleConfig& cfg) {
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  const std::size_t w = n + 2 * static_cast<std::size_t>(cfg.coeffs.bound());
  std::size_t doubles = w * w + n * n;
  if (cfg.coeffs.separable_factor()) doubles += w * n;
  return doubles * sizeof(double);
}

SymMatrix generate_field(const EnsembleConfig& cfg, int replicate) {
  validate(cfg);
  const std::size_t need = field_memory_bytes(cfg);
  if (need > cfg.memory_cap)
    throw SizeLimitError("field buffers of " + std::to_string(need) + " bytes",
                         static_cast<long long>(cfg.memory_cap));

  const int n = cfg.n;
  const int K = cfg.coeffs.bound();
  const int w = n + 2 * K;
  // eps[(a + K - 1) * w + (b + K - 1)] holds eps_{a,b}, a,b in [1-K, n+K].
  std::vector<double> eps(static_cast<std::size_t>(w) * w);
  CounterRng rng(cfg.seed, static_cast<std::uint64_t>(replicate));
  for (double& e : eps) e = draw(cfg.input_dist, rng);
  auto at = [&](int r, int c) { return eps[static_cast<std::size_t>(r) * w + c]; };

  SymMatrix x{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  if (const auto& factor = cfg.coeffs.separable_factor()) {
    // t[r * n + j] = sum_l a_l eps(r, j - l + K)
    std::vector<double> t(static_cast<std::size_t>(w) * n, 0.0);
    for (int r = 0; r < w; ++r)
      for (const auto& [l, al] : *factor)
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(r) * n + j] += al * at(r, j - l + K);
    for (int i = 0; i < n; ++i)
      for (const auto& [k, ak] : *factor) {
        const double* row = &t[static_cast<std::size_t>(i - k + K) * n];
        for (int j = i; j < n; ++j) x(i, j) += ak * row[j];
      }
  } else {
    for (const auto& [lag, c] : cfg.coeffs.entries())
      for (int i = 0; i < n; ++i) {
        const double* row = &eps[static_cast<std::size_t>(i - lag.u + K) * w + K - lag.v];
        for (int j = i; j < n; ++j) x(i, j) += c * row[j];
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) x(j, i) = x(i, j);
  return x;
}

}  // namespace dwig
