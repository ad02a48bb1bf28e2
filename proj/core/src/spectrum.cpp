#include "dwig/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwig/eigen.hpp"
#include "dwig/errors.hpp"

namespace dwig {

EmpiricalSpectrum::EmpiricalSpectrum(std::vector<double> eigenvalues) : values_(std::move(eigenvalues)) {
  if (values_.empty()) throw InvalidArgument("empty spectrum");
  std::sort(values_.begin(), values_.end());
}

EmpiricalSpectrum EmpiricalSpectrum::of(const SymMatrix& a) {
  std::vector<double> ev = symmetric_eigenvalues(a);
  const double scale = 1.0 / std::sqrt(static_cast<double>(a.n));
  for (double& x : ev) x *= scale;
  return EmpiricalSpectrum(std::move(ev));
}

double EmpiricalSpectrum::moment(int p) const noexcept {
  if (p == 0) return 1.0;
  double s = 0.0;
  for (double x : values_) {
    double t = 1.0;
    for (int i = 0; i < p; ++i) t *= x;
    s += t;
  }
  return s / static_cast<double>(values_.size());
}

double EmpiricalSpectrum::cdf(double x) const noexcept {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

namespace {

struct Jump {
  double at;
  double before;  // F(s^-)
  double after;   // F(s)
};

std::vector<Jump> jumps_of(std::span<const double> s) {
  std::vector<Jump> out;
  const double n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    out.push_back({s[i], static_cast<double>(i) / n, static_cast<double>(j) / n});
    i = j;
  }
  return out;
}

double left_limit(const CdfFn& G, double x) { return G(std::nextafter(x, -std::numeric_limits<double>::infinity())); }

bool feasible(const std::vector<Jump>& jumps, const CdfFn& G, double e) {
  for (const auto& j : jumps) {
    if (j.after - e > G(j.at + e)) return false;
    if (left_limit(G, j.at - e) > j.before + e) return false;
  }
  return true;
}

}  // namespace

Distances distances(std::span<const double> sorted_samples, const CdfFn& G) {
  if (sorted_samples.empty()) throw InvalidArgument("no samples");
  if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end()))
    throw InvalidArgument("samples must be sorted");
  const auto jumps = jumps_of(sorted_samples);

  Distances d;
  for (const auto& j : jumps) {
    d.ks = std::max({d.ks, std::abs(j.after - G(j.at)), std::abs(j.before - left_limit(G, j.at))});
  }
  // Between jumps F is constant and G monotone, so the ends suffice; the
  // outer tails contribute G(s_1^-) and 1 - G(s_n).
  double lo = 0.0, hi = std::min(1.0, d.ks);
  if (!feasible(jumps, G, hi)) hi = 1.0;
  if (feasible(jumps, G, 0.0)) hi = 0.0;
  for (int it = 0; it < 60 && hi > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(jumps, G, mid) ? hi : lo) = mid;
  }
  d.levy = hi;
  return d;
}

}  // namespace dwig
