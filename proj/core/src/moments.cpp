#include "dwig/moments.hpp"

#include <algorithm>
#include <cmath>

#include "dwig/errors.hpp"
#include "dwig/parallel.hpp"

namespace dwig {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class Visit>
void walk_S(const ConstraintSet& cs, Visit&& visit) {
  const auto& blocks = cs.kreweras.blocks;
  const int N = cs.N;
  std::vector<int> k(cs.sigma.size(), 0);

  // Flatten the walk into (block, position) steps.
  struct Step {
    int index;     // 0-based coordinate
    bool closing;  // last coordinate of its block
    int block;
  };
  std::vector<Step> steps;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t j = 0; j < blocks[b].size(); ++j)
      steps.push_back({blocks[b][j] - 1, j + 1 == blocks[b].size(), static_cast<int>(b)});
  std::vector<int> partial(blocks.size(), 0);

  auto rec = [&](auto&& self, std::size_t s) -> void {
    if (s == steps.size()) {
      visit(std::span<const int>(k));
      return;
    }
    const Step& st = steps[s];
    if (st.closing) {
      const int last = -partial[st.block];
      if (last < -N || last > N) return;
      k[st.index] = last;
      self(self, s + 1);
      return;
    }
    for (int v = -N; v <= N; ++v) {
      k[st.index] = v;
      partial[st.block] += v;
      self(self, s + 1);
      partial[st.block] -= v;
    }
  };
  rec(rec, 0);
}

void check_m(int m) {
  if (m < 1) throw InvalidArgument("moment order m must be positive");
  if (m > kDefaultEnumerationCap)
    throw SizeLimitError("combinatorial moment of order 2m = " + std::to_string(2 * m), kDefaultEnumerationCap);
}

double factorial(int m) {
  double r = 1.0;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

}  // namespace

std::string to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::combinatorial: return "combinatorial";
    case MomentMethod::recursive: return "recursive";
    case MomentMethod::empirical: return "empirical";
    case MomentMethod::wick_oracle: return "wick-oracle";
    case MomentMethod::free_product: return "free-product";
  }
  return "unknown";
}

double MomentSequence::moment(int p) const {
  if (p < 0) throw InvalidArgument("moment order must be non-negative");
  if (p == 0) return 1.0;
  if (p % 2 != 0) return 0.0;
  if (p / 2 > max_m()) throw InvalidArgument("moment of order " + std::to_string(p) + " not computed");
  return even[p / 2 - 1];
}

ConstraintSet ConstraintSet::make(const PairPartition& sigma, int N) {
  if (N < 0) throw InvalidArgument("truncation N must be non-negative");
  return ConstraintSet{sigma, dwig::kreweras(sigma), N};
}

void for_each_S(const ConstraintSet& cs, const std::function<void(std::span<const int>)>& visit) {
  walk_S(cs, visit);
}

std::vector<std::vector<int>> enumerate_S(const ConstraintSet& cs) {
  std::vector<std::vector<int>> out;
  walk_S(cs, [&](std::span<const int> k) { out.emplace_back(k.begin(), k.end()); });
  return out;
}

double beta_combinatorial(const CovKernel& k, int m, std::optional<int> N, unsigned threads) {
  check_m(m);
  const int trunc = N.value_or(k.support_radius());
  const auto partitions = enumerate_nc2(m);
  const double bound = factorial(m) * std::pow(rbar(k), m);

  std::vector<double> partial(partitions.size(), 0.0);
  parallel_for(partitions.size(), threads, [&](std::size_t idx) {
    const ConstraintSet cs = ConstraintSet::make(partitions[idx], trunc);
    const auto& pairs = cs.sigma.pairs();
    CompensatedSum sum;
    double abs_sum = 0.0;
    walk_S(cs, [&](std::span<const int> kk) {
      double prod = 1.0;
      for (const auto& [u, v] : pairs) {
        prod *= k(kk[u - 1], kk[v - 1]);
        if (prod == 0.0) return;
      }
      sum.add(prod);
      abs_sum += std::abs(prod);
    });
    if (abs_sum > bound * (1.0 + 1e-12))
      throw NumericalConsistencyError("per-partition sum " + std::to_string(abs_sum) +
                                      " exceeds the bound m! rbar^m = " + std::to_string(bound));
    partial[idx] = sum.value();
  });
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

MomentSequence moments_combinatorial(const CovKernel& k, int m_max, std::optional<int> N, unsigned threads) {
  MomentSequence seq;
  seq.method = MomentMethod::combinatorial;
  seq.truncation = "N=" + std::to_string(N.value_or(k.support_radius()));
  for (int m = 1; m <= m_max; ++m) seq.even.push_back(beta_combinatorial(k, m, N, threads));
  return seq;
}

double truncation_increment(const CovKernel& k, int m, int N, unsigned threads) {
  if (N < 1) throw InvalidArgument("truncation increment needs N >= 1");
  return std::abs(beta_combinatorial(k, m, N, threads) - beta_combinatorial(k, m, N - 1, threads));
}

RecursiveMoments beta_recursive(const SpectralDensity2D& f, int m_max) {
  if (m_max < 1 || m_max > 20) throw InvalidArgument("beta_recursive: m_max must be in [1, 20]");
  const std::size_t n = f.size();
  const auto& w = f.quad.weights;

  RecursiveMoments out;
  out.H.assign(m_max + 1, std::vector<double>(n, 0.0));
  std::fill(out.H[0].begin(), out.H[0].end(), 1.0);
  // g[k][i] = int f(x_i, y) H_{2(k-1)}(y) dy
  std::vector<std::vector<double>> g(m_max + 1, std::vector<double>(n, 0.0));

  out.moments.method = MomentMethod::recursive;
  out.moments.truncation = (f.quad.kind == Quadrature::Kind::gauss_legendre ? "gl:" : "trap:") + std::to_string(n);
  for (int m = 1; m <= m_max; ++m) {
    const auto& prev = out.H[m - 1];
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += w[j] * f(i, j) * prev[j];
      g[m][i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int kk = 1; kk <= m; ++kk) s += out.H[m - kk][i] * g[kk][i];
      out.H[m][i] = s;
    }
    double beta = 0.0;
    for (std::size_t i = 0; i < n; ++i) beta += w[i] * out.H[m][i];
    out.moments.even.push_back(beta);
  }
  return out;
}

Lag star(int i, int j, int k, int l) noexcept {
  return Lag{std::min(i, j) - std::min(k, l), std::max(k, l) - std::max(i, j)};
}

double wick_expected_trace(const CovKernel& k, int n, int p, unsigned threads) {
  if (n < 1) throw InvalidArgument("matrix size must be positive");
  if (p < 2 || p % 2 != 0) throw InvalidArgument("Wick trace needs an even power p >= 2");
  if (n > kWickMaxN) throw SizeLimitError("Wick trace with n = " + std::to_string(n), kWickMaxN);
  if (p > kWickMaxPower) throw SizeLimitError("Wick trace with p = " + std::to_string(p), kWickMaxPower);

  std::vector<std::vector<std::pair<int, int>>> pairings;
  for_each_pairing(p / 2, [&](const PairPartition& pi) {
    std::vector<std::pair<int, int>> zero_based;
    for (const auto& [u, v] : pi.pairs()) zero_based.emplace_back(u - 1, v - 1);
    pairings.push_back(std::move(zero_based));
  });

  long long tuples_per_head = 1;
  for (int i = 1; i < p; ++i) tuples_per_head *= n;

  std::vector<double> partial(n, 0.0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t head) {
    std::vector<int> idx(p, 0);
    std::vector<double> cov(static_cast<std::size_t>(p) * p, 0.0);
    CompensatedSum sum;
    for (long long t = 0; t < tuples_per_head; ++t) {
      idx[0] = static_cast<int>(head);
      long long rest = t;
      for (int pos = 1; pos < p; ++pos) {
        idx[pos] = static_cast<int>(rest % n);
        rest /= n;
      }
      // Factor u (0-based) is X_{i_{u-1}, i_u} with i_{-1} = i_{p-1}.
      for (int u = 0; u < p; ++u)
        for (int v = u + 1; v < p; ++v) {
          const Lag lag = star(idx[(u + p - 1) % p], idx[u], idx[(v + p - 1) % p], idx[v]);
          cov[u * p + v] = k(lag.u, lag.v);
        }
      double total = 0.0;
      for (const auto& pi : pairings) {
        double prod = 1.0;
        for (const auto& [u, v] : pi) prod *= cov[u * p + v];
        total += prod;
      }
      sum.add(total);
    }
    partial[head] = sum.value();
  });
  CompensatedSum total;
  for (double x : partial) total.add(x);
  return total.value();
}

}  // namespace dwig
