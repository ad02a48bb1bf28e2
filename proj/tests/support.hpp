#pragma once

#include <algorithm>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "dwig/combinatorics.hpp"
#include "dwig/field.hpp"
#include "dwig/kernel.hpp"

namespace dwig::test {

inline std::mt19937_64 rng_for(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return std::mt19937_64(h);
}

/// Uniform random perfect matching of {1..2m}.
inline PairPartition random_pairing(std::mt19937_64& g, int m) {
  std::vector<int> idx(2 * m);
  for (int i = 0; i < 2 * m; ++i) idx[i] = i + 1;
  std::shuffle(idx.begin(), idx.end(), g);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i) pairs.emplace_back(idx[2 * i], idx[2 * i + 1]);
  return PairPartition(pairs);
}

/// Random non-crossing matching: a random Dyck word (rejection sampling)
/// matched with a stack.
inline PairPartition random_nc2(std::mt19937_64& g, int m) {
  std::vector<int> word(2 * m);
  for (;;) {
    std::fill(word.begin(), word.begin() + m, 1);
    std::fill(word.begin() + m, word.end(), -1);
    std::shuffle(word.begin(), word.end(), g);
    int h = 0;
    bool ok = true;
    for (int x : word) {
      h += x;
      if (h < 0) ok = false;
    }
    if (ok) break;
  }
  std::vector<int> stack;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 2 * m; ++i) {
    if (word[i] > 0) {
      stack.push_back(i + 1);
    } else {
      pairs.emplace_back(stack.back(), i + 1);
      stack.pop_back();
    }
  }
  return PairPartition(pairs);
}

/// Symmetric coefficients c_{k,l} = c_{l,k} on |k|,|l| <= radius with at most
/// `max_support` non-zero entries.
inline LagMap random_symmetric_coeffs(std::mt19937_64& g, int radius, int max_support = 25) {
  std::uniform_int_distribution<int> lag(-radius, radius);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  LagMap c;
  c[Lag{0, 0}] = 1.0 + val(g);
  while (static_cast<int>(c.size()) + 2 <= max_support) {
    const int k = lag(g), l = lag(g);
    const double v = val(g);
    c[Lag{k, l}] = v;
    c[Lag{l, k}] = v;
    if (g() % 4 == 0) break;
  }
  return c;
}

/// rho_0 = 1, rho_k = rho_{-k} with sum_{k != 0} |rho_k| <= 0.9, so r > 0.
inline SeqMap random_correlation(std::mt19937_64& g, int K) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  SeqMap rho{{0, 1.0}};
  for (int k = 1; k <= K; ++k) {
    const double v = 0.45 / K * val(g);
    rho[k] = v;
    rho[-k] = v;
  }
  return rho;
}

inline SymMatrix random_symmetric(std::mt19937_64& g, int n) {
  std::normal_distribution<double> nd;
  SymMatrix a{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = nd(g);
  return a;
}

/// Generic non-crossing test for a set partition of points 1..n: blocks
/// {a < c} and {b < d} from different blocks may not interleave a < b < c < d.
inline bool partition_noncrossing(const std::vector<std::vector<int>>& blocks) {
  for (std::size_t x = 0; x < blocks.size(); ++x)
    for (std::size_t y = 0; y < blocks.size(); ++y) {
      if (x == y) continue;
      for (int a : blocks[x])
        for (int c : blocks[x])
          for (int b : blocks[y])
            for (int d : blocks[y])
              if (a < b && b < c && c < d) return false;
    }
  return true;
}

}  // namespace dwig::test
