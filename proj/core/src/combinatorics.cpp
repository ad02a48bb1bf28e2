#include "dwig/combinatorics.hpp"

#include <algorithm>
#include <numeric>

#include "dwig/errors.hpp"

namespace dwig {

PairPartition::PairPartition(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  const int m = static_cast<int>(pairs_.size());
  if (m == 0) throw InvalidArgument("pair partition must contain at least one pair");
  for (auto& [u, v] : pairs_) {
    if (u > v) std::swap(u, v);
  }
  std::sort(pairs_.begin(), pairs_.end());
  partner_.assign(2 * m + 1, 0);
  for (const auto& [u, v] : pairs_) {
    if (u < 1 || v > 2 * m || u == v)
      throw InvalidArgument("pair (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range for a pairing of {1.." + std::to_string(2 * m) + "}");
    if (partner_[u] != 0 || partner_[v] != 0)
      throw InvalidArgument("index appears in more than one pair");
    partner_[u] = v;
    partner_[v] = u;
  }
}

int PairPartition::partner(int i) const {
  if (i < 1 || i > size()) throw InvalidArgument("index out of range");
  return partner_[i];
}

std::string to_string(const PairPartition& p) {
  std::string out;
  for (const auto& [u, v] : p.pairs()) {
    out += '(' + std::to_string(u) + ',' + std::to_string(v) + ')';
  }
  return out;
}

std::vector<int> KrewerasComplement::block_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(blocks.size());
  for (const auto& b : blocks) sizes.push_back(static_cast<int>(b.size()));
  return sizes;
}

namespace {

void check_size(int m, int cap) {
  if (m < 1) throw InvalidArgument("half-size m must be positive");
  if (m > cap) throw SizeLimitError("enumeration of pairings with m = " + std::to_string(m), cap);
}

bool crosses(int a, int b, int c, int d) { return (a < c && c < b && b < d) || (c < a && a < d && d < b); }

// Depth-first matching of the smallest free index. When noncrossing_only is
// set, a candidate pair is dropped as soon as it crosses an accepted one, which
// preserves the relative order of the unfiltered recursion.
class PairingWalker {
 public:
  PairingWalker(int m, bool noncrossing_only, const std::function<void(const PairPartition&)>& visit)
      : m_(m), nc_(noncrossing_only), visit_(visit), used_(2 * m + 1, false) {
    current_.reserve(m);
  }

  void run() { recurse(); }

 private:
  void recurse() {
    int first = 1;
    while (first <= 2 * m_ && used_[first]) ++first;
    if (first > 2 * m_) {
      visit_(PairPartition(current_));
      return;
    }
    used_[first] = true;
    for (int second = first + 1; second <= 2 * m_; ++second) {
      if (used_[second]) continue;
      if (nc_ && std::any_of(current_.begin(), current_.end(), [&](const auto& pr) {
            return crosses(first, second, pr.first, pr.second);
          }))
        continue;
      used_[second] = true;
      current_.emplace_back(first, second);
      recurse();
      current_.pop_back();
      used_[second] = false;
    }
    used_[first] = false;
  }

  int m_;
  bool nc_;
  const std::function<void(const PairPartition&)>& visit_;
  std::vector<bool> used_;
  std::vector<PairPartition::Pair> current_;
};

}  // namespace

void for_each_pairing(int m, const std::function<void(const PairPartition&)>& visit, int cap) {
  check_size(m, cap);
  PairingWalker(m, false, visit).run();
}

std::vector<PairPartition> enumerate_pairings(int m, int cap) {
  check_size(m, cap);
  std::vector<PairPartition> out;
  out.reserve(double_factorial_odd(m));
  PairingWalker(m, false, [&](const PairPartition& p) { out.push_back(p); }).run();
  return out;
}

std::vector<PairPartition> enumerate_nc2(int m, int cap) {
  check_size(m, cap);
  std::vector<PairPartition> out;
  out.reserve(catalan(m));
  PairingWalker(m, true, [&](const PairPartition& p) { out.push_back(p); }).run();
  return out;
}

bool is_noncrossing(const PairPartition& p) {
  const auto& pr = p.pairs();
  for (std::size_t i = 0; i < pr.size(); ++i)
    for (std::size_t j = i + 1; j < pr.size(); ++j)
      if (crosses(pr[i].first, pr[i].second, pr[j].first, pr[j].second)) return false;
  return true;
}

KrewerasComplement kreweras(const PairPartition& sigma) {
  if (!is_noncrossing(sigma))
    throw InvalidArgument("Kreweras complement requires a non-crossing pairing, got " + to_string(sigma));
  const int n = sigma.size();
  // Cycles of sigma o gamma, gamma = (1 2 ... 2m), are the complement blocks.
  std::vector<bool> seen(n + 1, false);
  KrewerasComplement k;
  for (int start = 1; start <= n; ++start) {
    if (seen[start]) continue;
    std::vector<int> block;
    for (int i = start; !seen[i];) {
      seen[i] = true;
      block.push_back(i);
      i = sigma.partner(i % n + 1);
    }
    std::sort(block.begin(), block.end());
    k.blocks.push_back(std::move(block));
  }
  std::sort(k.blocks.begin(), k.blocks.end(),
            [](const auto& a, const auto& b) { return a.back() < b.back(); });
  k.t_map.assign(n, 0);
  for (std::size_t j = 0; j < k.blocks.size(); ++j)
    for (int i : k.blocks[j]) k.t_map[i - 1] = static_cast<int>(j) + 1;
  return k;
}

std::uint64_t catalan(int m) {
  if (m < 0) throw InvalidArgument("catalan: m must be non-negative");
  if (m > 30) throw SizeLimitError("catalan(" + std::to_string(m) + ")", 30);
  std::uint64_t c = 1;  // C_29 * 2 * 59 < 2^64
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::uint64_t double_factorial_odd(int m) {
  if (m < 0) throw InvalidArgument("double factorial: m must be non-negative");
  if (m > 15) throw SizeLimitError("(2m-1)!! with m = " + std::to_string(m), 15);
  std::uint64_t r = 1;
  for (int k = 2 * m - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

}  // namespace dwig
