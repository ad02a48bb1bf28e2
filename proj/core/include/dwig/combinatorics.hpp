#pragma once

// Pair partitions of {1,...,2m}, their non-crossing subset NC2(2m), and
// Kreweras complements.
//
// All indices in this interface are 1-based. Kreweras blocks live on the
// "barred" points 1',...,(2m)' interleaved as 1,1',2,2',...,2m,(2m)'; as in
// the usual moment formulas the bars are dropped and blocks are reported as
// subsets of {1,...,2m}.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace dwig {

inline constexpr int kDefaultEnumerationCap = 8;

/// A perfect matching of {1,...,2m}. Pairs are kept with u < v and sorted by u.
class PairPartition {
 public:
  using Pair = std::pair<int, int>;

  /// Validates and normalizes; throws InvalidArgument on a non-matching.
  explicit PairPartition(std::vector<Pair> pairs);

  int half_size() const noexcept { return static_cast<int>(pairs_.size()); }
  int size() const noexcept { return 2 * half_size(); }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

  /// Partner of index i (1-based).
  int partner(int i) const;

  bool operator==(const PairPartition&) const = default;

 private:
  std::vector<Pair> pairs_;
  std::vector<int> partner_;  // 1-based, partner_[0] unused
};

/// Renders as "(u1,v1)(u2,v2)...".
std::string to_string(const PairPartition& p);

struct KrewerasComplement {
  /// m+1 blocks for a source in NC2(2m); each ascending, blocks ordered by
  /// strictly increasing maximal element.
  std::vector<std::vector<int>> blocks;
  /// t_map[i-1] = j  iff  i is in blocks[j-1]  (1-based block labels).
  std::vector<int> t_map;

  std::vector<int> block_sizes() const;
};

/// Calls visit for every pairing of {1,...,2m}. The smallest unpaired index is
/// matched with each candidate partner in increasing order, recursively.
void for_each_pairing(int m, const std::function<void(const PairPartition&)>& visit,
                      int cap = kDefaultEnumerationCap);

/// All (2m-1)!! pairings in the order of for_each_pairing.
std::vector<PairPartition> enumerate_pairings(int m, int cap = kDefaultEnumerationCap);

/// The Catalan(m) non-crossing pairings, in the same relative order as
/// enumerate_pairings (it is exactly that list filtered by is_noncrossing).
std::vector<PairPartition> enumerate_nc2(int m, int cap = kDefaultEnumerationCap);

bool is_noncrossing(const PairPartition& p);

/// Throws InvalidArgument for a crossing input.
KrewerasComplement kreweras(const PairPartition& sigma);

/// Catalan number C_m for 0 <= m <= 30 (C_30 < 2^62).
std::uint64_t catalan(int m);

/// (2m-1)!! for 0 <= m <= 15.
std::uint64_t double_factorial_odd(int m);

}  // namespace dwig
