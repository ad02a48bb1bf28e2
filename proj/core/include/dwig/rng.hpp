#pragma once

// Counter-based generator: output t of stream s under seed is
//
//   splitmix64_mix(key(seed, s) + (t + 1) * 0x9E3779B97F4A7C15),
//   key(seed, s) = splitmix64_mix(seed ^ splitmix64_mix(s + 0xD1B54A32D192ED03)),
//
// i.e. SplitMix64 with a per-stream starting point. Replicate r of an
// experiment uses stream r, so results do not depend on scheduling.

#include <cstdint>
#include <string>

namespace dwig {

enum class InputDist { gaussian, rademacher, uniform };

std::string to_string(InputDist d);
/// Throws InvalidArgument for anything but gaussian, rademacher, uniform.
InputDist parse_input_dist(const std::string& name);

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform on (0, 1) with 53 random bits.
  double uniform01() noexcept;
  /// Standard normal by the Marsaglia polar method (second variate cached).
  double gaussian() noexcept;
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Mean 0, variance 1: N(0,1), +-1 with probability 1/2, Uniform(-sqrt 3, sqrt 3).
double draw(InputDist d, CounterRng& rng) noexcept;

}  // namespace dwig
