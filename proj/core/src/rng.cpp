#include "dwig/rng.hpp"

#include <cmath>

#include "dwig/errors.hpp"

namespace dwig {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::string to_string(InputDist d) {
  switch (d) {
    case InputDist::gaussian: return "gaussian";
    case InputDist::rademacher: return "rademacher";
    case InputDist::uniform: return "uniform";
  }
  return "?";
}

InputDist parse_input_dist(const std::string& name) {
  if (name == "gaussian") return InputDist::gaussian;
  if (name == "rademacher") return InputDist::rademacher;
  if (name == "uniform") return InputDist::uniform;
  throw InvalidArgument("unknown input distribution '" + name + "'");
}

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + kStreamSalt))) {}

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double CounterRng::uniform01() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

double draw(InputDist d, CounterRng& rng) noexcept {
  switch (d) {
    case InputDist::gaussian: return rng.gaussian();
    case InputDist::rademacher: return (rng.next() >> 63) ? 1.0 : -1.0;
    case InputDist::uniform: return std::sqrt(3.0) * (2.0 * rng.uniform01() - 1.0);
  }
  return 0.0;
}

}  // namespace dwig
