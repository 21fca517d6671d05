#ifndef CSMD_RNG_HPP
#define CSMD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace csmd {

// Counter-based stream of doubles on top of splitmix64. Two streams with
// distinct (base_seed, stream_id) are statistically independent; the same
// pair reproduces a bit-identical sequence on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_id)
      : base_seed_(base_seed), stream_id_(stream_id) {
    state_ = mix(mix(base_seed + 0x9e3779b97f4a7c15ULL) ^
                 mix(stream_id + 0xbf58476d1ce4e5b9ULL));
    has_spare_normal_ = false;
  }

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (deterministic, unlike
  // std::normal_distribution whose algorithm is implementation-defined).
  double normal() {
    if (has_spare_normal_) {
      has_spare_normal_ = false;
      return spare_normal_;
    }
    const double u = uniform_pos();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * M_PI * v;
    spare_normal_ = r * std::sin(theta);
    has_spare_normal_ = true;
    return r * std::cos(theta);
  }

  double exponential() { return -std::log(uniform_pos()); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace csmd

#endif  // CSMD_RNG_HPP
