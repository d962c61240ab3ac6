#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mrw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fixed labels for the independent sub-streams derived from a master seed.
// Log-volatility and the return noise must come from distinct streams.
namespace stream {
inline constexpr std::uint64_t logvol = 0x6c6f67766f6cULL;
inline constexpr std::uint64_t noise = 0x6e6f697365ULL;
inline constexpr std::uint64_t omega = 0x6f6d656761ULL;
inline constexpr std::uint64_t mc = 0x6d63ULL;
}  // namespace stream

/// Deterministic random stream. Gaussians are produced by an explicit
/// Box-Muller transform so sequences are reproducible bit-for-bit for a
/// given (seed, label, index) regardless of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  static Rng substream(std::uint64_t master, std::uint64_t label, std::uint64_t index = 0) {
    return Rng(splitmix64(master ^ label) + 0x9e3779b97f4a7c15ULL * index);
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on (0,1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
  }

  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mrw
