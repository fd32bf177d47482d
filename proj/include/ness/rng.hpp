#ifndef NESS_RNG_HPP
#define NESS_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace ness {

/// Seeded random stream with explicit, build-reproducible draw rules.
/// All distributions are generated from the raw mt19937_64 output with
/// fixed formulas (no implementation-defined std:: distributions), so a
/// given seed produces the same stream on every platform with the same
/// floating-point environment.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Unbiased uniform integer in [0, n). n must be positive.
  std::uint64_t integer(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
  }

  /// Velocity drawn from the centered Maxwellian M_T (3 iid normals, variance T).
  std::array<double, 3> maxwellian_velocity(double temperature) {
    const double s = std::sqrt(temperature);
    return {s * normal(), s * normal(), s * normal()};
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ness

#endif
