#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace phasecover {

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard and the double conversions below avoid the library-defined
/// distributions, so the stream is identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {  // Box-Muller with a cached spare
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Standard complex gaussian (unit total variance).
  std::complex<double> cnormal() {
    double re = normal();
    double im = normal();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0;
};

inline constexpr std::uint64_t kDefaultTrialSeed = 0x5EED;

}  // namespace phasecover
