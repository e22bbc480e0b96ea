#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ldt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-path random stream: the state is derived from (seed, path index) only,
// so results do not depend on how paths are distributed across workers.
class PathRng {
public:
  PathRng(std::uint64_t seed, std::uint64_t path_index)
      : eng_(splitmix64(splitmix64(seed) ^ splitmix64(path_index + 0x51ed2701)) ) {}

  double uniform() {  // (0, 1)
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Box-Muller; keeps the draw sequence engine-defined-free.
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  unsigned poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {  // inversion by multiplication
      double L = std::exp(-mean), prod = uniform();
      unsigned k = 0;
      while (prod > L) {
        prod *= uniform();
        ++k;
      }
      return k;
    }
    // normal approximation is not acceptable for exact-law sampling; fall back
    // to splitting the mean, which stays in the inversion regime.
    unsigned total = 0;
    double remaining = mean;
    while (remaining > 25.0) {
      total += poisson(25.0);
      remaining -= 25.0;
    }
    return total + poisson(remaining);
  }

  // Gamma(shape, rate). Marsaglia-Tsang for shape >= 1; the shape < 1 case
  // uses G(shape) = G(shape+1) * U^{1/shape}. For the very small shapes that
  // arise from subordinator increments over one time step the factor
  // U^{1/shape} nearly always underflows; increments below 1e-14 are returned
  // as zero (bias < shape/rate * 1e-14 per draw).
  double gamma(double shape, double rate) {
    if (shape <= 0.0) return 0.0;
    if (shape < 1.0) {
      double t = std::log(uniform()) / shape;
      if (t < -32.3) return 0.0;  // e^t < 1e-14
      return gamma_mt(shape + 1.0) * std::exp(t) / rate;
    }
    return gamma_mt(shape) / rate;
  }

private:
  double gamma_mt(double shape) {  // rate 1, shape >= 1
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ldt
