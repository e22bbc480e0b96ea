#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ldt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool finite(double v) { return std::isfinite(v); }

// Bad input from a caller (precondition violation).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A numeric procedure failed to converge or overflowed. Carries the best
// partial estimate when one exists.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what,
                        double partial = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), partial_(partial) {}
  double partial() const { return partial_; }

private:
  double partial_;
};

// e^u - 1 - u, free of cancellation near u = 0. Series truncated at
// relative tolerance 1e-12.
inline double expm1m(double u) {
  if (std::abs(u) > 1e-2) return std::expm1(u) - u;
  // u^2/2 * (1 + u/3 + u^2/12 + u^3/60 + ...)  (term_n = u^n * 2/(n+2)!)
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 12; ++n) {
    term *= u / static_cast<double>(n + 2);
    sum += term;
    if (std::abs(term) < 1e-13 * std::abs(sum)) break;
  }
  return 0.5 * u * u * sum;
}

}  // namespace ldt
