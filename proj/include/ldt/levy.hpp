#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "ldt/common.hpp"

namespace ldt {

// Jump intensity measures. The menu is deliberately small: each variant
// admits exact sampling and a controlled route for the exponential
// integrals below. Arbitrary densities are rejected at construction.
struct FiniteAtoms {
  std::vector<std::pair<double, double>> atoms;  // (location, mass)
};

struct GammaDensity {  // a z^{-1} e^{-bz} on z > 0
  double a = 1.0;
  double b = 1.0;
};

struct TruncatedPower {  // |z|^{-1-alpha} on |z| > 1
  double alpha = 1.0;
};

class LevyMeasure {
public:
  using Variant = std::variant<FiniteAtoms, GammaDensity, TruncatedPower>;

  static LevyMeasure zero() { return LevyMeasure(FiniteAtoms{}); }
  static LevyMeasure atoms(std::vector<std::pair<double, double>> atoms);
  static LevyMeasure gamma(double a, double b);
  static LevyMeasure truncated_power(double alpha);

  const Variant& variant() const { return v_; }
  bool is_zero() const;

  // total mass; +inf for the infinite-activity gamma variant
  double total_mass() const;

private:
  explicit LevyMeasure(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

using KSlice = std::function<double(double)>;

// True when k(z) == z at a handful of probe points. Used to pick the
// closed-form routes for the gamma variant.
bool kslice_is_identity(const KSlice& k);

// Integral of (e^{p k(z)} - 1 - p k(z)) nu(dz). Returns +inf on divergence.
double exp_compensated_integral(const LevyMeasure& nu, double p, const KSlice& k);

// Integral of g(z) nu(dz); +inf on divergence. g must be measure-integrable
// near z = 0 for the gamma variant (g(z) = O(z) suffices).
double integrate(const LevyMeasure& nu, const std::function<double(double)>& g);

// Integral of k(z)^2 nu(dz); +inf when divergent.
double second_moment(const LevyMeasure& nu, const KSlice& k);

// Integral of k(z) nu(dz) restricted to |k(z)| >= cut (jump compensator for
// the part of the measure kept as discrete jumps).
double mean_above(const LevyMeasure& nu, const KSlice& k, double cut);

// Checks integral of (1 ^ z^2) nu(dz) < inf; holds by construction for the
// whole menu, evaluated in closed form per variant.
double one_wedge_z2_mass(const LevyMeasure& nu);

}  // namespace ldt
