#include "ldt/levy.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace ldt {
namespace {

// E1(x) = int_x^inf e^-t / t dt
double e1(double x) {
  if (x > 700.0) return 0.0;
  return boost::math::expint(1, x);
}

// Adaptive integration of g against a density on (lo, hi), hi possibly +inf.
// Divergence is detected by probing the integrand growth at large z before
// handing the finite part to tanh_sinh.
double integrate_density(const std::function<double(double)>& integrand, double lo,
                         double hi) {
  boost::math::quadrature::tanh_sinh<double> quad;
  if (std::isfinite(hi)) {
    double err = 0.0;
    double val = quad.integrate(integrand, lo, hi, 1e-10, &err);
    if (!std::isfinite(val)) return kInf;
    if (err > 1e-6 * std::max(1.0, std::abs(val)))
      throw NumericError("quadrature did not converge", val);
    return val;
  }
  // probe the tail: the densities decay at least like e^{-bz} or z^{-1-alpha},
  // so a growing integrand means the exponential factor wins -> +inf
  double prev = std::abs(integrand(std::max(lo, 1.0) * 8.0));
  double cut = std::max(lo, 1.0) * 8.0;
  for (int i = 0; i < 60; ++i) {
    double z = cut * 2.0;
    double cur = std::abs(integrand(z));
    if (!std::isfinite(cur)) return kInf;
    if (cur > prev && cur > 1.0) return kInf;  // diverging tail
    cut = z;
    prev = cur;
    if (cur < 1e-300) break;
  }
  double err = 0.0;
  double val = quad.integrate(integrand, lo, cut, 1e-10, &err);
  if (!std::isfinite(val)) return kInf;
  if (err > 1e-6 * std::max(1.0, std::abs(val)))
    throw NumericError("quadrature did not converge", val);
  return val;
}

}  // namespace

LevyMeasure LevyMeasure::atoms(std::vector<std::pair<double, double>> atoms) {
  for (const auto& [z, m] : atoms) {
    if (!std::isfinite(z)) throw ArgumentError("atom location must be finite");
    if (!(m >= 0.0) || !std::isfinite(m))
      throw ArgumentError("atom mass must be nonnegative and finite");
  }
  return LevyMeasure(FiniteAtoms{std::move(atoms)});
}

LevyMeasure LevyMeasure::gamma(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("gamma measure needs a, b > 0");
  return LevyMeasure(GammaDensity{a, b});
}

LevyMeasure LevyMeasure::truncated_power(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw ArgumentError("truncated power index must lie in (0, 2)");
  return LevyMeasure(TruncatedPower{alpha});
}

bool LevyMeasure::is_zero() const {
  if (const auto* fa = std::get_if<FiniteAtoms>(&v_)) {
    for (const auto& [z, m] : fa->atoms)
      if (m > 0.0) return false;
    return true;
  }
  return false;
}

double LevyMeasure::total_mass() const {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteAtoms>) {
          double s = 0.0;
          for (const auto& [z, w] : m.atoms) s += w;
          return s;
        } else if constexpr (std::is_same_v<T, GammaDensity>) {
          return kInf;
        } else {
          return 2.0 / m.alpha;
        }
      },
      v_);
}

bool kslice_is_identity(const KSlice& k) {
  for (double z : {1e-3, 0.37, 1.0, 2.5, 7.0}) {
    double v = k(z);
    if (std::abs(v - z) > 1e-12 * std::max(1.0, std::abs(z))) return false;
  }
  return true;
}

double exp_compensated_integral(const LevyMeasure& nu, double p, const KSlice& k) {
  if (p == 0.0) return 0.0;
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteAtoms>) {
          double s = 0.0;
          for (const auto& [z, w] : m.atoms) {
            if (w == 0.0) continue;
            double term = expm1m(p * k(z));  // >= 0 pointwise
            s += w * term;
            if (!std::isfinite(s)) return kInf;
          }
          return s;
        } else if constexpr (std::is_same_v<T, GammaDensity>) {
          if (kslice_is_identity(k)) {
            if (p >= m.b) return kInf;
            return m.a * (std::log(m.b / (m.b - p)) - p / m.b);
          }
          auto f = [&](double z) {
            return expm1m(p * k(z)) * m.a * std::exp(-m.b * z) / z;
          };
          return integrate_density(f, 0.0, kInf);
        } else {  // TruncatedPower
          auto pos = [&](double z) {
            return expm1m(p * k(z)) * std::pow(z, -1.0 - m.alpha);
          };
          auto neg = [&](double z) {
            return expm1m(p * k(-z)) * std::pow(z, -1.0 - m.alpha);
          };
          double ip = integrate_density(pos, 1.0, kInf);
          if (!std::isfinite(ip)) return kInf;
          double in = integrate_density(neg, 1.0, kInf);
          if (!std::isfinite(in)) return kInf;
          return ip + in;
        }
      },
      nu.variant());
}

double integrate(const LevyMeasure& nu, const std::function<double(double)>& g) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteAtoms>) {
          double s = 0.0;
          for (const auto& [z, w] : m.atoms) {
            if (w == 0.0) continue;
            s += w * g(z);
          }
          return std::isfinite(s) ? s : kInf;
        } else if constexpr (std::is_same_v<T, GammaDensity>) {
          auto f = [&](double z) { return g(z) * m.a * std::exp(-m.b * z) / z; };
          return integrate_density(f, 0.0, kInf);
        } else {
          auto pos = [&](double z) { return g(z) * std::pow(z, -1.0 - m.alpha); };
          auto neg = [&](double z) { return g(-z) * std::pow(z, -1.0 - m.alpha); };
          double ip = integrate_density(pos, 1.0, kInf);
          if (!std::isfinite(ip)) return kInf;
          double in = integrate_density(neg, 1.0, kInf);
          if (!std::isfinite(in)) return kInf;
          return ip + in;
        }
      },
      nu.variant());
}

double second_moment(const LevyMeasure& nu, const KSlice& k) {
  if (const auto* gd = std::get_if<GammaDensity>(&nu.variant());
      gd && kslice_is_identity(k))
    return gd->a / (gd->b * gd->b);
  if (const auto* tp = std::get_if<TruncatedPower>(&nu.variant());
      tp && kslice_is_identity(k))
    return kInf;  // int z^{1-alpha} over |z|>1 diverges for alpha < 2
  return integrate(nu, [&](double z) {
    double v = k(z);
    return v * v;
  });
}

double mean_above(const LevyMeasure& nu, const KSlice& k, double cut) {
  if (const auto* gd = std::get_if<GammaDensity>(&nu.variant());
      gd && kslice_is_identity(k))
    return gd->a / gd->b * std::exp(-gd->b * cut);
  return integrate(nu, [&](double z) {
    double v = k(z);
    return std::abs(v) >= cut ? v : 0.0;
  });
}

double one_wedge_z2_mass(const LevyMeasure& nu) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteAtoms>) {
          double s = 0.0;
          for (const auto& [z, w] : m.atoms) s += w * std::min(1.0, z * z);
          return s;
        } else if constexpr (std::is_same_v<T, GammaDensity>) {
          // a int_0^1 z e^{-bz} dz + a E1(b)
          double b = m.b;
          double small = m.a * (1.0 - std::exp(-b) * (1.0 + b)) / (b * b);
          return small + m.a * e1(b);
        } else {
          return 2.0 / m.alpha;  // all jumps have |z| > 1
        }
      },
      nu.variant());
}

}  // namespace ldt
