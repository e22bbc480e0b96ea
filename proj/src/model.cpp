#include "ldt/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ldt/rng.hpp"

namespace ldt {
namespace {

// y samples for a box: grid states for chains, uniform draws otherwise.
double sample_y(const ModelSpec& m, const Box& box, PathRng& rng) {
  if (const auto* fs = std::get_if<FiniteSet>(&m.fast_domain)) {
    size_t i = static_cast<size_t>(rng.uniform() * fs->states.size());
    return fs->states[std::min(i, fs->states.size() - 1)];
  }
  double y = box.ylo + (box.yhi - box.ylo) * rng.uniform();
  if (const auto* hl = std::get_if<HalfLine>(&m.fast_domain))
    y = std::max(y, hl->lower);
  return y;
}

double coeff_sq_sum(const ModelSpec& m, double x, double y) {
  const auto& c = m.coeffs;
  double s = 0.0;
  for (double v : {c.b(x, y), c.b0(x, y), c.sigma(x, y), c.b1(x, y), c.sigma1(x, y)})
    s += v * v;
  double j1 = second_moment(c.nu1, [&](double z) { return c.k(x, y, z); });
  double j2 = m.is_chain()
                  ? 0.0
                  : second_moment(c.nu2, [&](double z) { return c.k1(x, y, z); });
  return s + j1 + j2;
}

}  // namespace

bool ModelSpec::contains_y(double y) const {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RealLine>) {
          return std::isfinite(y);
        } else if constexpr (std::is_same_v<T, HalfLine>) {
          return std::isfinite(y) && y >= d.lower;
        } else {
          for (double s : d.states)
            if (s == y) return true;
          return false;
        }
      },
      fast_domain);
}

void ModelSpec::validate() const {
  if (!(std::abs(coeffs.rho) <= 1.0)) throw ArgumentError("|rho| must be <= 1");
  if (!contains_y(y0)) throw ArgumentError("y0 outside the fast domain");
  if (is_chain() && !chain_rates)
    throw ArgumentError("finite-state fast domain requires chain rates");
  if (const auto* fs = std::get_if<FiniteSet>(&fast_domain)) {
    if (fs->states.size() < 2) throw ArgumentError("chain needs >= 2 states");
    for (size_t i = 1; i < fs->states.size(); ++i)
      if (!(fs->states[i] > fs->states[i - 1]))
        throw ArgumentError("chain states must be strictly increasing");
  }
}

double eval_V(const ModelSpec& m, double x, double y, double p) {
  if (!m.contains_y(y)) throw ArgumentError("eval_V: y outside fast domain");
  if (p == 0.0) return 0.0;
  const auto& c = m.coeffs;
  double s = c.sigma(x, y);
  double v = c.b(x, y) * p + 0.5 * s * s * p * p;
  double jump =
      exp_compensated_integral(c.nu1, p, [&](double z) { return c.k(x, y, z); });
  return v + jump;  // +inf propagates
}

double perturbed_drift(const ModelSpec& m, double x, double y, double p) {
  const auto& c = m.coeffs;
  return c.rho * c.sigma(x, y) * c.sigma1(x, y) * p + c.b1(x, y);
}

GrowthReport check_growth(const ModelSpec& m, const Box& box, int n_samples,
                          std::uint64_t seed) {
  if (n_samples < 1) throw ArgumentError("check_growth: n_samples >= 1");
  PathRng rng(seed, 0);
  GrowthReport rep;
  double edge_max = 0.0, inner_max = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double x = box.xlo + (box.xhi - box.xlo) * rng.uniform();
    double y = sample_y(m, box, rng);
    double ratio = coeff_sq_sum(m, x, y) / (1.0 + x * x + y * y);
    if (ratio > rep.K2_hat) {
      rep.K2_hat = ratio;
      rep.worst_x = x;
      rep.worst_y = y;
    }
    double span = std::max(box.xhi - box.xlo, 1e-12);
    bool near_edge = std::min(x - box.xlo, box.xhi - x) < 0.15 * span;
    (near_edge ? edge_max : inner_max) = std::max(near_edge ? edge_max : inner_max, ratio);
  }
  // ratio concentrated at the box edge suggests the bound is not uniform
  rep.uniform = !(edge_max > 2.0 * std::max(inner_max, 1e-300));
  return rep;
}

LipschitzReport check_lipschitz(const ModelSpec& m, int n_pairs, const Box& box,
                                std::uint64_t seed) {
  if (n_pairs < 1) throw ArgumentError("check_lipschitz: n_pairs >= 1");
  PathRng rng(seed, 1);
  const auto& c = m.coeffs;
  LipschitzReport rep;
  double close_max = 0.0, far_max = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    double x1 = box.xlo + (box.xhi - box.xlo) * rng.uniform();
    double y1 = sample_y(m, box, rng);
    double x2, y2;
    if (i % 2 == 0) {  // half the pairs probe short distances
      double r = 1e-4 + 1e-2 * rng.uniform();
      x2 = std::clamp(x1 + r * (2.0 * rng.uniform() - 1.0), box.xlo, box.xhi);
      y2 = m.is_chain() ? sample_y(m, box, rng)
                        : std::clamp(y1 + r * (2.0 * rng.uniform() - 1.0), box.ylo,
                                     box.yhi);
    } else {
      x2 = box.xlo + (box.xhi - box.xlo) * rng.uniform();
      y2 = sample_y(m, box, rng);
    }
    double d2 = (x2 - x1) * (x2 - x1) + (y2 - y1) * (y2 - y1);
    if (d2 < 1e-24) continue;
    double num = 0.0;
    auto sq = [](double v) { return v * v; };
    num += sq(c.b(x2, y2) - c.b(x1, y1));
    num += sq(c.b0(x2, y2) - c.b0(x1, y1));
    num += sq(c.b1(x2, y2) - c.b1(x1, y1));
    num += sq(c.sigma(x2, y2) - c.sigma(x1, y1));
    num += sq(c.sigma1(x2, y2) - c.sigma1(x1, y1));
    num += second_moment(c.nu1,
                         [&](double z) { return c.k(x2, y2, z) - c.k(x1, y1, z); });
    if (!m.is_chain())
      num += second_moment(
          c.nu2, [&](double z) { return c.k1(x2, y2, z) - c.k1(x1, y1, z); });
    double q = num / d2;
    if (q > rep.K1_hat) {
      rep.K1_hat = q;
      rep.worst_x1 = x1;
      rep.worst_y1 = y1;
      rep.worst_x2 = x2;
      rep.worst_y2 = y2;
    }
    (d2 < 1e-2 ? close_max : far_max) = std::max(d2 < 1e-2 ? close_max : far_max, q);
  }
  rep.flagged = close_max > 10.0 * std::max(far_max, 1e-300);
  return rep;
}

double scan_V_lower_bound(const ModelSpec& m, double x, double p, double ylo,
                          double yhi, int n) {
  if (n < 2) throw ArgumentError("scan_V_lower_bound: n >= 2");
  double lo = kInf;
  for (int i = 0; i < n; ++i) {
    double y = ylo + (yhi - ylo) * i / (n - 1);
    if (!m.contains_y(y)) continue;
    lo = std::min(lo, eval_V(m, x, y, p));
  }
  return lo;
}

}  // namespace ldt
