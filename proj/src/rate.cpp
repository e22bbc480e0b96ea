#include "ldt/rate.hpp"

#include <algorithm>
#include <cmath>

namespace ldt {
namespace {

const double invphi = 0.6180339887498949;

// widest finite bracket strictly inside (p_lo, p_hi)
void finite_bracket(const std::function<double(double)>& H, double& lo,
                    double& hi) {
  const double huge = 1e8;
  lo = std::max(lo, -huge);
  hi = std::min(hi, huge);
  // shrink toward the interior until H is finite at both ends
  double span = hi - lo;
  for (int k = 0; k < 200 && !std::isfinite(H(lo)); ++k) lo += 1e-9 * span + (hi - lo) * 1e-3;
  for (int k = 0; k < 200 && !std::isfinite(H(hi)); ++k) hi -= 1e-9 * span + (hi - lo) * 1e-3;
}

}  // namespace

double legendre(const std::function<double(double)>& H, double p_lo,
                double p_hi, double q) {
  if (!(p_lo < p_hi)) throw ArgumentError("empty p-domain");
  double H0 = 0.0;
  if (p_lo < 0.0 && p_hi > 0.0) H0 = H(0.0);
  if (q == 0.0 && H0 == 0.0) {
    // H >= 0 convex with H(0)=0: the sup is attained at p=0 exactly
    return 0.0;
  }

  auto f = [&](double p) {
    double h = H(p);
    return std::isfinite(h) ? p * q - h : -kInf;
  };

  double lo = p_lo, hi = p_hi;
  finite_bracket(H, lo, hi);
  if (!(lo < hi)) throw NumericError("no finite bracket for legendre");

  // unbounded domain: march outward; pq - H(p) unbounded means Lbar = +inf
  if (!std::isfinite(p_lo) || !std::isfinite(p_hi)) {
    bool marched_inf = q >= 0.0 ? !std::isfinite(p_hi) : !std::isfinite(p_lo);
    double probe = 1.0, last = f(0.5 * (lo + hi));
    for (int k = 0; k < 60; ++k, probe *= 2.0) {
      double cand = std::clamp(q >= 0.0 ? probe : -probe, lo, hi);
      double v = f(cand);
      if (v > 1e12) return kInf;
      if (v < last - 1.0) break;  // objective turned over; maximizer bracketed
      if (cand == lo || cand == hi) {
        // never turned over before the representable edge of an infinite domain
        if (marched_inf && v >= last) return kInf;
        break;
      }
      last = std::max(last, v);
    }
    lo = std::max(lo, -probe);
    hi = std::min(hi, probe);
  }

  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-9) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double p_star = 0.5 * (a + b);
  double best = std::max({f(p_star), f(lo), f(hi)});
  if (q == 0.0) best = std::max(best, -H0);
  return best;
}

double rate_xfree(const HamiltonianHandle& h, double x0, double t, double x) {
  if (!(t > 0.0)) throw ArgumentError("rate_xfree: t > 0 required");
  if (!h.x_independent)
    throw ArgumentError("rate_xfree needs an x-independent hamiltonian");
  auto H = [&](double p) { return hamiltonian_eval(h, 0.0, p); };
  return t * legendre(H, h.p_lo, h.p_hi, (x0 - x) / t);
}

double rate_dual_estimate(const HamiltonianHandle& H, double x, double x0,
                          double t, const DualEstimateConfig& cfg) {
  if (!(t > 0.0)) throw ArgumentError("t > 0 required");
  if (cfg.family_size < 2) throw ArgumentError("family_size >= 2");

  // grid window centered so that both x0 and x are on nodes
  double xmin = x0 - cfg.window, xmax = x0 + cfg.window;
  int n = static_cast<int>(std::lround((xmax - xmin) / cfg.dx)) + 1;
  GridFunction grid;
  grid.xmin = xmin;
  grid.xmax = xmax;
  grid.n = n;
  grid.values.assign(n, 0.0);
  int i0 = static_cast<int>(std::lround((x0 - xmin) / grid.dx()));

  double p_edge = std::min(std::abs(H.p_lo), std::abs(H.p_hi));
  if (!std::isfinite(p_edge)) p_edge = 20.0;
  double beta_max = cfg.beta_fraction * p_edge;

  // H scale for the cap, probed over the admissible slope range
  double maxH = 0.0;
  for (int k = 0; k <= 32; ++k) {
    double v = hamiltonian_eval(H, x0, -beta_max + 2.0 * beta_max * k / 32.0);
    if (std::isfinite(v)) maxH = std::max(maxH, std::abs(v));
  }
  const double cap = 4.0 * t * std::max(1.0, maxH);
  const double alpha = 1.2 * estimate_alpha(H, xmin, xmax, beta_max);

  double best = 0.0;  // h constant attains exactly 0
  for (int k = 0; k < cfg.family_size; ++k) {
    double beta = -beta_max + 2.0 * beta_max * k / (cfg.family_size - 1);
    GridFunction h0 = grid;
    for (int i = 0; i < n; ++i)
      h0.values[i] = std::clamp(beta * (h0.x(i) - x), -cap, cap);
    SchemeConfig sc;
    sc.slope_cap = std::min(1.05 * std::abs(beta) + 1e-6, 0.95 * p_edge);
    sc.alpha = std::max(alpha, 1e-8);
    sc.dt = 0.45 * grid.dx() / sc.alpha;
    GridFunction u = solve_cauchy(H, h0, t, sc);
    best = std::max(best, 0.0 - u.values[i0]);  // h(x) = 0 by construction
  }
  return best;
}

}  // namespace ldt
