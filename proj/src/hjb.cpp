#include "ldt/hjb.hpp"

#include <algorithm>
#include <cmath>

namespace ldt {

void GridFunction::validate() const {
  if (n < 3) throw ArgumentError("grid needs n >= 3");
  if (!(xmin < xmax)) throw ArgumentError("xmin < xmax required");
  if (static_cast<int>(values.size()) != n)
    throw ArgumentError("values length != n");
  for (double v : values)
    if (!std::isfinite(v)) throw ArgumentError("grid values must be finite");
}

GridFunction solve_cauchy(const HamiltonianHandle& H, const GridFunction& h0,
                          double t, const SchemeConfig& cfg, SolveStats* stats) {
  h0.validate();
  if (!(t >= 0.0)) throw ArgumentError("t >= 0 required");
  if (!(cfg.dt > 0.0) || !(cfg.alpha >= 0.0) || !(cfg.slope_cap > 0.0))
    throw ArgumentError("dt > 0, alpha >= 0, slope_cap > 0 required");
  const double dx = h0.dx();
  if (cfg.dt * cfg.alpha / dx > 0.5 + 1e-12)
    throw ArgumentError("CFL violated: dt * alpha / dx must be <= 1/2");

  const int n = h0.n;
  std::vector<double> u = h0.values, unext(n);
  SolveStats local;

  double remaining = t;
  while (remaining > 1e-15) {
    double dt = std::min(cfg.dt, remaining);
    for (int i = 0; i < n; ++i) {
      double um, up;
      if (cfg.boundary == BoundaryRule::Periodic) {
        um = u[(i + n - 1) % n];
        up = u[(i + 1) % n];
      } else {  // linear extrapolation ghost: copies the edge slope
        um = (i > 0) ? u[i - 1] : 2.0 * u[0] - u[1];
        up = (i < n - 1) ? u[i + 1] : 2.0 * u[n - 1] - u[n - 2];
      }
      double slope = (up - um) / (2.0 * dx);
      if (std::abs(slope) > cfg.slope_cap) {
        slope = std::copysign(cfg.slope_cap, slope);
        ++local.clamp_events;
      }
      double Hval = hamiltonian_eval(H, h0.x(i), slope);
      if (!std::isfinite(Hval))
        throw NumericError("hamiltonian infinite at clamped slope", slope);
      unext[i] = u[i] + dt * (Hval + 0.5 * cfg.alpha * (up - 2.0 * u[i] + um) / dx);
    }
    u.swap(unext);
    remaining -= dt;
    ++local.steps;
  }

  if (stats) *stats = local;
  GridFunction out = h0;
  out.values = std::move(u);
  return out;
}

GridFunction hopf_lax(const GridFunction& h0,
                      const std::function<double(double)>& Lbar, double t) {
  h0.validate();
  if (!(t > 0.0)) throw ArgumentError("t > 0 required");
  const int n = h0.n;
  const double dx = h0.dx();
  GridFunction out = h0;

  for (int i = 0; i < n; ++i) {
    const double x0 = h0.x(i);
    auto objective = [&](double x, double hx) {
      double L = Lbar((x0 - x) / t);
      return std::isfinite(L) ? hx - t * L : -kInf;
    };
    int best = i;
    double best_val = -kInf;
    for (int j = 0; j < n; ++j) {
      double val = objective(h0.x(j), h0.values[j]);
      if (val > best_val) {
        best_val = val;
        best = j;
      }
    }
    // parabola through the discrete maximizer and its neighbors; h0 between
    // nodes is taken as linear interpolation
    if (best > 0 && best < n - 1) {
      auto interp = [&](double x) {
        double s = (x - h0.xmin) / dx;
        int j = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
        double w = s - j;
        return objective(x, (1.0 - w) * h0.values[j] + w * h0.values[j + 1]);
      };
      double fm = objective(h0.x(best - 1), h0.values[best - 1]);
      double fp = objective(h0.x(best + 1), h0.values[best + 1]);
      double denom = fm - 2.0 * best_val + fp;
      if (std::isfinite(fm) && std::isfinite(fp) && denom < -1e-300) {
        double shift = 0.5 * (fm - fp) / denom * dx;
        shift = std::clamp(shift, -dx, dx);
        best_val = std::max(best_val, interp(h0.x(best) + shift));
      }
    }
    out.values[i] = best_val;
  }
  return out;
}

double estimate_alpha(const HamiltonianHandle& H, double xmin, double xmax,
                      double slope_cap, int n_probe) {
  if (!(slope_cap > 0.0)) throw ArgumentError("slope_cap > 0");
  double worst = 0.0;
  const double dp = 2.0 * slope_cap / n_probe;
  const int nx = H.x_independent ? 1 : 9;
  for (int ix = 0; ix < nx; ++ix) {
    double x = xmin + (xmax - xmin) * (nx == 1 ? 0.0 : double(ix) / (nx - 1));
    double prev = hamiltonian_eval(H, x, -slope_cap);
    for (int k = 1; k <= n_probe; ++k) {
      double cur = hamiltonian_eval(H, x, -slope_cap + k * dp);
      if (std::isfinite(prev) && std::isfinite(cur))
        worst = std::max(worst, std::abs(cur - prev) / dp);
      prev = cur;
    }
  }
  return worst;
}

}  // namespace ldt
