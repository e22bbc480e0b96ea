#pragma once

#include <vector>

#include "ldt/hamiltonian.hpp"

namespace ldt {

struct GridFunction {
  double xmin = 0.0, xmax = 1.0;
  int n = 3;
  std::vector<double> values;

  double dx() const { return (xmax - xmin) / (n - 1); }
  double x(int i) const { return xmin + i * dx(); }
  void validate() const;
};

enum class BoundaryRule { Extrapolate, Periodic };

struct SchemeConfig {
  double dt = 0.0;
  double alpha = 0.0;      // artificial viscosity
  double slope_cap = 0.0;  // slopes clamped to +-slope_cap before H
  BoundaryRule boundary = BoundaryRule::Extrapolate;
};

struct SolveStats {
  long clamp_events = 0;
  long steps = 0;
};

// Explicit Lax-Friedrichs march of du/dt = H(x, du/dx) to time t.
GridFunction solve_cauchy(const HamiltonianHandle& H, const GridFunction& h0,
                          double t, const SchemeConfig& cfg,
                          SolveStats* stats = nullptr);

// u(t, x0) = max_x { h0(x) - t Lbar((x0 - x)/t) }, per grid node, with a
// 3-point parabolic refinement around the discrete maximizer.
GridFunction hopf_lax(const GridFunction& h0,
                      const std::function<double(double)>& Lbar, double t);

// finite-difference estimate of max |dH/dp| over the clamped slope range
double estimate_alpha(const HamiltonianHandle& H, double xmin, double xmax,
                      double slope_cap, int n_probe = 64);

}  // namespace ldt
