#pragma once

#include "ldt/hjb.hpp"

namespace ldt {

// Legendre transform sup_p { p q - H(p) } by golden-section on the concave
// objective; p restricted to the open interval (p_lo, p_hi) where H < inf.
// Returns +inf when the objective is unbounded above.
double legendre(const std::function<double(double)>& H, double p_lo,
                double p_hi, double q);

// I(x; x0, t) = t * Lbar((x0 - x)/t) for an x-independent Hamiltonian.
double rate_xfree(const HamiltonianHandle& h, double x0, double t, double x);

struct DualEstimateConfig {
  int family_size = 200;
  double window = 8.0;   // half-width of the solver grid around x0
  double dx = 0.02;
  double beta_fraction = 0.9;  // slope grid stays inside +-f * p_edge
};

// Lower bound on I(x, x0, t) = sup_h { h(x) - u0^h(t, x0) } over capped-linear
// test functions h_{beta,c}(xi) = clamp(beta (xi - x), +-c); each u0^h solved
// through solve_cauchy.
double rate_dual_estimate(const HamiltonianHandle& H, double x, double x0,
                          double t, const DualEstimateConfig& cfg = {});

}  // namespace ldt
