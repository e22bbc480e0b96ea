#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "ldt/levy.hpp"

namespace ldt {

using Coeff2 = std::function<double(double, double)>;  // (x, y)
using Coeff3 = std::function<double(double, double, double)>;  // (x, y, z)

// Drift/diffusion/jump coefficients of the two-scale system. b, b0, sigma
// drive the slow variable; b1, sigma1 the fast one; k / k1 are the jump
// amplitude maps against nu1 / nu2; rho correlates the Brownian drivers.
struct CoefficientSet {
  Coeff2 b = [](double, double) { return 0.0; };
  Coeff2 b0 = [](double, double) { return 0.0; };
  Coeff2 sigma = [](double, double) { return 0.0; };
  Coeff2 b1 = [](double, double) { return 0.0; };
  Coeff2 sigma1 = [](double, double) { return 0.0; };
  Coeff3 k = [](double, double, double) { return 0.0; };
  Coeff3 k1 = [](double, double, double) { return 0.0; };
  double rho = 0.0;
  LevyMeasure nu1 = LevyMeasure::zero();
  LevyMeasure nu2 = LevyMeasure::zero();
};

struct RealLine {};
struct HalfLine {
  double lower = 0.0;
};
struct FiniteSet {
  std::vector<double> states;
};
using FastDomain = std::variant<RealLine, HalfLine, FiniteSet>;

// Transition rate (x, from_state, to_state) -> rate, for finite-state fast
// processes.
using ChainRates = std::function<double(double, double, double)>;

struct ModelSpec {
  CoefficientSet coeffs;
  double x0 = 0.0;
  double y0 = 0.0;
  FastDomain fast_domain = RealLine{};
  ChainRates chain_rates;  // required iff fast_domain is FiniteSet

  bool is_chain() const { return std::holds_alternative<FiniteSet>(fast_domain); }
  bool contains_y(double y) const;
  void validate() const;  // |rho|<=1, y0 in domain, chain rates present
};

struct Box {
  double xlo, xhi, ylo, yhi;
};

struct GrowthReport {
  double K2_hat = 0.0;
  double worst_x = 0.0, worst_y = 0.0;
  bool uniform = true;  // false when the ratio keeps growing toward the box edge
};

struct LipschitzReport {
  double K1_hat = 0.0;
  double worst_x1 = 0.0, worst_y1 = 0.0, worst_x2 = 0.0, worst_y2 = 0.0;
  bool flagged = false;  // true when quotients blow up at short distances
};

// V(y; x, p) = b p + sigma^2 p^2 / 2 + int (e^{p k} - 1 - p k) nu1;
// +inf propagates from the jump integral.
double eval_V(const ModelSpec& m, double x, double y, double p);

// rho sigma sigma1 p + b1 : the tilted fast drift.
double perturbed_drift(const ModelSpec& m, double x, double y, double p);

// Sampled diagnostics for the quadratic growth / Lipschitz assumptions.
// Empirical constants over seeded sample points, not proofs.
GrowthReport check_growth(const ModelSpec& m, const Box& box, int n_samples,
                          std::uint64_t seed);
LipschitzReport check_lipschitz(const ModelSpec& m, int n_pairs, const Box& box,
                                std::uint64_t seed);

// Grid scan of inf_y V(y; x, p) over y in [ylo, yhi]; reports the empirical
// lower bound (the V_bound diagnostic).
double scan_V_lower_bound(const ModelSpec& m, double x, double p, double ylo,
                          double yhi, int n);

}  // namespace ldt
