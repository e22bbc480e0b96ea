#pragma once

#include "ldt/hamiltonian.hpp"
#include "ldt/model.hpp"

namespace ldt {

// Gamma-OU stochastic volatility: log price X with volatility Y reverting
// against a gamma subordinator with Levy density (a/z) e^{-bz}.
struct BnsParams {
  double r = 0.0;
  double a = 1.0, b = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double K = 1.0;  // strike, for the call asymptote
  double t = 1.0;

  void validate() const;
};

// Self-regulating protein production: protein level X, promoter state
// Y in {0, 1} switching at protein-dependent rates.
struct GeneParams {
  double kappa1 = 1.0, kappa_m1 = 1.0;  // on/off switching rate constants
  double kappa2 = 1.0, kappa3 = 1.0;    // production / degradation
  double x0 = 1.0;
  double y0 = 0.0;  // 0 or 1
  double t = 1.0;

  void validate() const;
};

ModelSpec bns_model(const BnsParams& g);
ModelSpec gene_model(const GeneParams& g);

// a ln(1 + p^2 / (2b - p^2)) for p^2 < 2b; +inf beyond.
double bns_hamiltonian(double p, double a, double b);

// Legendre transform of bns_hamiltonian; closed form, even in q.
double bns_rate(double q, double a, double b);

// lim eps ln E[(S - K)^+] = -t Lbar((x0 - ln K)/t) for an OTM call.
double otm_call_asymptote(const BnsParams& g);

// The eigenvalue formula as printed (diffusion term sigma^2 p^2).
double gene_hamiltonian_printed(double x, double p, const GeneParams& g);

// The 2x2 eigenvalue with the potential carrying the 1/2 sigma^2 p^2
// diffusion term; differs from the printed formula (documented).
double gene_hamiltonian_consistent(double x, double p, const GeneParams& g);

// Piecewise-deterministic approximation; symmetric rates only.
double gene_pdmp_hamiltonian(double x, double p, const GeneParams& g);

HamiltonianHandle bns_handle(double a, double b);
HamiltonianHandle gene_handle(const GeneParams& g);
HamiltonianHandle gene_handle_printed(const GeneParams& g);

}  // namespace ldt
