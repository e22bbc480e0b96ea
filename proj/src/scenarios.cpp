#include "ldt/scenarios.hpp"

#include <cmath>

namespace ldt {
namespace {

// 2x2 principal eigenvalue of diag(V0, V1) + [[-q01, q01], [q10, -q10]]
double eig2(double V0, double V1, double q01, double q10) {
  double mean = 0.5 * (V0 + V1) - 0.5 * (q01 + q10);
  double half_gap = 0.5 * (V1 - V0 + q01 - q10);
  return mean + std::sqrt(half_gap * half_gap + q01 * q10);
}

double cosh_jump(double p) {  // int (e^{pz}-1-pz) d(nu1) for the +-1 atoms
  return expm1m(p) * 0.5 + expm1m(-p) * 0.5;
}

}  // namespace

void BnsParams::validate() const {
  if (!(a > 0.0 && b > 0.0)) throw ArgumentError("bns: a, b > 0 required");
  if (!(K > 0.0)) throw ArgumentError("bns: K > 0 required");
  if (!(t > 0.0)) throw ArgumentError("bns: t > 0 required");
  if (y0 < 0.0) throw ArgumentError("bns: y0 >= 0 required");
}

void GeneParams::validate() const {
  if (!(kappa1 > 0.0 && kappa_m1 > 0.0 && kappa2 > 0.0 && kappa3 > 0.0))
    throw ArgumentError("gene: all rate constants must be > 0");
  if (!(x0 > 0.0)) throw ArgumentError("gene: x0 > 0 required");
  if (y0 != 0.0 && y0 != 1.0) throw ArgumentError("gene: y0 in {0, 1}");
  if (!(t > 0.0)) throw ArgumentError("gene: t > 0 required");
}

ModelSpec bns_model(const BnsParams& g) {
  g.validate();
  ModelSpec m;
  double r = g.r, a = g.a, b = g.b;
  // leading-order slow coefficients: b == 0, the O(eps) drift r - y/2
  // lives in b0; volatility sqrt(y); fast gamma-OU reversion in b1 + nu2
  m.coeffs.b0 = [r](double, double y) { return r - 0.5 * y; };
  m.coeffs.sigma = [](double, double y) { return std::sqrt(std::max(y, 0.0)); };
  m.coeffs.b1 = [a, b](double, double y) { return -y + a / b; };  // compensated
  m.coeffs.k1 = [](double, double, double z) { return z; };
  m.coeffs.nu2 = LevyMeasure::gamma(a, b);
  m.x0 = g.x0;
  m.y0 = g.y0;
  m.fast_domain = HalfLine{0.0};
  m.validate();
  return m;
}

ModelSpec gene_model(const GeneParams& g) {
  g.validate();
  ModelSpec m;
  double k2 = g.kappa2, k3 = g.kappa3, k1 = g.kappa1, km1 = g.kappa_m1;
  m.coeffs.b = [k2, k3](double x, double y) { return k2 * y - k3 * x; };
  m.coeffs.sigma = [k2, k3](double x, double y) {
    return std::sqrt(std::max(k2 * y + k3 * x, 0.0));
  };
  m.coeffs.k = [](double, double, double z) { return z; };
  m.coeffs.nu1 = LevyMeasure::atoms({{-1.0, 0.5}, {1.0, 0.5}});
  m.x0 = g.x0;
  m.y0 = g.y0;
  m.fast_domain = FiniteSet{{0.0, 1.0}};
  m.chain_rates = [k1, km1](double x, double from, double to) {
    if (from == 0.0 && to == 1.0) return k1 * x;
    if (from == 1.0 && to == 0.0) return km1 * x;
    return 0.0;
  };
  m.validate();
  return m;
}

double bns_hamiltonian(double p, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ArgumentError("a, b > 0 required");
  double p2 = p * p;
  if (p2 >= 2.0 * b) return kInf;
  return a * std::log1p(p2 / (2.0 * b - p2));
}

double bns_rate(double q, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ArgumentError("a, b > 0 required");
  if (q == 0.0) return 0.0;
  // H is even so Lbar is even; evaluate the q > 0 branch at |q|. (The
  // q < 0 branch as printed takes a log of a negative argument.)
  double qa = std::abs(q);
  double s = std::sqrt(a * a + 2.0 * b * qa * qa);
  return -a + s - a * std::log(2.0 * b) +
         a * std::log(-2.0 * a * a / (qa * qa) + 2.0 * a / (qa * qa) * s);
}

double otm_call_asymptote(const BnsParams& g) {
  g.validate();
  if (!(g.x0 < std::log(g.K)))
    throw ArgumentError("otm_call_asymptote needs an out-of-the-money strike "
                        "(exp(x0) < K)");
  return -g.t * bns_rate((g.x0 - std::log(g.K)) / g.t, g.a, g.b);
}

double gene_hamiltonian_printed(double x, double p, const GeneParams& g) {
  g.validate();
  if (!(x > 0.0)) throw ArgumentError("x > 0 required");
  double k1 = g.kappa1, km1 = g.kappa_m1, k2 = g.kappa2, k3 = g.kappa3;
  double ax;
  if (k1 == km1) {
    double u = k2 * p * (1.0 + p);
    ax = (u + std::sqrt(u * u + 4.0 * k1 * k1 * x * x)) / (2.0 * k1 * x);
  } else {
    double A = k1 * x;
    double B = -k2 * p - k2 * p * p + (km1 - k1) * x;
    double C = -km1 * x;
    ax = (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  }
  return -k3 * x * p + k3 * x * p * p + k1 * x * (ax - 1.0) +
         0.5 * (std::exp(p) + std::exp(-p) - 2.0);
}

double gene_hamiltonian_consistent(double x, double p, const GeneParams& g) {
  g.validate();
  if (!(x > 0.0)) throw ArgumentError("x > 0 required");
  double k2 = g.kappa2, k3 = g.kappa3;
  auto V = [&](double y) {
    return (k2 * y - k3 * x) * p + 0.5 * (k2 * y + k3 * x) * p * p +
           cosh_jump(p);
  };
  return eig2(V(0.0), V(1.0), g.kappa1 * x, g.kappa_m1 * x);
}

double gene_pdmp_hamiltonian(double x, double p, const GeneParams& g) {
  g.validate();
  if (!(x > 0.0)) throw ArgumentError("x > 0 required");
  if (g.kappa1 != g.kappa_m1)
    throw ArgumentError(
        "the PDMP formula is available for symmetric switching rates only");
  double k1 = g.kappa1, k2 = g.kappa2, k3 = g.kappa3;
  return -k3 * p * x + 0.5 * k2 * p +
         0.5 * std::sqrt(k2 * p * k2 * p + 4.0 * k1 * x * k1 * x) - k1 * x;
}

HamiltonianHandle bns_handle(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ArgumentError("a, b > 0 required");
  HamiltonianHandle h;
  h.backend = "closed-form";
  h.p_lo = -std::sqrt(2.0 * b);
  h.p_hi = std::sqrt(2.0 * b);
  h.x_independent = true;
  h.eval = [a, b](double, double p) { return bns_hamiltonian(p, a, b); };
  return h;
}

HamiltonianHandle gene_handle(const GeneParams& g) {
  g.validate();
  HamiltonianHandle h;
  h.backend = "closed-form";
  h.x_independent = false;
  h.eval = [g](double x, double p) {
    return gene_hamiltonian_consistent(x, p, g);
  };
  return h;
}

HamiltonianHandle gene_handle_printed(const GeneParams& g) {
  g.validate();
  HamiltonianHandle h;
  h.backend = "closed-form";
  h.x_independent = false;
  h.eval = [g](double x, double p) { return gene_hamiltonian_printed(x, p, g); };
  return h;
}

}  // namespace ldt
