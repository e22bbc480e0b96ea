#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ldt/fastgen.hpp"

namespace ldt {

// Principal eigenpair of Q + diag(V): lambda with a strictly positive
// eigenfunction, normalized to max entry 1.
struct EigenResult {
  double lambda = 0.0;
  Eigen::VectorXd eigenfunction;
  int iterations = 0;
  double residual = 0.0;
};

// A Hamiltonian evaluator with its finite p-domain. eval returns +inf
// outside (p_lo, p_hi); the open interval may be the whole line.
struct HamiltonianHandle {
  std::string backend;  // "closed-form", "matrix-eigen", "feynman-kac"
  double p_lo = -kInf, p_hi = kInf;
  bool x_independent = false;
  std::function<double(double, double)> eval;  // (x, p) -> extended real
};

struct FkResult {
  double lambda_hat = 0.0;
  double stderr_hat = 0.0;
};

struct ContinuityReport {
  // empirical Lipschitz constants per direction, plus the largest
  // single-cell jump seen on the mesh
  double x_modulus = 0.0;
  double p_modulus = 0.0;
  double max_jump = 0.0;
};

EigenResult principal_eigenvalue(const FastGenerator& G,
                                 const Eigen::VectorXd& V_vec);

double hamiltonian_eval(const HamiltonianHandle& h, double x, double p);

// Donsker-Varadhan cost J(mu) = -inf_{g > 0} sum_i mu_i (Qg)_i / g_i.
double dv_rate_J(const FastGenerator& G, const Eigen::VectorXd& mu);

// sup over the probability simplex of <V, mu> - J(mu); 2 or 3 states only.
double dv_sup(const FastGenerator& G, const Eigen::VectorXd& V_vec, int scan_n);

/// Reversible route: top eigenvalue of the pi-symmetrized Q + diag(V).
double rayleigh_ritz(const FastGenerator& G, const Eigen::VectorXd& pi,
                     const Eigen::VectorXd& V_vec);

// T^{-1} ln E[e^{int_0^T V(Y_s) ds}] by simulation of the frozen-(x,p)
// perturbed fast process; log-sum-exp aggregation, per-path substreams.
FkResult feynman_kac_estimate(const ModelSpec& m, double x, double p, double T,
                              double dt, int n_paths, std::uint64_t seed,
                              int workers = 0);

ContinuityReport continuity_scan(const HamiltonianHandle& h, double x_lo,
                                 double x_hi, double p_lo, double p_hi,
                                 double mesh);

double convexity_check(const HamiltonianHandle& h, double x,
                       const std::vector<double>& p_grid);

// MatrixEigen backend over a discretized (or exact chain) fast generator.
// When rho == 0 the generator is p-independent and is cached per x.
HamiltonianHandle make_matrix_eigen_handle(const ModelSpec& m,
                                           const GridSpec& grid, double p_lo,
                                           double p_hi, bool x_independent);

}  // namespace ldt
