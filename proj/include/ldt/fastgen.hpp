#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "ldt/model.hpp"

namespace ldt {

// Finite rate-matrix representation of the (perturbed) fast generator:
// exact for finite-state chains, upwind/centered grid discretization for
// 1-D fast jump-diffusions. Off-diagonals >= 0, rows sum to zero.
struct FastGenerator {
  enum class Kind { ExactChain, GridDiscretization };

  Eigen::VectorXd states;  // strictly increasing chain states / grid nodes
  Eigen::MatrixXd Q;
  Kind kind = Kind::ExactChain;

  // grid metadata (GridDiscretization only)
  double ymin = 0.0, ymax = 0.0, spacing = 0.0, jump_truncation = 0.0;
  bool drift_resolved = true;  // false: grid too coarse for a drift sign change

  int size() const { return static_cast<int>(states.size()); }
  void validate(double tol_scale = 1e-12) const;
};

struct LyapunovSpec {
  std::function<double(double)> zeta;  // positive, C2 per scenario
  std::string description;
};

struct GridSpec {
  double ymin = 0.0, ymax = 1.0;
  int n = 3;
};

struct ReversibilityReport {
  bool is_reversible = false;
  double max_violation = 0.0;
};

struct LyapunovReport {
  std::vector<int> sublevel_states;  // indices with g(y) <= level
  bool bounded = false;  // sublevel set strictly inside the state range
  Eigen::VectorXd g;     // the tested function at each state
};

FastGenerator build_chain_generator(const ChainRates& rates,
                                    const std::vector<double>& states, double x);

// Upwind drift + centered diffusion + binned jump kernel on a uniform grid.
// Mass leaving [ymin, ymax] lands on the boundary node; jumps smaller than
// trunc are folded into the drift through their compensator. trunc <= 0
// selects the default spacing/2.
FastGenerator discretize_generator(const ModelSpec& m, double x, double p,
                                   const GridSpec& grid, double trunc = 0.0);

// pi Q = 0, pi >= 0, sum pi = 1; dense solve, residual <= 1e-10 enforced.
Eigen::VectorXd stationary_distribution(const FastGenerator& G);

ReversibilityReport check_reversibility(const FastGenerator& G,
                                        const Eigen::VectorXd& pi);

// g(y) = -theta e^{-zeta} (Q e^{zeta})(y) - (|V| + |b0 p| + sigma^2)(y);
// reports where g <= level and whether that set stays off the boundary.
LyapunovReport check_lyapunov(const FastGenerator& G, const LyapunovSpec& zeta,
                              double theta, const Eigen::VectorXd& V_vec,
                              const Eigen::VectorXd& b0p_vec,
                              const Eigen::VectorXd& sigma2_vec, double level);

}  // namespace ldt
