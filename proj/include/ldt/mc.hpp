#pragma once

#include <cstdint>
#include <vector>

#include "ldt/fastgen.hpp"
#include "ldt/model.hpp"

namespace ldt {

struct BnsParams;
struct GeneParams;

struct SimConfig {
  double epsilon = 0.1;
  double t_end = 1.0;
  double dt = 0.01;
  int n_paths = 1000;
  std::uint64_t seed = 1;
  int substeps = 1;  // fast-scale refinement factor inside each dt
  int workers = 0;   // 0: hardware concurrency

  void validate() const;  // positivity and dt <= epsilon / 10
};

struct TerminalSample {
  std::vector<double> x_T;
  std::vector<double> y_T;
  long clamp_events = 0;     // diffusion coefficient clipped at zero
  long overflow_events = 0;  // guards triggered (jump suppression etc.)
};

struct UEstimate {
  double u_hat = 0.0;
  double stderr_hat = 0.0;
};

struct TailEstimate {
  double log_prob_scaled = 0.0;  // epsilon * ln P(x_T >= threshold)
  long n_hits = 0;
};

TerminalSample simulate_general(const ModelSpec& m, const SimConfig& cfg);
TerminalSample simulate_bns(const BnsParams& params, double epsilon,
                            const SimConfig& cfg);
TerminalSample simulate_gene(const GeneParams& params, double epsilon,
                             const SimConfig& cfg);

UEstimate estimate_u_eps(const TerminalSample& s,
                         const std::function<double(double)>& h,
                         double epsilon);

TailEstimate estimate_tail(const TerminalSample& s, double threshold,
                           double epsilon);

// sup over the (x, y) box of the upper bound on H_eps f_eps with
// f(x) = ln(1 + x^2), f_eps = f + eps * zeta; finiteness is the pass signal.
std::vector<double> tightness_diagnostic(const ModelSpec& m,
                                         const LyapunovSpec& zeta,
                                         const std::vector<double>& epsilons,
                                         const Box& box, int nx = 41,
                                         int ny = 41);

}  // namespace ldt
