#include "ldt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "ldt/hjb.hpp"
#include "ldt/mc.hpp"
#include "ldt/output.hpp"
#include "ldt/rate.hpp"
#include "ldt/scenarios.hpp"

namespace ldt {
namespace {

const std::vector<std::string> kCheckNames = {
    "gene-oracle-chain", "printed-formula", "bns-eigenvalue", "feynman-kac",
    "legendre-duality",  "hjb-hopf-lax",    "u-eps-ladder",   "tail-slope",
    "dual-estimate",     "structural"};

struct Ctx {
  const VerifyOptions& opt;
  Table evidence;

  double tol(double t) const { return t * opt.tol_scale; }
  void emit(const std::string& stem) {
    if (opt.out_dir.empty()) return;
    write_csv(evidence, opt.out_dir + "/" + stem + ".csv");
  }
};

std::string fmt(double v) { return format_double(v); }

// ---- check 1: eigenvalue = Rayleigh-Ritz = Donsker-Varadhan sup ----------

const double kXs[] = {0.5, 1.0, 2.0, 5.0};
const double kPs[] = {-1.0, -0.5, 0.25, 0.5, 1.0};

CheckResult check_gene_oracle_chain(Ctx& c) {
  CheckResult r{1, "gene-oracle-chain"};
  GeneParams g;
  ModelSpec m = gene_model(g);
  c.evidence.columns = {"x", "p", "eigen", "rayleigh_ritz", "dv_sup"};

  double max_rr = 0.0, max_dv = 0.0, pinned = 0.0;
  for (double x : kXs) {
    FastGenerator G = build_chain_generator(m.chain_rates, {0.0, 1.0}, x);
    Eigen::VectorXd pi = stationary_distribution(G);
    for (double p : kPs) {
      Eigen::Vector2d V(eval_V(m, x, 0.0, p), eval_V(m, x, 1.0, p));
      double ev = principal_eigenvalue(G, V).lambda;
      double rr = rayleigh_ritz(G, pi, V);
      double dv = dv_sup(G, V, 101);
      max_rr = std::max(max_rr, std::abs(ev - rr));
      max_dv = std::max(max_dv, std::abs(ev - dv));
      if (x == 1.0 && p == 1.0) pinned = ev;
      c.evidence.rows.push_back({x, p, ev, rr, dv});
    }
  }
  const double pin_ref = 1.0430806348152437;  // 2x2 closed form
  double pin_err = std::abs(pinned - pin_ref);
  r.passed = max_rr <= c.tol(1e-10) && max_dv <= c.tol(1e-6) &&
             pin_err <= c.tol(1e-6);
  r.detail = "max|eigen-RR|=" + fmt(max_rr) + " (tol 1e-10), max|eigen-DV|=" +
             fmt(max_dv) + " (tol 1e-6), pin err=" + fmt(pin_err);
  c.emit("check1_gene_oracle_chain");
  return r;
}

// ---- check 2: the formula as printed, and its un-halved eigenvalue -------

CheckResult check_printed_formula(Ctx& c) {
  CheckResult r{2, "printed-formula"};
  GeneParams g;
  ModelSpec m = gene_model(g);
  c.evidence.columns = {"x", "p", "printed", "eig_unhalved", "consistent"};

  double pin = gene_hamiltonian_printed(1.0, 1.0, g);
  double pin_ref = std::sqrt(2.0) + 0.5 * (std::exp(1.0) + std::exp(-1.0) - 2.0);
  double pin_err = std::abs(pin - pin_ref);

  double max_diff = 0.0, max_gap = 0.0;  // gap: printed vs consistent
  for (double x : kXs) {
    FastGenerator G = build_chain_generator(m.chain_rates, {0.0, 1.0}, x);
    for (double p : kPs) {
      // potential with the diffusion term sigma^2 p^2, no 1/2 factor
      auto Vun = [&](double y) {
        return (g.kappa2 * y - g.kappa3 * x) * p +
               (g.kappa2 * y + g.kappa3 * x) * p * p +
               0.5 * (std::exp(p) + std::exp(-p) - 2.0);
      };
      Eigen::Vector2d V(Vun(0.0), Vun(1.0));
      double ev = principal_eigenvalue(G, V).lambda;
      double printed = gene_hamiltonian_printed(x, p, g);
      double consistent = gene_hamiltonian_consistent(x, p, g);
      max_diff = std::max(max_diff, std::abs(printed - ev));
      max_gap = std::max(max_gap, std::abs(printed - consistent));
      c.evidence.rows.push_back({x, p, printed, ev, consistent});
    }
  }
  r.passed = pin_err <= c.tol(1e-9) && max_diff <= c.tol(1e-9);
  r.detail = "pin err=" + fmt(pin_err) + " (tol 1e-9), max|printed-eig|=" +
             fmt(max_diff) +
             " (tol 1e-9); diffusion-factor discrepancy vs the half-sigma^2 "
             "eigenvalue: max " + fmt(max_gap) +
             " (documented, the variants differ by design)";
  c.emit("check2_printed_formula");
  return r;
}

// ---- check 3: BNS closed form vs discretized generator eigenvalue --------

CheckResult check_bns_eigenvalue(Ctx& c) {
  CheckResult r{3, "bns-eigenvalue"};
  BnsParams bp;  // a = b = 1
  ModelSpec m = bns_model(bp);
  const double ps[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  c.evidence.columns = {"n", "p", "closed_form", "eigenvalue", "rel_err"};

  double max_err[2] = {0.0, 0.0};
  int gi = 0;
  for (int n : {1200, 2400}) {
    GridSpec gs{0.0, 40.0, n};
    FastGenerator G = discretize_generator(m, 0.0, 0.0, gs);  // p-free (rho=0)
    for (double p : ps) {
      Eigen::VectorXd V(G.size());
      for (int i = 0; i < G.size(); ++i) V(i) = 0.5 * G.states(i) * p * p;
      double ev = principal_eigenvalue(G, V).lambda;
      double ref = bns_hamiltonian(p, bp.a, bp.b);
      double rel = std::abs(ev - ref) / std::abs(ref);
      max_err[gi] = std::max(max_err[gi], rel);
      c.evidence.rows.push_back({double(n), p, ref, ev, rel});
    }
    ++gi;
  }
  r.passed = max_err[0] <= c.tol(2e-2) && max_err[1] < max_err[0];
  r.detail = "max rel err n=1200: " + fmt(max_err[0]) +
             " (tol 2e-2); n=2400: " + fmt(max_err[1]) +
             " (must decrease)";
  c.emit("check3_bns_eigenvalue");
  return r;
}

// ---- check 4: Feynman-Kac long-time estimate --------------------------------

CheckResult check_feynman_kac(Ctx& c) {
  CheckResult r{4, "feynman-kac"};
  BnsParams bp;
  ModelSpec m = bns_model(bp);
  const double T = 100.0, dt = 1e-3, p = 1.0;
  const int n_paths = 20000;
  FkResult fk = feynman_kac_estimate(m, 0.0, p, T, dt, n_paths, c.opt.seed,
                                     c.opt.workers);
  double ref = std::log(2.0);
  double err = std::abs(fk.lambda_hat - ref);
  double tol = std::max(0.10 * ref, 3.0 * fk.stderr_hat) * c.opt.tol_scale;
  r.passed = err <= tol;
  r.detail = "lambda_hat=" + fmt(fk.lambda_hat) + " vs ln2=" + fmt(ref) +
             ", |err|=" + fmt(err) + " tol=" + fmt(tol) + " (stderr " +
             fmt(fk.stderr_hat) + ")";
  c.evidence.columns = {"T", "dt", "n_paths", "lambda_hat", "stderr", "ref"};
  c.evidence.rows.push_back(
      {T, dt, double(n_paths), fk.lambda_hat, fk.stderr_hat, ref});
  c.emit("check4_feynman_kac");
  return r;
}

// ---- check 5: Legendre duality ------------------------------------------

CheckResult check_legendre_duality(Ctx& c) {
  CheckResult r{5, "legendre-duality"};
  const double a = 1.0, b = 1.0;
  HamiltonianHandle h = bns_handle(a, b);
  auto H = [&](double p) { return hamiltonian_eval(h, 0.0, p); };
  c.evidence.columns = {"q", "closed_form", "numeric", "abs_err"};

  double max_err = 0.0;
  for (double q : {-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0}) {
    double num = legendre(H, h.p_lo, h.p_hi, q);
    double ref = bns_rate(q, a, b);
    max_err = std::max(max_err, std::abs(num - ref));
    c.evidence.rows.push_back({q, ref, num, std::abs(num - ref)});
  }
  bool zero_exact = legendre(H, h.p_lo, h.p_hi, 0.0) == 0.0;

  // Fenchel inequality on a 100 x 100 grid
  double min_slack = kInf;
  const double pe = 0.999 * std::sqrt(2.0 * b);
  for (int i = 0; i < 100; ++i) {
    double p = -pe + 2.0 * pe * i / 99.0;
    double Hp = H(p);
    for (int j = 0; j < 100; ++j) {
      double q = -3.0 + 6.0 * j / 99.0;
      min_slack = std::min(min_slack, Hp + bns_rate(q, a, b) - p * q);
    }
  }
  r.passed = max_err <= c.tol(1e-6) && zero_exact && min_slack >= -c.tol(1e-8);
  r.detail = "max|numeric-closed|=" + fmt(max_err) +
             " (tol 1e-6), Lbar(0)=0 exact: " + (zero_exact ? "yes" : "no") +
             ", Fenchel min slack=" + fmt(min_slack) + " (>= -1e-8)";
  c.emit("check5_legendre_duality");
  return r;
}

// ---- check 6: HJB march vs Hopf-Lax --------------------------------------

struct HjbRun {
  double linf = 0.0;
  long clamps = 0;
};

HjbRun bns_hjb_vs_hopf_lax(double dx_target, double t) {
  const double a = 1.0, b = 1.0;
  HamiltonianHandle h = bns_handle(a, b);
  GridFunction h0;
  h0.xmin = -4.0;
  h0.xmax = 4.0;
  h0.n = static_cast<int>(std::lround(8.0 / dx_target)) + 1;
  h0.values.resize(h0.n);
  for (int i = 0; i < h0.n; ++i)
    h0.values[i] = std::exp(-h0.x(i) * h0.x(i));

  SchemeConfig sc;
  // e^{-x^2} has max slope sqrt(2/e); cap it with headroom, inside sqrt(2b)
  sc.slope_cap = std::min(1.05 * std::sqrt(2.0 / std::exp(1.0)),
                          0.95 * std::sqrt(2.0 * b));
  sc.alpha = 1.2 * estimate_alpha(h, h0.xmin, h0.xmax, sc.slope_cap);
  sc.dt = 0.45 * h0.dx() / sc.alpha;
  SolveStats st;
  GridFunction u = solve_cauchy(h, h0, t, sc, &st);

  auto Lbar = [&](double q) { return bns_rate(q, a, b); };
  GridFunction ref = hopf_lax(h0, Lbar, t);

  HjbRun out;
  out.clamps = st.clamp_events;
  for (int i = 0; i < h0.n; ++i)
    out.linf = std::max(out.linf, std::abs(u.values[i] - ref.values[i]));
  return out;
}

CheckResult check_hjb_hopf_lax(Ctx& c) {
  CheckResult r{6, "hjb-hopf-lax"};
  HjbRun coarse = bns_hjb_vs_hopf_lax(0.01, 0.5);
  HjbRun fine = bns_hjb_vs_hopf_lax(0.005, 0.5);
  r.passed = coarse.linf <= c.tol(2e-2) && fine.linf < coarse.linf &&
             coarse.clamps == 0 && fine.clamps == 0;
  r.detail = "Linf dx=0.01: " + fmt(coarse.linf) + " (tol 2e-2); dx=0.005: " +
             fmt(fine.linf) + " (must decrease); clamps " +
             std::to_string(coarse.clamps) + "/" + std::to_string(fine.clamps);
  c.evidence.columns = {"dx", "linf", "clamp_events"};
  c.evidence.rows.push_back({0.01, coarse.linf, double(coarse.clamps)});
  c.evidence.rows.push_back({0.005, fine.linf, double(fine.clamps)});
  c.emit("check6_hjb_hopf_lax");
  return r;
}

// ---- check 7: pre-limit convergence of u_eps ------------------------------

CheckResult check_u_eps_ladder(Ctx& c) {
  CheckResult r{7, "u-eps-ladder"};
  BnsParams bp;
  bp.y0 = 1.0;  // the stationary mean a/b
  auto hfun = [](double x) { return std::exp(-x * x); };
  const double t = 1.0;
  const int n_paths = 100000;

  // limiting value at x0 from the HJB march
  HamiltonianHandle H = bns_handle(bp.a, bp.b);
  GridFunction h0;
  h0.xmin = -4.0;
  h0.xmax = 4.0;
  h0.n = 801;
  h0.values.resize(h0.n);
  for (int i = 0; i < h0.n; ++i) h0.values[i] = hfun(h0.x(i));
  SchemeConfig sc;
  sc.slope_cap = std::min(1.05 * std::sqrt(2.0 / std::exp(1.0)),
                          0.95 * std::sqrt(2.0));
  sc.alpha = 1.2 * estimate_alpha(H, h0.xmin, h0.xmax, sc.slope_cap);
  sc.dt = 0.45 * h0.dx() / sc.alpha;
  GridFunction u0 = solve_cauchy(H, h0, t, sc);
  double u0_x0 = u0.values[(h0.n - 1) / 2];  // x0 = 0 is the center node

  c.evidence.columns = {"epsilon", "y0", "u_hat", "stderr", "gap", "u0"};
  std::vector<double> gaps, errs;
  double u_base = 0.0, se_base = 0.0;
  for (double eps : {0.4, 0.2, 0.1}) {
    SimConfig cfg;
    cfg.epsilon = eps;
    cfg.t_end = t;
    cfg.dt = eps / 20.0;
    cfg.n_paths = n_paths;
    cfg.seed = c.opt.seed;
    cfg.workers = c.opt.workers;
    TerminalSample s = simulate_bns(bp, eps, cfg);
    UEstimate ue = estimate_u_eps(s, hfun, eps);
    gaps.push_back(std::abs(ue.u_hat - u0_x0));
    errs.push_back(ue.stderr_hat);
    if (eps == 0.1) {
      u_base = ue.u_hat;
      se_base = ue.stderr_hat;
    }
    c.evidence.rows.push_back(
        {eps, bp.y0, ue.u_hat, ue.stderr_hat, gaps.back(), u0_x0});
  }
  bool monotone = true;
  for (size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] > gaps[i - 1] + 2.0 * (errs[i] + errs[i - 1]) * c.opt.tol_scale)
      monotone = false;
  bool final_ok = gaps.back() <= c.tol(0.1);

  // y-insensitivity probe at eps = 0.1
  double u_alt[2], se_alt[2];
  int k = 0;
  for (double y0 : {0.0, 2.0}) {
    BnsParams alt = bp;
    alt.y0 = y0;
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.t_end = t;
    cfg.dt = 0.1 / 20.0;
    cfg.n_paths = n_paths;
    cfg.seed = c.opt.seed;
    cfg.workers = c.opt.workers;
    TerminalSample s = simulate_bns(alt, 0.1, cfg);
    UEstimate ue = estimate_u_eps(s, hfun, 0.1);
    u_alt[k] = ue.u_hat;
    se_alt[k] = ue.stderr_hat;
    c.evidence.rows.push_back(
        {0.1, y0, ue.u_hat, ue.stderr_hat, std::abs(ue.u_hat - u0_x0), u0_x0});
    ++k;
  }
  double dy = std::abs(u_alt[1] - u_alt[0]);
  double dy_tol =
      3.0 * std::max({se_base, se_alt[0], se_alt[1]}) * c.opt.tol_scale;
  bool y_insensitive = dy <= dy_tol;

  r.passed = monotone && final_ok && y_insensitive;
  std::ostringstream d;
  d << "gaps";
  for (double gp : gaps) d << " " << fmt(gp);
  d << " (monotone within 2*stderr: " << (monotone ? "yes" : "no")
    << ", final <= 0.1: " << (final_ok ? "yes" : "no")
    << "); |u(y0=2)-u(y0=0)|=" << fmt(dy) << " vs 3*stderr=" << fmt(dy_tol)
    << " (" << (y_insensitive ? "pass" : "fail")
    << "; the y0 shift enters at order eps^2 and exceeds Monte Carlo noise "
       "at these settings)";
  r.detail = d.str();
  (void)u_base;
  c.emit("check7_u_eps_ladder");
  return r;
}

// ---- check 8: tail probability slope vs the rate function ----------------

CheckResult check_tail_slope(Ctx& c) {
  CheckResult r{8, "tail-slope"};
  BnsParams bp;
  bp.a = 1.0;
  bp.b = 6.0;  // keeps the target rate inside [0.5, 1.5]
  bp.y0 = bp.a / bp.b;
  const double t = 1.0, threshold = 0.5;
  const int n_paths = 500000;

  HamiltonianHandle H = bns_handle(bp.a, bp.b);
  double I_ref = rate_xfree(H, 0.0, t, threshold);

  c.evidence.columns = {"epsilon", "log_prob_scaled", "n_hits"};
  std::vector<double> inv_eps, ln_p;
  long min_hits = std::numeric_limits<long>::max();
  for (double eps : {0.4, 0.2, 0.1}) {
    SimConfig cfg;
    cfg.epsilon = eps;
    cfg.t_end = t;
    cfg.dt = eps / 20.0;
    cfg.n_paths = n_paths;
    cfg.seed = c.opt.seed;
    cfg.workers = c.opt.workers;
    TerminalSample s = simulate_bns(bp, eps, cfg);
    TailEstimate te = estimate_tail(s, threshold, eps);
    min_hits = std::min(min_hits, te.n_hits);
    if (te.n_hits > 0) {
      inv_eps.push_back(1.0 / eps);
      ln_p.push_back(te.log_prob_scaled / eps);
    }
    c.evidence.rows.push_back({eps, te.log_prob_scaled, double(te.n_hits)});
  }
  double slope = 0.0;
  if (inv_eps.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < inv_eps.size(); ++i) {
      mx += inv_eps[i];
      my += ln_p[i];
    }
    mx /= inv_eps.size();
    my /= ln_p.size();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < inv_eps.size(); ++i) {
      num += (inv_eps[i] - mx) * (ln_p[i] - my);
      den += (inv_eps[i] - mx) * (inv_eps[i] - mx);
    }
    slope = num / den;
  }
  double ratio = slope / (-I_ref);
  bool slope_ok = std::abs(ratio - 1.0) <= c.tol(0.20);
  bool hits_ok = min_hits >= 30;
  bool target_ok = I_ref >= 0.5 && I_ref <= 1.5;
  r.passed = slope_ok && hits_ok && target_ok && inv_eps.size() == 3;
  r.detail = "slope=" + fmt(slope) + " vs -I=" + fmt(-I_ref) + " (ratio " +
             fmt(ratio) + ", tol +-20%), min hits=" + std::to_string(min_hits) +
             " (>=30), I in [0.5,1.5]: " + (target_ok ? "yes" : "no");
  c.emit("check8_tail_slope");
  return r;
}

// ---- check 9: dual (test-function) estimate vs the x-free rate -----------

CheckResult check_dual_estimate(Ctx& c) {
  CheckResult r{9, "dual-estimate"};
  HamiltonianHandle H = bns_handle(1.0, 1.0);
  const double t = 1.0, x0 = 0.0;
  c.evidence.columns = {"x", "dual", "xfree", "diff"};
  bool ok = true;
  std::ostringstream d;
  for (double dxx : {0.25, 0.5}) {
    double x = x0 + dxx;
    DualEstimateConfig cfg;
    cfg.family_size = 200;
    double dual = rate_dual_estimate(H, x, x0, t, cfg);
    double ref = rate_xfree(H, x0, t, x);
    double diff = dual - ref;
    ok = ok && std::abs(diff) <= c.tol(5e-2) && diff <= c.tol(1e-6);
    d << " x=" << fmt(x) << ": dual=" << fmt(dual) << " xfree=" << fmt(ref);
    c.evidence.rows.push_back({x, dual, ref, diff});
  }
  r.passed = ok;
  r.detail = "family 200, tol 5e-2, never above xfree + 1e-6;" + d.str();
  c.emit("check9_dual_estimate");
  return r;
}

// ---- check 10: structural property suite ----------------------------------

CheckResult check_structural(Ctx& c) {
  CheckResult r{10, "structural"};
  std::ostringstream d;
  bool ok = true;
  auto require = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      d << " FAIL[" << what << "]";
    }
  };
  GeneParams g;
  BnsParams bp;
  ModelSpec gm = gene_model(g);
  ModelSpec bm = bns_model(bp);

  // H(x, 0) = 0 on every backend
  HamiltonianHandle handles[] = {
      bns_handle(1.0, 1.0), gene_handle(g), gene_handle_printed(g),
      make_matrix_eigen_handle(bm, GridSpec{0.0, 30.0, 300}, -std::sqrt(2.0),
                               std::sqrt(2.0), true)};
  double max_h0 = 0.0;
  for (auto& h : handles)
    for (double x : {0.5, 1.0, 2.0})
      max_h0 = std::max(max_h0, std::abs(hamiltonian_eval(h, x, 0.0)));
  require(max_h0 <= c.tol(1e-12), "H(x,0)=0, max " + fmt(max_h0));

  // convexity in p on both scenarios
  std::vector<double> pg;
  for (int i = 0; i <= 60; ++i) pg.push_back(-1.3 + 2.6 * i / 60.0);
  double cx_bns = convexity_check(handles[0], 0.0, pg);
  std::vector<double> pg2;
  for (int i = 0; i <= 60; ++i) pg2.push_back(-2.0 + 4.0 * i / 60.0);
  double cx_gene = convexity_check(handles[1], 1.0, pg2);
  require(cx_bns >= -c.tol(1e-8) && cx_gene >= -c.tol(1e-8),
          "convexity, min 2nd diff " + fmt(std::min(cx_bns, cx_gene)));

  // continuity moduli on the compact box
  ContinuityReport cont = continuity_scan(handles[1], 0.5, 2.0, -1.0, 1.0, 0.05);
  require(std::isfinite(cont.x_modulus) && std::isfinite(cont.p_modulus),
          "continuity scan");

  // scheme monotonicity and comparison ordering
  {
    GridFunction h0;
    h0.xmin = -2.0;
    h0.xmax = 2.0;
    h0.n = 101;
    h0.values.resize(h0.n);
    for (int i = 0; i < h0.n; ++i) h0.values[i] = std::exp(-h0.x(i) * h0.x(i));
    SchemeConfig sc;
    sc.slope_cap = 0.9;
    sc.alpha = 1.2 * estimate_alpha(handles[0], -2.0, 2.0, sc.slope_cap);
    sc.dt = 0.45 * h0.dx() / sc.alpha;
    GridFunction base = solve_cauchy(handles[0], h0, 0.2, sc);
    GridFunction bumped = h0;
    bumped.values[50] += 0.05;  // raise one node
    GridFunction upper = solve_cauchy(handles[0], bumped, 0.2, sc);
    double worst = 0.0;
    for (int i = 0; i < h0.n; ++i)
      worst = std::min(worst, upper.values[i] - base.values[i]);
    require(worst >= -c.tol(1e-12), "scheme monotonicity, min delta " + fmt(worst));
    GridFunction g0 = h0;
    for (auto& v : g0.values) v += 0.1;  // h0 <= g0 everywhere
    GridFunction ug = solve_cauchy(handles[0], g0, 0.2, sc);
    double worst2 = 0.0;
    for (int i = 0; i < h0.n; ++i)
      worst2 = std::min(worst2, ug.values[i] - base.values[i]);
    require(worst2 >= -c.tol(1e-12), "comparison ordering");
  }

  // generator hygiene: row sums and stationary residuals
  {
    FastGenerator G = discretize_generator(bm, 0.0, 0.0, GridSpec{0.0, 30.0, 400});
    G.validate();
    Eigen::VectorXd pi = stationary_distribution(G);  // enforces residual 1e-10
    double res = (pi.transpose() * G.Q).cwiseAbs().maxCoeff();
    require(res <= c.tol(1e-10), "stationary residual " + fmt(res));
    FastGenerator Gc = build_chain_generator(gm.chain_rates, {0.0, 1.0}, 1.0);
    Gc.validate();
    stationary_distribution(Gc);
  }

  // PDMP pinned value
  double pdmp = gene_pdmp_hamiltonian(1.0, 1.0, g);
  double pdmp_ref = -0.3819660112501051;  // -1 + 1/2 + sqrt(5)/2 - 1
  require(std::abs(pdmp - pdmp_ref) <= c.tol(1e-8),
          "pdmp pin, err " + fmt(std::abs(pdmp - pdmp_ref)));

  // reproducibility: 1 worker vs 4 workers, byte-identical terminals
  {
    SimConfig cfg;
    cfg.epsilon = 0.2;
    cfg.t_end = 0.5;
    cfg.dt = 0.02;
    cfg.n_paths = 2000;
    cfg.seed = c.opt.seed;
    cfg.workers = 1;
    TerminalSample s1 = simulate_bns(bp, 0.2, cfg);
    cfg.workers = 4;
    TerminalSample s4 = simulate_bns(bp, 0.2, cfg);
    bool same =
        std::memcmp(s1.x_T.data(), s4.x_T.data(),
                    s1.x_T.size() * sizeof(double)) == 0 &&
        std::memcmp(s1.y_T.data(), s4.y_T.data(),
                    s1.y_T.size() * sizeof(double)) == 0;
    require(same && c.opt.tol_scale > 0.0, "worker-count reproducibility");
  }

  r.passed = ok;
  r.detail = ok ? "all structural properties hold" : ("failures:" + d.str());
  c.evidence.columns = {"passed"};
  c.evidence.rows.push_back({ok ? 1.0 : 0.0});
  c.emit("check10_structural");
  return r;
}

}  // namespace

const std::vector<std::string>& acceptance_check_names() { return kCheckNames; }

std::vector<CheckResult> run_acceptance(const VerifyOptions& opt) {
  using Fn = CheckResult (*)(Ctx&);
  const Fn fns[] = {check_gene_oracle_chain, check_printed_formula,
                    check_bns_eigenvalue,    check_feynman_kac,
                    check_legendre_duality,  check_hjb_hopf_lax,
                    check_u_eps_ladder,      check_tail_slope,
                    check_dual_estimate,     check_structural};
  std::vector<CheckResult> results;
  for (size_t i = 0; i < kCheckNames.size(); ++i) {
    if (!opt.only.empty() &&
        std::find(opt.only.begin(), opt.only.end(), kCheckNames[i]) ==
            opt.only.end())
      continue;
    Ctx ctx{opt, {}};
    ctx.evidence.meta = {"check=" + kCheckNames[i],
                         "seed=" + std::to_string(opt.seed)};
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r = fns[i](ctx);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ldt
