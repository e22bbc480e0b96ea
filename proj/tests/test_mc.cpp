#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numeric>

#include "ldt/mc.hpp"
#include "ldt/scenarios.hpp"

using namespace ldt;

namespace {

ModelSpec deterministic_drift(double b) {
  ModelSpec m;
  m.coeffs.b = [b](double, double) { return b; };
  m.coeffs.sigma = [](double, double) { return 0.0; };
  m.x0 = 0.5;
  m.y0 = 0.0;
  m.fast_domain = RealLine{};
  return m;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.epsilon = 0.1;
  cfg.dt = 0.02;  // violates dt <= epsilon / 10
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.dt = 0.01;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_paths = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("frozen dynamics and pure drift") {
  SimConfig cfg;
  cfg.epsilon = 0.1;
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  cfg.n_paths = 64;
  TerminalSample s0 = simulate_general(deterministic_drift(0.0), cfg);
  for (double x : s0.x_T) CHECK(x == 0.5);
  TerminalSample s1 = simulate_general(deterministic_drift(1.0), cfg);
  for (double x : s1.x_T) CHECK(x == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("estimator identities") {
  TerminalSample s;
  s.x_T = {0.0, 1.0, 2.0, 3.0};
  double eps = 0.25;

  // constant payoff comes back exactly, zero spread
  UEstimate c = estimate_u_eps(s, [](double) { return 0.7; }, eps);
  CHECK(c.u_hat == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(c.stderr_hat == doctest::Approx(0.0));

  // the scaled log-mean-exp dominates the plain mean (Jensen)
  auto h = [](double x) { return -x * x; };
  UEstimate u = estimate_u_eps(s, h, eps);
  double plain = 0.0;
  for (double x : s.x_T) plain += h(x) / double(s.x_T.size());
  CHECK(u.u_hat >= plain - 1e-12);

  // monotonicity in the payoff
  UEstimate lower = estimate_u_eps(s, [&](double x) { return h(x) - 0.3; }, eps);
  CHECK(lower.u_hat == doctest::Approx(u.u_hat - 0.3).epsilon(1e-9));

  TailEstimate all = estimate_tail(s, -1.0, eps);
  CHECK(all.n_hits == 4);
  CHECK(all.log_prob_scaled == doctest::Approx(0.0));
  TailEstimate none = estimate_tail(s, 10.0, eps);
  CHECK(none.n_hits == 0);
  CHECK(none.log_prob_scaled == -kInf);
}

TEST_CASE("volatility model: stationary mean of the fast factor") {
  BnsParams p;
  p.a = 1.0;
  p.b = 2.0;
  p.y0 = 0.5;  // = a/b, start at stationarity
  SimConfig cfg;
  cfg.epsilon = 0.05;
  cfg.t_end = 1.0;
  cfg.dt = 0.005;
  cfg.n_paths = 4000;
  cfg.seed = 11;
  TerminalSample s = simulate_bns(p, cfg.epsilon, cfg);
  double m = mean(s.y_T);
  double var = 0.0;
  for (double y : s.y_T) var += (y - m) * (y - m);
  var /= double(s.y_T.size() - 1);
  double se = std::sqrt(var / double(s.y_T.size()));
  // the update adds the full subordinator increment before damping, so the
  // scheme's own stationary mean carries a (dt/eps)/(1 - e^{-dt/eps}) factor
  double r = cfg.dt / cfg.epsilon;
  double scheme_mean = (p.a / p.b) * r / (1.0 - std::exp(-r));
  CHECK(std::abs(m - scheme_mean) <= 3.5 * se);
  for (double y : s.y_T) CHECK(y >= 0.0);
}

TEST_CASE("gene model: fixed point of the averaged drift") {
  GeneParams p;
  p.kappa1 = 1.0;
  p.kappa_m1 = 1.0;
  p.kappa2 = 2.0;
  p.kappa3 = 1.0;
  p.x0 = 1.0;  // = (1/2) kappa2 ybar / kappa3 with ybar = 1/2
  p.y0 = 1.0;
  SimConfig cfg;
  cfg.epsilon = 0.05;
  cfg.t_end = 1.0;
  cfg.dt = 0.005;
  cfg.n_paths = 2000;
  cfg.seed = 7;
  TerminalSample s = simulate_gene(p, cfg.epsilon, cfg);
  double m = mean(s.x_T);
  CHECK(std::abs(m - p.x0) <= 0.1);
  for (double x : s.x_T) CHECK(x >= -1e-12);
}

TEST_CASE("worker count never changes the draw") {
  BnsParams p;
  SimConfig a;
  a.epsilon = 0.1;
  a.t_end = 0.5;
  a.dt = 0.01;
  a.n_paths = 500;
  a.seed = 42;
  a.workers = 1;
  SimConfig b = a;
  b.workers = 4;
  TerminalSample sa = simulate_bns(p, a.epsilon, a);
  TerminalSample sb = simulate_bns(p, b.epsilon, b);
  REQUIRE(sa.x_T.size() == sb.x_T.size());
  CHECK(std::memcmp(sa.x_T.data(), sb.x_T.data(),
                    sa.x_T.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(sa.y_T.data(), sb.y_T.data(),
                    sa.y_T.size() * sizeof(double)) == 0);
}

TEST_CASE("tightness diagnostic") {
  // trivial model: every epsilon row must be exactly zero
  ModelSpec frozen = deterministic_drift(0.0);
  LyapunovSpec zero{[](double) { return 0.0; }, "zero"};
  Box box{-1.0, 1.0, -1.0, 1.0};
  auto rows = tightness_diagnostic(frozen, zero, {0.4, 0.2, 0.1}, box, 11, 11);
  REQUIRE(rows.size() == 3);
  for (double r : rows) CHECK(r == doctest::Approx(0.0));

  // volatility model with a linear confining function stays finite
  ModelSpec bns = bns_model(BnsParams{});
  LyapunovSpec lin{[](double y) { return 0.5 * y; }, "half y"};
  Box vb{-1.0, 1.0, 0.0, 5.0};
  auto vr = tightness_diagnostic(bns, lin, {0.2, 0.1}, vb, 9, 9);
  REQUIRE(vr.size() == 2);
  for (double r : vr) CHECK(std::isfinite(r));

  // gene chain with zeta identically zero is finite as well (x must stay
  // positive: the switching rates scale with x)
  ModelSpec gene = gene_model(GeneParams{1.0, 1.0, 2.0});
  Box gb{0.1, 2.0, 0.0, 1.0};
  auto gr = tightness_diagnostic(gene, zero, {0.1}, gb, 9, 9);
  REQUIRE(gr.size() == 1);
  CHECK(std::isfinite(gr[0]));
}
