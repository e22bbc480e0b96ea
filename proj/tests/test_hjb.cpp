#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldt/hjb.hpp"
#include "ldt/scenarios.hpp"

using namespace ldt;

namespace {

GridFunction bump(int n = 201, double span = 3.0) {
  GridFunction g;
  g.xmin = -span;
  g.xmax = span;
  g.n = n;
  g.values.resize(n);
  for (int i = 0; i < n; ++i) g.values[i] = std::exp(-g.x(i) * g.x(i));
  return g;
}

SchemeConfig bns_scheme(const HamiltonianHandle& h, const GridFunction& g) {
  SchemeConfig sc;
  sc.slope_cap = std::min(1.05 * std::sqrt(2.0 / std::exp(1.0)), 0.95 * h.p_hi);
  sc.alpha = 1.2 * estimate_alpha(h, g.xmin, g.xmax, sc.slope_cap);
  sc.dt = 0.45 * g.dx() / sc.alpha;
  return sc;
}

}  // namespace

TEST_CASE("zero hamiltonian: exact transport of the initial datum") {
  HamiltonianHandle h;
  h.eval = [](double, double) { return 0.0; };
  GridFunction g = bump();
  SchemeConfig sc{0.01, 0.0, 1.0, BoundaryRule::Extrapolate};
  GridFunction u = solve_cauchy(h, g, 0.5, sc);
  for (int i = 0; i < g.n; ++i)
    CHECK(u.values[i] == doctest::Approx(g.values[i]).epsilon(1e-12));
}

TEST_CASE("constants are fixed points (H(x,0)=0)") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  GridFunction g = bump();
  for (auto& v : g.values) v = 0.7;
  SchemeConfig sc = bns_scheme(h, g);
  GridFunction u = solve_cauchy(h, g, 0.4, sc);
  for (double v : u.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("CFL violation and clamp accounting") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  GridFunction g = bump();
  SchemeConfig bad{1.0, 10.0, 0.9, BoundaryRule::Extrapolate};
  CHECK_THROWS_AS(solve_cauchy(h, g, 0.1, bad), ArgumentError);

  // a cap below the datum's slope must trigger clamp events
  SchemeConfig tight = bns_scheme(h, g);
  tight.slope_cap = 0.3;
  tight.dt = 0.45 * g.dx() / tight.alpha;
  SolveStats st;
  solve_cauchy(h, g, 0.1, tight, &st);
  CHECK(st.clamp_events > 0);
}

TEST_CASE("monotonicity and comparison at scheme level") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  GridFunction g = bump();
  SchemeConfig sc = bns_scheme(h, g);
  GridFunction base = solve_cauchy(h, g, 0.3, sc);

  GridFunction up = g;
  up.values[77] += 0.03;
  GridFunction u2 = solve_cauchy(h, up, 0.3, sc);
  for (int i = 0; i < g.n; ++i) CHECK(u2.values[i] >= base.values[i] - 1e-12);

  GridFunction dominating = g;
  for (auto& v : dominating.values) v += 0.2;
  GridFunction u3 = solve_cauchy(h, dominating, 0.3, sc);
  for (int i = 0; i < g.n; ++i) CHECK(u3.values[i] >= base.values[i] - 1e-12);
}

TEST_CASE("lipschitz bound is preserved for x-independent H") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  GridFunction g = bump();
  SchemeConfig sc = bns_scheme(h, g);
  GridFunction u = solve_cauchy(h, g, 0.5, sc);
  double s0 = 0.0, s1 = 0.0;
  for (int i = 1; i < g.n; ++i) {
    s0 = std::max(s0, std::abs(g.values[i] - g.values[i - 1]) / g.dx());
    s1 = std::max(s1, std::abs(u.values[i] - u.values[i - 1]) / g.dx());
  }
  CHECK(s1 <= s0 + 1e-6);
}

TEST_CASE("hopf-lax basics") {
  GridFunction g = bump(401, 4.0);
  auto Lbar = [](double q) { return bns_rate(q, 1.0, 1.0); };

  GridFunction tiny = hopf_lax(g, Lbar, 1e-3);
  double gap = 0.0;
  for (int i = 0; i < g.n; ++i)
    gap = std::max(gap, std::abs(tiny.values[i] - g.values[i]));
  CHECK(gap <= 0.01);  // initial datum recovered as t -> 0+

  GridFunction flat = g;
  for (auto& v : flat.values) v = -0.2;
  GridFunction uf = hopf_lax(flat, Lbar, 0.7);
  for (double v : uf.values) CHECK(v == doctest::Approx(-0.2).epsilon(1e-12));

  CHECK_THROWS_AS(hopf_lax(g, Lbar, 0.0), ArgumentError);
}

TEST_CASE("march agrees with hopf-lax and refines") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  auto Lbar = [](double q) { return bns_rate(q, 1.0, 1.0); };
  double prev = kInf;
  for (int n : {201, 401}) {
    GridFunction g = bump(n, 4.0);
    SchemeConfig sc = bns_scheme(h, g);
    SolveStats st;
    GridFunction u = solve_cauchy(h, g, 0.5, sc, &st);
    GridFunction ref = hopf_lax(g, Lbar, 0.5);
    double linf = 0.0;
    for (int i = 0; i < n; ++i)
      linf = std::max(linf, std::abs(u.values[i] - ref.values[i]));
    CHECK(linf <= 0.1);
    CHECK(linf < prev);
    CHECK(st.clamp_events == 0);
    prev = linf;
  }
}
