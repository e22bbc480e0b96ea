#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldt/rate.hpp"
#include "ldt/scenarios.hpp"

using namespace ldt;

namespace {
double bnsH(double p) { return bns_hamiltonian(p, 1.0, 1.0); }
const double kEdge = std::sqrt(2.0);
}  // namespace

TEST_CASE("legendre transform of the volatility hamiltonian") {
  CHECK(legendre(bnsH, -kEdge, kEdge, 0.0) == 0.0);  // exact shortcut
  CHECK(legendre(bnsH, -kEdge, kEdge, 1.0) ==
        doctest::Approx(0.4201454493864414).epsilon(1e-7));
  // evenness
  CHECK(legendre(bnsH, -kEdge, kEdge, -1.0) ==
        doctest::Approx(legendre(bnsH, -kEdge, kEdge, 1.0)).epsilon(1e-7));
}

TEST_CASE("legendre output is convex in q") {
  double prev2 = legendre(bnsH, -kEdge, kEdge, -2.0);
  double prev1 = legendre(bnsH, -kEdge, kEdge, -1.9);
  for (double q = -1.8; q <= 2.0; q += 0.1) {
    double cur = legendre(bnsH, -kEdge, kEdge, q);
    CHECK(cur - 2.0 * prev1 + prev2 >= -1e-8);
    prev2 = prev1;
    prev1 = cur;
  }
}

TEST_CASE("double transform recovers the hamiltonian on the interior") {
  auto Lbar = [&](double q) { return legendre(bnsH, -kEdge, kEdge, q); };
  for (double p : {-1.0, -0.5, 0.25, 0.75}) {
    double back = legendre(Lbar, -6.0, 6.0, p);
    CHECK(back == doctest::Approx(bnsH(p)).epsilon(1e-5));
  }
}

TEST_CASE("fenchel inequality") {
  for (double p = -1.3; p <= 1.3; p += 0.13)
    for (double q = -2.0; q <= 2.0; q += 0.2) {
      double L = legendre(bnsH, -kEdge, kEdge, q);
      CHECK(p * q <= bnsH(p) + L + 1e-8);
    }
}

TEST_CASE("unbounded transform returns the infinity marker") {
  auto bounded = [](double p) {
    return std::isfinite(p) ? std::abs(p) : kInf;  // H with slope 1 caps
  };
  CHECK(legendre(bounded, -kInf, kInf, 2.0) == kInf);  // q beyond max slope
  CHECK(std::isfinite(legendre(bounded, -kInf, kInf, 0.5)));
}

TEST_CASE("x-free rate function") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  CHECK(rate_xfree(h, 0.0, 1.0, 0.0) == 0.0);
  double v = rate_xfree(h, 0.0, 1.0, -1.0);  // x0 - x = 1
  CHECK(v == doctest::Approx(0.4201454493864414).epsilon(1e-7));
  // positive homogeneity of (t, dx) -> t Lbar(dx / t)
  CHECK(rate_xfree(h, 0.0, 2.0, -2.0) == doctest::Approx(2.0 * v).epsilon(1e-7));
  CHECK_THROWS_AS(rate_xfree(h, 0.0, 0.0, 1.0), ArgumentError);

  HamiltonianHandle dep = h;
  dep.x_independent = false;
  CHECK_THROWS_AS(rate_xfree(dep, 0.0, 1.0, 1.0), ArgumentError);
}

TEST_CASE("dual estimate bounds the x-free rate from below") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  DualEstimateConfig cfg;
  cfg.family_size = 24;  // coarse family: still a valid lower bound
  cfg.window = 6.0;
  double ref = rate_xfree(h, 0.0, 1.0, 0.25);
  double dual = rate_dual_estimate(h, 0.25, 0.0, 1.0, cfg);
  CHECK(dual <= ref + 1e-6);
  CHECK(dual >= ref - 0.1);

  // x = x0: the constant test function attains exactly zero
  DualEstimateConfig tiny;
  tiny.family_size = 8;
  tiny.window = 4.0;
  tiny.dx = 0.05;
  double at0 = rate_dual_estimate(h, 0.0, 0.0, 1.0, tiny);
  CHECK(at0 >= 0.0);
  CHECK(at0 <= 0.02);
}

TEST_CASE("family refinement never decreases the dual estimate") {
  HamiltonianHandle h = bns_handle(1.0, 1.0);
  DualEstimateConfig a;
  a.family_size = 11;
  a.window = 6.0;
  DualEstimateConfig b = a;
  b.family_size = 21;  // superset of the slope grid
  double va = rate_dual_estimate(h, 0.5, 0.0, 1.0, a);
  double vb = rate_dual_estimate(h, 0.5, 0.0, 1.0, b);
  CHECK(vb >= va - 1e-9);
}
