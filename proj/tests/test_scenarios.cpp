#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldt/rate.hpp"
#include "ldt/scenarios.hpp"

using namespace ldt;

TEST_CASE("volatility hamiltonian: closed form and blow-up") {
  CHECK(bns_hamiltonian(0.0, 1.0, 1.0) == 0.0);
  CHECK(bns_hamiltonian(1.0, 1.0, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(bns_hamiltonian(1.4, 1.0, 1.0) ==
        doctest::Approx(std::log(1.0 + 1.96 / 0.04)).epsilon(1e-12));
  CHECK(bns_hamiltonian(1.5, 1.0, 1.0) == kInf);
  CHECK(bns_hamiltonian(-1.5, 1.0, 1.0) == kInf);
  // scaling in a
  CHECK(bns_hamiltonian(0.5, 3.0, 1.0) ==
        doctest::Approx(3.0 * bns_hamiltonian(0.5, 1.0, 1.0)).epsilon(1e-13));
}

TEST_CASE("volatility rate function: closed form matches its own transform") {
  CHECK(bns_rate(0.0, 1.0, 1.0) == 0.0);
  CHECK(bns_rate(1.0, 1.0, 1.0) ==
        doctest::Approx(0.4201454493864414).epsilon(1e-12));
  CHECK(bns_rate(-1.0, 1.0, 1.0) == bns_rate(1.0, 1.0, 1.0));
  for (double q : {0.25, 0.5, 2.0, 4.0}) {
    auto H = [](double p) { return bns_hamiltonian(p, 1.0, 1.0); };
    double num = legendre(H, -std::sqrt(2.0), std::sqrt(2.0), q);
    CHECK(bns_rate(q, 1.0, 1.0) == doctest::Approx(num).epsilon(1e-7));
  }
  // superlinear growth: finite everywhere, convex through the origin
  CHECK(bns_rate(10.0, 1.0, 1.0) > bns_rate(5.0, 1.0, 1.0));
  CHECK(0.5 * (bns_rate(0.5, 1.0, 1.0) + bns_rate(1.5, 1.0, 1.0)) >=
        bns_rate(1.0, 1.0, 1.0) - 1e-12);
}

TEST_CASE("out-of-the-money call asymptote") {
  BnsParams g;
  g.x0 = 0.0;
  g.K = std::exp(0.5);
  g.t = 1.0;
  CHECK(otm_call_asymptote(g) ==
        doctest::Approx(-bns_rate(0.5, 1.0, 1.0)).epsilon(1e-12));

  BnsParams half = g;
  half.t = 0.5;
  // shorter horizons decay faster for a fixed log-moneyness
  CHECK(otm_call_asymptote(half) < otm_call_asymptote(g));

  BnsParams itm = g;
  itm.K = 0.9;
  CHECK_THROWS_AS(otm_call_asymptote(itm), ArgumentError);
}

TEST_CASE("gene hamiltonians: frozen points") {
  GeneParams g;  // all rate constants 1

  CHECK(gene_hamiltonian_printed(1.0, 0.0, g) == doctest::Approx(0.0));
  CHECK(gene_hamiltonian_printed(1.0, 1.0, g) ==
        doctest::Approx(1.9572941971883386).epsilon(1e-12));
  CHECK(gene_hamiltonian_consistent(1.0, 1.0, g) ==
        doctest::Approx(1.0430806348152437).epsilon(1e-12));
  CHECK(gene_pdmp_hamiltonian(1.0, 1.0, g) ==
        doctest::Approx(-0.3819660112501051).epsilon(1e-10));

  // asymmetric switching: the shortcut root still matches the quadratic
  GeneParams asym = g;
  asym.kappa_m1 = 2.0;
  CHECK(std::isfinite(gene_hamiltonian_printed(1.0, 0.7, asym)));
  CHECK_THROWS_AS(gene_pdmp_hamiltonian(1.0, 0.7, asym), ArgumentError);
}

TEST_CASE("gene hamiltonians: printed dominates the consistent variant") {
  GeneParams g;
  g.kappa1 = 1.0;
  g.kappa_m1 = 1.0;
  g.kappa2 = 2.0;
  g.kappa3 = 1.0;
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(gene_hamiltonian_printed(x, 0.0, g) == doctest::Approx(0.0));
    CHECK(gene_hamiltonian_consistent(x, 0.0, g) == doctest::Approx(0.0));
    for (double p : {-1.0, -0.5, 0.5, 1.0}) {
      double printed = gene_hamiltonian_printed(x, p, g);
      double consistent = gene_hamiltonian_consistent(x, p, g);
      CHECK(printed >= consistent - 1e-12);
    }
  }
}

TEST_CASE("model builders and handles") {
  BnsParams bp;
  ModelSpec bm = bns_model(bp);
  CHECK_NOTHROW(bm.validate());
  CHECK(!bm.is_chain());
  CHECK(bm.coeffs.sigma(0.0, 4.0) == doctest::Approx(2.0));
  CHECK(bm.coeffs.sigma(0.0, -1.0) == 0.0);  // clipped below the floor

  GeneParams gp;
  gp.kappa2 = 2.0;
  ModelSpec gm = gene_model(gp);
  CHECK_NOTHROW(gm.validate());
  CHECK(gm.is_chain());
  CHECK(gm.chain_rates(0.5, 0, 1) == doctest::Approx(0.5 * gp.kappa1));
  CHECK(gm.chain_rates(0.5, 1, 0) == doctest::Approx(0.5 * gp.kappa_m1));

  HamiltonianHandle bh = bns_handle(1.0, 1.0);
  CHECK(bh.x_independent);
  CHECK(bh.p_hi == doctest::Approx(std::sqrt(2.0)));
  CHECK(bh.eval(0.3, 1.0) == doctest::Approx(bns_hamiltonian(1.0, 1.0, 1.0)));

  HamiltonianHandle gh = gene_handle(gp);
  CHECK(!gh.x_independent);
  CHECK(gh.eval(1.0, 1.0) ==
        doctest::Approx(gene_hamiltonian_consistent(1.0, 1.0, gp)).epsilon(1e-12));
  HamiltonianHandle ghp = gene_handle_printed(gp);
  CHECK(ghp.eval(1.0, 1.0) ==
        doctest::Approx(gene_hamiltonian_printed(1.0, 1.0, gp)).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  BnsParams bp;
  bp.a = -1.0;
  CHECK_THROWS_AS(bp.validate(), ArgumentError);
  bp = BnsParams{};
  bp.y0 = -0.1;
  CHECK_THROWS_AS(bp.validate(), ArgumentError);

  GeneParams gp;
  gp.kappa1 = 0.0;
  CHECK_THROWS_AS(gp.validate(), ArgumentError);
  gp = GeneParams{};
  gp.y0 = 0.5;
  CHECK_THROWS_AS(gp.validate(), ArgumentError);
}
