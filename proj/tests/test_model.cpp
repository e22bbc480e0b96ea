#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldt/model.hpp"
#include "ldt/scenarios.hpp"

using namespace ldt;

TEST_CASE("V for the gene chain: frozen values at x=1, p=1") {
  ModelSpec m = gene_model(GeneParams{});
  CHECK(eval_V(m, 1.0, 0.0, 1.0) ==
        doctest::Approx(0.0430806348152437).epsilon(1e-12));
  CHECK(eval_V(m, 1.0, 1.0, 1.0) ==
        doctest::Approx(1.5430806348152437).epsilon(1e-12));
  CHECK(eval_V(m, 1.0, 0.0, 0.0) == 0.0);  // exact at p = 0
}

TEST_CASE("V is convex in p (second differences)") {
  ModelSpec m = gene_model(GeneParams{});
  const double h = 0.05;
  for (double y : {0.0, 1.0})
    for (int i = -20; i <= 20; ++i) {
      double p = i * h;
      double dd = eval_V(m, 1.0, y, p + h) - 2.0 * eval_V(m, 1.0, y, p) +
                  eval_V(m, 1.0, y, p - h);
      CHECK(dd >= -1e-10);
    }
}

TEST_CASE("infinite jump integral propagates through V") {
  ModelSpec m = bns_model(BnsParams{});
  ModelSpec probe = m;
  probe.coeffs.nu1 = LevyMeasure::gamma(1.0, 1.0);
  probe.coeffs.k = [](double, double, double z) { return z; };
  CHECK(eval_V(probe, 0.0, 1.0, 1.5) == kInf);
  CHECK(std::isfinite(eval_V(probe, 0.0, 1.0, 0.5)));
}

TEST_CASE("perturbed drift") {
  ModelSpec m;
  m.coeffs.sigma = [](double, double) { return 2.0; };
  m.coeffs.sigma1 = [](double, double) { return 3.0; };
  m.coeffs.b1 = [](double, double y) { return -y; };
  m.coeffs.rho = 0.5;
  CHECK(perturbed_drift(m, 0.0, 1.5, 2.0) ==
        doctest::Approx(0.5 * 2.0 * 3.0 * 2.0 - 1.5).epsilon(1e-14));
}

TEST_CASE("domain validation") {
  ModelSpec m = gene_model(GeneParams{});
  CHECK(m.contains_y(0.0));
  CHECK(m.contains_y(1.0));
  CHECK(!m.contains_y(0.5));
  m.y0 = 0.5;
  CHECK_THROWS_AS(m.validate(), ArgumentError);

  ModelSpec b = bns_model(BnsParams{});
  CHECK(b.contains_y(0.0));
  CHECK(!b.contains_y(-0.1));

  ModelSpec bad;
  bad.coeffs.rho = 1.5;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("growth and Lipschitz diagnostics stay bounded on nice models") {
  ModelSpec m = gene_model(GeneParams{});
  Box box{0.2, 5.0, 0.0, 1.0};
  GrowthReport gr = check_growth(m, box, 2000, 7);
  CHECK(gr.K2_hat > 0.0);
  CHECK(gr.K2_hat < 50.0);
  LipschitzReport lr = check_lipschitz(m, 2000, box, 7);
  CHECK(std::isfinite(lr.K1_hat));
}

TEST_CASE("V lower bound scan") {
  ModelSpec m = bns_model(BnsParams{});
  // V(y; p) = y p^2 / 2 is minimized at y = 0 on the half line
  CHECK(scan_V_lower_bound(m, 0.0, 1.0, 0.0, 10.0, 101) ==
        doctest::Approx(0.0).epsilon(1e-14));
}
