#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldt/fastgen.hpp"
#include "ldt/scenarios.hpp"

using namespace ldt;

TEST_CASE("two-state chain generator and stationary law") {
  ModelSpec m = gene_model(GeneParams{});
  FastGenerator G = build_chain_generator(m.chain_rates, {0.0, 1.0}, 1.0);
  CHECK(G.Q(0, 0) == doctest::Approx(-1.0));
  CHECK(G.Q(0, 1) == doctest::Approx(1.0));
  CHECK(G.Q(1, 0) == doctest::Approx(1.0));
  CHECK(G.Q(1, 1) == doctest::Approx(-1.0));
  Eigen::VectorXd pi = stationary_distribution(G);
  CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-12));

  GeneParams asym;
  asym.kappa1 = 2.0;  // on at rate 2x, off at rate x
  ModelSpec ma = gene_model(asym);
  FastGenerator Ga = build_chain_generator(ma.chain_rates, {0.0, 1.0}, 1.0);
  Eigen::VectorXd pa = stationary_distribution(Ga);
  CHECK(pa(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(check_reversibility(Ga, pa).is_reversible);  // 2 states always are
}

TEST_CASE("reducible generator rejected with state names") {
  FastGenerator G;
  G.states = Eigen::Vector2d(0.0, 1.0);
  G.Q = Eigen::Matrix2d::Zero();  // no transitions at all
  G.Q(0, 0) = 0.0;
  CHECK_THROWS_AS(stationary_distribution(G), ArgumentError);
}

TEST_CASE("discretized gamma-OU generator: rows, mass, stationary mean") {
  ModelSpec m = bns_model(BnsParams{});  // a = b = 1
  GridSpec gs{0.0, 30.0, 600};
  FastGenerator G = discretize_generator(m, 0.0, 0.0, gs);
  G.validate();
  CHECK(G.kind == FastGenerator::Kind::GridDiscretization);
  // off-diagonals nonnegative, rows sum to ~0 (validate already enforces)
  Eigen::VectorXd pi = stationary_distribution(G);
  double mean = pi.dot(G.states);
  // OU driven by a gamma subordinator: mean a/b, variance a/(2 b^2)
  CHECK(mean == doctest::Approx(1.0).epsilon(0.03));
  double m2 = pi.dot(G.states.cwiseProduct(G.states));
  CHECK(m2 - mean * mean == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("discretization refines monotonically toward the stationary mean") {
  ModelSpec m = bns_model(BnsParams{});
  double prev_err = kInf;
  for (int n : {150, 300, 600}) {
    FastGenerator G = discretize_generator(m, 0.0, 0.0, GridSpec{0.0, 30.0, n});
    Eigen::VectorXd pi = stationary_distribution(G);
    double err = std::abs(pi.dot(G.states) - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("atom-jump discretization routes mass to the right node") {
  ModelSpec m;
  m.fast_domain = RealLine{};
  m.coeffs.nu2 = LevyMeasure::atoms({{1.0, 2.0}});
  m.coeffs.k1 = [](double, double, double z) { return z; };
  // pure jump by +1 at rate 2, compensated drift -2 pushed into upwind part
  GridSpec gs{-5.0, 5.0, 101};  // spacing 0.1, jump lands 10 nodes up
  FastGenerator G = discretize_generator(m, 0.0, 0.0, gs);
  int mid = 50;
  CHECK(G.Q(mid, mid + 10) == doctest::Approx(2.0));
  // compensator: drift -2 => mass 2/0.1 = 20 to the left neighbor
  CHECK(G.Q(mid, mid - 1) == doctest::Approx(20.0));
}

TEST_CASE("lyapunov report flags boundary-touching sublevel sets") {
  ModelSpec m = bns_model(BnsParams{});
  FastGenerator G = discretize_generator(m, 0.0, 0.0, GridSpec{0.0, 30.0, 200});
  LyapunovSpec zeta{[](double y) { return 0.5 * y; }, "linear tilt"};
  int n = G.size();
  Eigen::VectorXd V(n), b0p = Eigen::VectorXd::Zero(n), s2 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) V(i) = 0.5 * G.states(i);  // V at p = 1
  LyapunovReport rep = check_lyapunov(G, zeta, 1.0, V, b0p, s2, 0.0);
  CHECK(rep.g.size() == n);
  CHECK(std::isfinite(rep.g.minCoeff()));

  LyapunovSpec big{[](double y) { return 100.0 * y; }, "overflowing"};
  CHECK_THROWS_AS(check_lyapunov(G, big, 1.0, V, b0p, s2, 0.0), NumericError);
}

TEST_CASE("validate rejects broken generators") {
  FastGenerator G;
  G.states = Eigen::Vector2d(0.0, 1.0);
  G.Q.resize(2, 2);
  G.Q << -1.0, 1.0, -0.5, 0.5;  // negative off-diagonal
  CHECK_THROWS_AS(G.validate(), NumericError);
  G.Q << -1.0, 0.9, 1.0, -1.0;  // row does not sum to zero
  CHECK_THROWS_AS(G.validate(), NumericError);
}
