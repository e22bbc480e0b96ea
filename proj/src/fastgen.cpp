#include "ldt/fastgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <boost/math/special_functions/expint.hpp>

namespace ldt {
namespace {

double e1(double x) {
  if (x > 700.0) return 0.0;
  return boost::math::expint(1, x);
}

// mass of the gamma measure a z^-1 e^-bz on [z1, z2]
double gamma_mass(const GammaDensity& g, double z1, double z2) {
  return g.a * (e1(g.b * z1) - e1(g.b * z2));
}

// int z nu(dz) over [z1, z2] for the gamma measure
double gamma_mean(const GammaDensity& g, double z1, double z2) {
  return g.a / g.b * (std::exp(-g.b * z1) - std::exp(-g.b * z2));
}

// mass of |z|^{-1-alpha} (one side) on [z1, z2], 1 <= z1 <= z2
double power_mass(const TruncatedPower& t, double z1, double z2) {
  return (std::pow(z1, -t.alpha) - std::pow(z2, -t.alpha)) / t.alpha;
}

// strongly connected from/to state 0 on the off-diagonal support
std::vector<int> unreachable_states(const Eigen::MatrixXd& Q, bool transpose) {
  const int n = static_cast<int>(Q.rows());
  std::vector<char> seen(n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j < n; ++j) {
      if (j == i || seen[j]) continue;
      double rate = transpose ? Q(j, i) : Q(i, j);
      if (rate > 0.0) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  std::vector<int> missing;
  for (int i = 0; i < n; ++i)
    if (!seen[i]) missing.push_back(i);
  return missing;
}

}  // namespace

void FastGenerator::validate(double tol_scale) const {
  const int n = size();
  if (Q.rows() != n || Q.cols() != n)
    throw ArgumentError("generator matrix shape mismatch");
  for (int i = 1; i < n; ++i)
    if (!(states(i) > states(i - 1)))
      throw ArgumentError("generator states must be strictly increasing");
  for (int i = 0; i < n; ++i) {
    double scale = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i != j && Q(i, j) < 0.0)
        throw NumericError("negative off-diagonal rate in generator");
      scale = std::max(scale, std::abs(Q(i, j)));
    }
    double rowsum = Q.row(i).sum();
    if (std::abs(rowsum) > tol_scale * std::max(scale, 1.0))
      throw NumericError("generator row does not sum to zero", rowsum);
  }
}

FastGenerator build_chain_generator(const ChainRates& rates,
                                    const std::vector<double>& states, double x) {
  if (states.size() < 1) throw ArgumentError("chain needs at least one state");
  const int n = static_cast<int>(states.size());
  FastGenerator G;
  G.kind = FastGenerator::Kind::ExactChain;
  G.states = Eigen::Map<const Eigen::VectorXd>(states.data(), n);
  G.Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double r = rates(x, states[i], states[j]);
      if (r < 0.0) throw ArgumentError("negative chain transition rate");
      G.Q(i, j) = r;
      row += r;
    }
    G.Q(i, i) = -row;
  }
  G.validate();
  return G;
}

FastGenerator discretize_generator(const ModelSpec& m, double x, double p,
                                   const GridSpec& grid, double trunc) {
  if (grid.n < 3) throw ArgumentError("discretize_generator: n >= 3");
  if (!(grid.ymin < grid.ymax)) throw ArgumentError("ymin < ymax required");
  if (m.is_chain())
    throw ArgumentError("finite-state fast process: use build_chain_generator");

  const int n = grid.n;
  const double h = (grid.ymax - grid.ymin) / (n - 1);
  if (trunc <= 0.0) trunc = 0.5 * h;

  FastGenerator G;
  G.kind = FastGenerator::Kind::GridDiscretization;
  G.ymin = grid.ymin;
  G.ymax = grid.ymax;
  G.spacing = h;
  G.jump_truncation = trunc;
  G.states = Eigen::VectorXd::LinSpaced(n, grid.ymin, grid.ymax);
  G.Q = Eigen::MatrixXd::Zero(n, n);

  const auto& c = m.coeffs;
  auto node_of = [&](double y) {
    int j = static_cast<int>(std::lround((y - grid.ymin) / h));
    return std::clamp(j, 0, n - 1);  // off-grid mass lands on the boundary
  };

  int prev_drift_sign = 0;
  bool sign_change = false;

  for (int i = 0; i < n; ++i) {
    const double y = G.states(i);
    double s1 = c.sigma1(x, y);
    double drift = perturbed_drift(m, x, y, p);
    if (!std::isfinite(s1) || !std::isfinite(drift))
      throw NumericError("non-finite fast coefficient at y=" + std::to_string(y));

    // jump kernel rows + compensator-corrected drift
    if (!c.nu2.is_zero()) {
      auto kz = [&](double z) { return c.k1(x, y, z); };
      if (const auto* fa = std::get_if<FiniteAtoms>(&c.nu2.variant())) {
        for (const auto& [z, mass] : fa->atoms) {
          if (mass <= 0.0) continue;
          double jump = kz(z);
          if (std::abs(jump) < trunc) continue;  // sub-grid: compensator cancels
          int j = node_of(y + jump);
          if (j != i) G.Q(i, j) += mass;
          drift -= mass * jump;  // compensated measure
        }
      } else if (const auto* gd = std::get_if<GammaDensity>(&c.nu2.variant())) {
        const bool ident = kslice_is_identity(kz);
        // cells half a spacing wide keep the nearest-node map exact for the
        // identity amplitude; sub-cells handle general k1
        double zmax = std::min(2000.0 / gd->b, 10.0 * (grid.ymax - grid.ymin));
        int cells = ident ? 0 : std::max(4 * n, 512);
        if (ident) {
          // direct per-target binning, exact interval masses
          for (int j = 0; j < n; ++j) {
            double target_off = G.states(j) - y;
            double z1 = std::max(trunc, target_off - 0.5 * h);
            double z2 = target_off + 0.5 * h;
            if (j == n - 1) z2 = kInf;  // boundary absorbs the tail
            if (z2 <= z1 || z2 <= trunc) continue;
            double mass = (z2 == kInf) ? gd->a * e1(gd->b * z1)
                                       : gamma_mass(*gd, z1, z2);
            if (mass <= 0.0) continue;
            if (j != i) G.Q(i, j) += mass;
            drift -= (z2 == kInf) ? gd->a / gd->b * std::exp(-gd->b * z1)
                                  : gamma_mean(*gd, z1, z2);
          }
        } else {
          double z1 = trunc;
          for (int cidx = 0; cidx < cells && z1 < zmax; ++cidx) {
            double z2 = std::min(zmax, z1 * (1.0 + 4.0 / cells) + 0.25 * h);
            double mass = gamma_mass(*gd, z1, z2);
            double zm = 0.5 * (z1 + z2);
            double jump = kz(zm);
            if (mass > 0.0 && std::abs(jump) >= trunc) {
              int j = node_of(y + jump);
              if (j != i) G.Q(i, j) += mass;
              drift -= mass * jump;
            }
            z1 = z2;
          }
        }
      } else if (const auto* tp = std::get_if<TruncatedPower>(&c.nu2.variant())) {
        const int cells = std::max(2 * n, 256);
        for (int side = -1; side <= 1; side += 2) {
          double z1 = 1.0;
          for (int cidx = 0; cidx < cells; ++cidx) {
            double z2 = z1 * std::pow(1e4, 1.0 / cells) + 0.25 * h;
            double mass = power_mass(*tp, z1, z2);
            double jump = kz(side * 0.5 * (z1 + z2));
            if (mass > 0.0 && std::abs(jump) >= trunc) {
              int j = node_of(y + jump);
              if (j != i) G.Q(i, j) += mass;
              drift -= mass * jump;
            }
            z1 = z2;
            if (mass < 1e-16) break;
          }
        }
      }
    }

    // diffusion: centered second difference, reflected at the edges
    double diff = 0.5 * s1 * s1 / (h * h);
    if (diff > 0.0) {
      if (i > 0) G.Q(i, i - 1) += diff;
      if (i < n - 1) G.Q(i, i + 1) += diff;
    }

    // drift: upwind first difference
    int sgn = (drift > 0.0) ? 1 : (drift < 0.0 ? -1 : 0);
    if (sgn != 0 && prev_drift_sign != 0 && sgn != prev_drift_sign)
      sign_change = true;
    if (sgn != 0) prev_drift_sign = sgn;
    double dr = std::abs(drift) / h;
    if (drift > 0.0 && i < n - 1) G.Q(i, i + 1) += dr;
    if (drift < 0.0 && i > 0) G.Q(i, i - 1) += dr;
    // at the boundary node pointing outward the mass stays put (reflecting)

    G.Q(i, i) = 0.0;
    G.Q(i, i) = -G.Q.row(i).sum();
  }

  // a drift sign change needs a few nodes to resolve
  G.drift_resolved = !(sign_change && n < 16);
  G.validate();
  return G;
}

Eigen::VectorXd stationary_distribution(const FastGenerator& G) {
  const int n = G.size();
  auto missing_fwd = unreachable_states(G.Q, false);
  auto missing_bwd = unreachable_states(G.Q, true);
  if (!missing_fwd.empty() || !missing_bwd.empty()) {
    const auto& missing = missing_fwd.empty() ? missing_bwd : missing_fwd;
    std::string msg = "generator is reducible; disconnected states:";
    for (size_t i = 0; i < missing.size() && i < 8; ++i)
      msg += " " + std::to_string(missing[i]);
    throw ArgumentError(msg);
  }
  // solve Q^T pi = 0 with the first equation replaced by sum(pi) = 1
  Eigen::MatrixXd A = G.Q.transpose();
  A.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  double residual = (pi.transpose() * G.Q).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw NumericError("stationary distribution residual too large", residual);
  return pi;
}

ReversibilityReport check_reversibility(const FastGenerator& G,
                                        const Eigen::VectorXd& pi) {
  if (pi.size() != G.size()) throw ArgumentError("pi length mismatch");
  ReversibilityReport rep;
  double scale = 0.0;
  for (int i = 0; i < G.size(); ++i)
    for (int j = i + 1; j < G.size(); ++j) {
      double flow_ij = pi(i) * G.Q(i, j), flow_ji = pi(j) * G.Q(j, i);
      rep.max_violation = std::max(rep.max_violation, std::abs(flow_ij - flow_ji));
      scale = std::max({scale, std::abs(flow_ij), std::abs(flow_ji)});
    }
  rep.is_reversible = rep.max_violation <= 1e-10 * std::max(scale, 1.0);
  return rep;
}

LyapunovReport check_lyapunov(const FastGenerator& G, const LyapunovSpec& zeta,
                              double theta, const Eigen::VectorXd& V_vec,
                              const Eigen::VectorXd& b0p_vec,
                              const Eigen::VectorXd& sigma2_vec, double level) {
  const int n = G.size();
  if (V_vec.size() != n || b0p_vec.size() != n || sigma2_vec.size() != n)
    throw ArgumentError("check_lyapunov: vector length mismatch");
  if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("theta in (0,1]");

  Eigen::VectorXd ez(n);
  for (int i = 0; i < n; ++i) {
    double zv = zeta.zeta(G.states(i));
    if (zv > 700.0)
      throw NumericError("e^zeta overflow; rescale the Lyapunov function", zv);
    if (zv < 0.0) throw ArgumentError("zeta must be nonnegative");
    ez(i) = std::exp(zv);
  }
  Eigen::VectorXd tilted = (G.Q * ez).cwiseQuotient(ez);

  LyapunovReport rep;
  rep.g = -theta * tilted - (V_vec.cwiseAbs() + b0p_vec.cwiseAbs() + sigma2_vec);
  for (int i = 0; i < n; ++i)
    if (rep.g(i) <= level) rep.sublevel_states.push_back(i);
  rep.bounded = true;
  if (G.kind != FastGenerator::Kind::ExactChain)
    for (int i : rep.sublevel_states)
      if (i == 0 || i == n - 1) rep.bounded = false;
  return rep;
}

}  // namespace ldt
