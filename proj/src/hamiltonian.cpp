#include "ldt/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "ldt/rng.hpp"

namespace ldt {
namespace {

double rayleigh_quotient(const Eigen::MatrixXd& M, const Eigen::VectorXd& v) {
  return v.dot(M * v) / v.squaredNorm();
}

double eigen_residual(const Eigen::MatrixXd& M, const Eigen::VectorXd& v,
                      double lambda) {
  return (M * v - lambda * v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff();
}

// golden-section maximizer of a concave scalar function on [lo, hi]
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double log_sum_exp(const std::vector<double>& v) {
  double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

EigenResult principal_eigenvalue(const FastGenerator& G,
                                 const Eigen::VectorXd& V_vec) {
  const int n = G.size();
  if (V_vec.size() != n) throw ArgumentError("V_vec length mismatch");
  if (!V_vec.allFinite())
    throw ArgumentError("V_vec must be finite for the eigenvalue route");

  Eigen::MatrixXd M = G.Q;
  M.diagonal() += V_vec;

  if (n == 1) {
    EigenResult r;
    r.lambda = M(0, 0);
    r.eigenfunction = Eigen::VectorXd::Ones(1);
    return r;
  }

  // stage 1: power iteration on the nonnegative matrix I + delta M
  // (a first-order slice of e^{delta M}); cheap, globally convergent
  double diag_scale = M.diagonal().cwiseAbs().maxCoeff();
  double delta = 1.0 / (2.0 * std::max(diag_scale, 1e-300));
  Eigen::MatrixXd P = delta * M;
  P.diagonal().array() += 1.0;

  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  double lambda = rayleigh_quotient(M, v);
  int iters = 0;
  for (; iters < 300; ++iters) {
    v = P * v;
    v /= v.norm();
    double next = rayleigh_quotient(M, v);
    if (std::abs(next - lambda) < 1e-13 * std::max(1.0, std::abs(next)) &&
        iters > 10)
      break;
    lambda = next;
  }
  lambda = rayleigh_quotient(M, v);

  // stage 2: shift-invert refinement; the shift sits just above the current
  // estimate so the principal pair dominates the inverse spectrum
  double residual = eigen_residual(M, v, lambda);
  const double target = 1e-12, required = 1e-9;
  for (double margin : {1e-1, 1e-2, 1e-4, 1e-6}) {
    if (residual <= target) break;
    Eigen::MatrixXd shifted = -M;
    shifted.diagonal().array() += lambda + margin;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
    double prev_res = residual;
    for (int k = 0; k < 60; ++k, ++iters) {
      Eigen::VectorXd w = lu.solve(v);
      double nw = w.norm();
      if (!std::isfinite(nw) || nw == 0.0) break;
      v = w / nw;
      lambda = rayleigh_quotient(M, v);
      residual = eigen_residual(M, v, lambda);
      if (residual <= target) break;
      if (residual > 0.9 * prev_res && k > 4) break;  // stalled: try new shift
      prev_res = residual;
    }
  }

  if (v.maxCoeff() < 0.0) v = -v;
  if (v.minCoeff() <= 0.0)
    throw NumericError(
        "principal eigenvector has non-positive entries (generator reducible?)",
        lambda);
  if (residual > required)
    throw NumericError("principal eigenvalue residual did not converge",
                       residual);

  EigenResult r;
  r.lambda = lambda;
  r.eigenfunction = v / v.maxCoeff();
  r.iterations = iters;
  r.residual = residual;
  return r;
}

double hamiltonian_eval(const HamiltonianHandle& h, double x, double p) {
  if (!(p > h.p_lo && p < h.p_hi)) return kInf;
  return h.eval(x, p);
}

double dv_rate_J(const FastGenerator& G, const Eigen::VectorXd& mu) {
  const int n = G.size();
  if (mu.size() != n) throw ArgumentError("mu length mismatch");
  if (mu.minCoeff() < -1e-12 || std::abs(mu.sum() - 1.0) > 1e-9)
    throw ArgumentError("mu must be a probability vector");

  if (n == 2) {
    double j = std::pow(std::sqrt(mu(0) * G.Q(0, 1)) - std::sqrt(mu(1) * G.Q(1, 0)), 2);
    return j;
  }

  // minimize F(w) = sum_i mu_i e^{-w_i} (Q e^{w})_i over w, w_0 pinned at 0;
  // damped Newton-like coordinate descent on the smooth convex-like objective
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  auto F = [&](const Eigen::VectorXd& ww) {
    Eigen::VectorXd ew = ww.array().exp();
    return mu.dot((G.Q * ew).cwiseQuotient(ew));
  };
  double fv = F(w);
  for (int outer = 0; outer < 4000; ++outer) {
    Eigen::VectorXd ew = w.array().exp();
    Eigen::VectorXd Qe = G.Q * ew;
    // gradient wrt w_j: mu_j * (-e^{-w_j} (Q e^w)_j) + sum_i mu_i e^{-w_i} Q_ij e^{w_j}
    Eigen::VectorXd grad(n);
    for (int j = 0; j < n; ++j) {
      double g = -mu(j) * Qe(j) / ew(j);
      for (int i = 0; i < n; ++i) g += mu(i) / ew(i) * G.Q(i, j) * ew(j);
      grad(j) = g;
    }
    grad(0) = 0.0;  // gauge fix
    double gn = grad.cwiseAbs().maxCoeff();
    if (gn <= 1e-11) break;
    double step = 1.0 / std::max(1.0, G.Q.cwiseAbs().maxCoeff());
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls) {
      Eigen::VectorXd trial = (w - step * grad).cwiseMax(-45.0).cwiseMin(45.0);
      double ft = F(trial);
      if (ft < fv) {
        w = trial;
        fv = ft;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;  // no representable descent direction left
  }
  double j = -fv;
  return std::max(j, 0.0);  // J >= 0; tiny negatives are roundoff at mu = pi
}

double dv_sup(const FastGenerator& G, const Eigen::VectorXd& V_vec, int scan_n) {
  const int n = G.size();
  if (V_vec.size() != n) throw ArgumentError("V_vec length mismatch");
  if (scan_n < 3) throw ArgumentError("scan_n >= 3");
  auto objective = [&](const Eigen::VectorXd& mu) {
    return V_vec.dot(mu) - dv_rate_J(G, mu);
  };

  if (n == 2) {
    auto f = [&](double m0) {
      Eigen::Vector2d mu(m0, 1.0 - m0);
      return objective(mu);
    };
    double m0 = golden_max(f, 0.0, 1.0, 1e-12);
    return std::max({f(m0), f(0.0), f(1.0)});
  }
  if (n == 3) {
    // coarse simplex grid, then shrinking local refinement
    double best = -kInf, b0 = 1.0 / 3.0, b1 = 1.0 / 3.0;
    for (int i = 0; i <= scan_n; ++i)
      for (int j = 0; j + i <= scan_n; ++j) {
        double m0 = double(i) / scan_n, m1 = double(j) / scan_n;
        double val = objective(Eigen::Vector3d(m0, m1, 1.0 - m0 - m1));
        if (val > best) {
          best = val;
          b0 = m0;
          b1 = m1;
        }
      }
    double radius = 1.0 / scan_n;
    for (int level = 0; level < 30; ++level) {
      double c0 = b0, c1 = b1;
      for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
          double m0 = c0 + i * radius / 4.0, m1 = c1 + j * radius / 4.0;
          if (m0 < 0.0 || m1 < 0.0 || m0 + m1 > 1.0) continue;
          double val = objective(Eigen::Vector3d(m0, m1, 1.0 - m0 - m1));
          if (val > best) {
            best = val;
            b0 = m0;
            b1 = m1;
          }
        }
      radius *= 0.5;
      if (radius < 1e-11) break;
    }
    return best;
  }
  throw ArgumentError(
      "dv_sup supports 2 or 3 states; use principal_eigenvalue for larger "
      "generators");
}

double rayleigh_ritz(const FastGenerator& G, const Eigen::VectorXd& pi,
                     const Eigen::VectorXd& V_vec) {
  const int n = G.size();
  if (pi.size() != n || V_vec.size() != n)
    throw ArgumentError("vector length mismatch");
  auto rev = check_reversibility(G, pi);
  if (!rev.is_reversible)
    throw ArgumentError(
        "generator is not reversible w.r.t. pi; use principal_eigenvalue");

  Eigen::MatrixXd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      S(i, j) = std::sqrt(pi(i) / pi(j)) * G.Q(i, j) + (i == j ? V_vec(i) : 0.0);
  S = 0.5 * (S + S.transpose());  // kill roundoff asymmetry
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().maxCoeff();
}

FkResult feynman_kac_estimate(const ModelSpec& m, double x, double p, double T,
                              double dt, int n_paths, std::uint64_t seed,
                              int workers) {
  if (!(T > 0.0) || !(dt > 0.0) || n_paths < 2)
    throw ArgumentError("feynman_kac_estimate: T, dt > 0 and n_paths >= 2");
  m.validate();
  const long n_steps = std::lround(T / dt);
  const auto& c = m.coeffs;

  std::vector<double> log_weights(n_paths);

  auto run_chain_path = [&](std::uint64_t idx) {
    PathRng rng(seed, idx);
    // exact exponential clocks on the frozen-x chain; integral of V exact
    const auto& fs = std::get<FiniteSet>(m.fast_domain);
    const int ns = static_cast<int>(fs.states.size());
    std::vector<double> vstate(ns), rate_out(ns);
    std::vector<std::vector<double>> rates(ns, std::vector<double>(ns, 0.0));
    for (int i = 0; i < ns; ++i) {
      vstate[i] = eval_V(m, x, fs.states[i], p);
      double out = 0.0;
      for (int j = 0; j < ns; ++j)
        if (j != i) out += rates[i][j] = m.chain_rates(x, fs.states[i], fs.states[j]);
      rate_out[i] = out;
    }
    int cur = 0;
    for (int i = 1; i < ns; ++i)
      if (fs.states[i] == m.y0) cur = i;
    double t = 0.0, S = 0.0;
    for (;;) {
      double hold = rate_out[cur] > 0.0
                        ? -std::log(rng.uniform()) / rate_out[cur]
                        : kInf;
      if (t + hold >= T) {
        S += vstate[cur] * (T - t);
        break;
      }
      S += vstate[cur] * hold;
      t += hold;
      double u = rng.uniform() * rate_out[cur], acc = 0.0;
      for (int j = 0; j < ns; ++j) {
        if (j == cur) continue;
        acc += rates[cur][j];
        if (u <= acc) {
          cur = j;
          break;
        }
      }
    }
    return S;
  };

  auto run_diffusion_path = [&](std::uint64_t idx) {
    PathRng rng(seed, idx);
    double y = m.y0, S = 0.0;
    const double sdt = std::sqrt(dt);
    const bool half = std::holds_alternative<HalfLine>(m.fast_domain);
    const double floor_y = half ? std::get<HalfLine>(m.fast_domain).lower : 0.0;
    const auto* gd = std::get_if<GammaDensity>(&c.nu2.variant());
    const auto* fa = std::get_if<FiniteAtoms>(&c.nu2.variant());
    const bool no_slow_jumps = c.nu1.is_zero();
    for (long s = 0; s < n_steps; ++s) {
      if (no_slow_jumps) {  // skip the jump-integral plumbing in the hot loop
        double sg = c.sigma(x, y);
        S += (c.b(x, y) * p + 0.5 * sg * sg * p * p) * dt;
      } else {
        S += eval_V(m, x, y, p) * dt;
      }
      double drift = perturbed_drift(m, x, y, p);
      double s1 = c.sigma1(x, y);
      double ynew = y + drift * dt + s1 * sdt * (s1 != 0.0 ? rng.normal() : 0.0);
      if (gd) {
        // identity amplitude required for the exact-increment route; the raw
        // increment carries its mean, which the compensated drift already has
        ynew += rng.gamma(gd->a * dt, gd->b) - gd->a / gd->b * dt;
      } else if (fa) {
        for (const auto& [z, mass] : fa->atoms) {
          unsigned cnt = rng.poisson(mass * dt);
          if (cnt) ynew += cnt * c.k1(x, y, z);
          ynew -= mass * c.k1(x, y, z) * dt;  // compensator
        }
      } else if (!c.nu2.is_zero()) {
        throw ArgumentError("feynman_kac_estimate: unsupported nu2 variant");
      }
      if (half && ynew < floor_y) ynew = floor_y;
      y = ynew;
      if (!std::isfinite(y))
        throw NumericError("fast path diverged at step " + std::to_string(s));
    }
    return S;
  };

  auto worker_fn = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      log_weights[i] = m.is_chain() ? run_chain_path(i) : run_diffusion_path(i);
  };

  int nw = workers > 0 ? workers
                       : static_cast<int>(std::thread::hardware_concurrency());
  nw = std::clamp(nw, 1, 64);
  if (nw == 1) {
    worker_fn(0, n_paths);
  } else {
    std::vector<std::thread> pool;
    int chunk = (n_paths + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      int lo = w * chunk, hi = std::min(n_paths, lo + chunk);
      if (lo < hi) pool.emplace_back(worker_fn, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  double lse = log_sum_exp(log_weights);
  double lam = (lse - std::log(double(n_paths))) / T;
  // delta method on ln(mean W): var(ln mean) ~ var(W) / (n mean(W)^2);
  // computed on the shifted scale to dodge overflow
  double shift = lse - std::log(double(n_paths));  // ln(mean W)
  double var = 0.0;
  for (double lw : log_weights) {
    double r = std::exp(lw - shift) - 1.0;
    var += r * r;
  }
  var /= double(n_paths) * double(n_paths - 1);
  FkResult res;
  res.lambda_hat = lam;
  res.stderr_hat = std::sqrt(var) / T;
  if (!std::isfinite(res.lambda_hat))
    throw NumericError("feynman_kac_estimate overflowed", lam);
  return res;
}

ContinuityReport continuity_scan(const HamiltonianHandle& h, double x_lo,
                                 double x_hi, double p_lo, double p_hi,
                                 double mesh) {
  if (!(mesh > 0.0)) throw ArgumentError("mesh > 0");
  ContinuityReport rep;
  int nx = std::max(1, int(std::ceil((x_hi - x_lo) / mesh)));
  int np = std::max(1, int(std::ceil((p_hi - p_lo) / mesh)));
  auto val = [&](int i, int j) {
    double v = hamiltonian_eval(h, x_lo + i * (x_hi - x_lo) / nx,
                                p_lo + j * (p_hi - p_lo) / np);
    if (!std::isfinite(v))
      throw ArgumentError(
          "hamiltonian is infinite inside the scanned box; domain misdeclared");
    return v;
  };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= np; ++j) {
      double v = val(i, j);
      if (i < nx) {
        double dx = (x_hi - x_lo) / nx;
        double jump = std::abs(val(i + 1, j) - v);
        rep.max_jump = std::max(rep.max_jump, jump);
        if (dx > 0.0) rep.x_modulus = std::max(rep.x_modulus, jump / dx);
      }
      if (j < np) {
        double dp = (p_hi - p_lo) / np;
        double jump = std::abs(val(i, j + 1) - v);
        rep.max_jump = std::max(rep.max_jump, jump);
        if (dp > 0.0) rep.p_modulus = std::max(rep.p_modulus, jump / dp);
      }
    }
  return rep;
}

double convexity_check(const HamiltonianHandle& h, double x,
                       const std::vector<double>& p_grid) {
  if (p_grid.size() < 3) throw ArgumentError("p_grid needs >= 3 points");
  double min_dd = kInf;
  for (size_t i = 1; i + 1 < p_grid.size(); ++i) {
    double dd = hamiltonian_eval(h, x, p_grid[i + 1]) -
                2.0 * hamiltonian_eval(h, x, p_grid[i]) +
                hamiltonian_eval(h, x, p_grid[i - 1]);
    min_dd = std::min(min_dd, dd);
  }
  return min_dd;
}

HamiltonianHandle make_matrix_eigen_handle(const ModelSpec& m,
                                           const GridSpec& grid, double p_lo,
                                           double p_hi, bool x_independent) {
  m.validate();
  HamiltonianHandle h;
  h.backend = "matrix-eigen";
  h.p_lo = p_lo;
  h.p_hi = p_hi;
  h.x_independent = x_independent;

  const bool p_free_generator = (m.coeffs.rho == 0.0);
  auto cache = std::make_shared<std::map<double, FastGenerator>>();
  auto cache_mtx = std::make_shared<std::mutex>();

  h.eval = [m, grid, p_free_generator, cache, cache_mtx](double x, double p) {
    if (p == 0.0) return 0.0;
    const FastGenerator* Gp = nullptr;
    FastGenerator local;
    if (p_free_generator) {
      std::lock_guard<std::mutex> lk(*cache_mtx);
      auto it = cache->find(x);
      if (it == cache->end())
        it = cache->emplace(x, m.is_chain()
                                   ? build_chain_generator(
                                         m.chain_rates,
                                         std::get<FiniteSet>(m.fast_domain).states,
                                         x)
                                   : discretize_generator(m, x, 0.0, grid))
                 .first;
      Gp = &it->second;
    } else {
      local = m.is_chain()
                  ? build_chain_generator(
                        m.chain_rates, std::get<FiniteSet>(m.fast_domain).states,
                        x)
                  : discretize_generator(m, x, p, grid);
      Gp = &local;
    }
    Eigen::VectorXd V(Gp->size());
    for (int i = 0; i < Gp->size(); ++i) {
      double v = eval_V(m, x, Gp->states(i), p);
      if (!std::isfinite(v)) return kInf;
      V(i) = v;
    }
    return principal_eigenvalue(*Gp, V).lambda;
  };
  return h;
}

}  // namespace ldt
