#include "ldt/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ldt/rng.hpp"
#include "ldt/scenarios.hpp"

namespace ldt {
namespace {

struct PathResult {
  double x = 0.0, y = 0.0;
  long clamps = 0, overflows = 0;
};

// runs fn(path_index) over [0, n) across workers; results land in
// path-index order so the worker count never changes the output
template <class Fn>
TerminalSample run_paths(int n_paths, int workers, Fn&& fn) {
  TerminalSample out;
  out.x_T.resize(n_paths);
  out.y_T.resize(n_paths);
  std::vector<long> clamps, overflows;

  int nw = workers > 0 ? workers
                       : static_cast<int>(std::thread::hardware_concurrency());
  nw = std::clamp(nw, 1, 64);
  clamps.assign(nw, 0);
  overflows.assign(nw, 0);

  auto body = [&](int w, int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      PathResult r = fn(static_cast<std::uint64_t>(i));
      out.x_T[i] = r.x;
      out.y_T[i] = r.y;
      clamps[w] += r.clamps;
      overflows[w] += r.overflows;
    }
  };
  if (nw == 1) {
    body(0, 0, n_paths);
  } else {
    std::vector<std::thread> pool;
    int chunk = (n_paths + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      int lo = w * chunk, hi = std::min(n_paths, lo + chunk);
      if (lo < hi) pool.emplace_back(body, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  for (int w = 0; w < nw; ++w) {
    out.clamp_events += clamps[w];
    out.overflow_events += overflows[w];
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (!(epsilon > 0.0 && t_end > 0.0 && dt > 0.0))
    throw ArgumentError("epsilon, t_end, dt must be positive");
  if (n_paths < 1) throw ArgumentError("n_paths >= 1");
  if (substeps < 1) throw ArgumentError("substeps >= 1");
  if (dt > epsilon / 10.0 + 1e-15)
    throw ArgumentError("dt must be <= epsilon / 10 (fast scale unresolved)");
}

TerminalSample simulate_general(const ModelSpec& m, const SimConfig& cfg) {
  m.validate();
  cfg.validate();
  const auto& c = m.coeffs;
  const double eps = cfg.epsilon;
  const long n_steps = std::lround(cfg.t_end / cfg.dt);
  const double dt = cfg.t_end / n_steps;
  const double sdt = std::sqrt(dt);
  const double rho = c.rho, rho_c = std::sqrt(1.0 - rho * rho);

  const auto* fa1 = std::get_if<FiniteAtoms>(&c.nu1.variant());
  const auto* fa2 = std::get_if<FiniteAtoms>(&c.nu2.variant());
  const auto* gd2 = std::get_if<GammaDensity>(&c.nu2.variant());
  if (!c.nu1.is_zero() && !fa1)
    throw ArgumentError("simulate_general: nu1 must be zero or finite atoms");
  if (!c.nu2.is_zero() && !fa2 && !gd2)
    throw ArgumentError("simulate_general: unsupported nu2 variant");

  const bool chain = m.is_chain();
  const bool half = std::holds_alternative<HalfLine>(m.fast_domain);
  const double y_floor = half ? std::get<HalfLine>(m.fast_domain).lower : 0.0;

  auto one_path = [&](std::uint64_t idx) {
    PathRng rng(cfg.seed, idx);
    PathResult r;
    double x = m.x0, y = m.y0;
    for (long s = 0; s < n_steps; ++s) {
      double xi = rng.normal();
      double xn = x + (c.b(x, y) + eps * c.b0(x, y)) * dt +
                  std::sqrt(eps) * c.sigma(x, y) * sdt * xi;
      // slow jumps: eps-scaled against nu1 at intensity 1/eps, compensated
      if (fa1) {
        for (const auto& [z, mass] : fa1->atoms) {
          unsigned cnt = rng.poisson(mass * dt / eps);
          double amp = c.k(x, y, z);
          xn += eps * (cnt * amp) - mass * amp * dt;
        }
      }
      // fast component
      double yn = y;
      if (chain) {
        // frozen-rate exponential clock within the step
        const auto& fs = std::get<FiniteSet>(m.fast_domain);
        double t_in = 0.0;
        int cur = 0;
        for (size_t j = 0; j < fs.states.size(); ++j)
          if (fs.states[j] == y) cur = static_cast<int>(j);
        while (t_in < dt) {
          double out = 0.0;
          for (size_t j = 0; j < fs.states.size(); ++j)
            if (static_cast<int>(j) != cur)
              out += m.chain_rates(x, fs.states[cur], fs.states[j]) / eps;
          double hold = out > 0.0 ? -std::log(rng.uniform()) / out : kInf;
          if (t_in + hold >= dt) break;
          t_in += hold;
          double u = rng.uniform() * out, acc = 0.0;
          for (size_t j = 0; j < fs.states.size(); ++j) {
            if (static_cast<int>(j) == cur) continue;
            acc += m.chain_rates(x, fs.states[cur], fs.states[j]) / eps;
            if (u <= acc) {
              cur = static_cast<int>(j);
              break;
            }
          }
        }
        yn = fs.states[cur];
      } else {
        double eta = rho * xi + rho_c * rng.normal();
        yn = y + c.b1(x, y) * dt / eps +
             c.sigma1(x, y) * sdt / std::sqrt(eps) * eta;
        if (fa2) {
          for (const auto& [z, mass] : fa2->atoms) {
            unsigned cnt = rng.poisson(mass * dt / eps);
            double amp = c.k1(x, y, z);
            yn += cnt * amp - mass * amp * dt / eps;
          }
        } else if (gd2) {
          yn += rng.gamma(gd2->a * dt / eps, gd2->b);
        }
        if (half && yn < y_floor) {
          yn = y_floor;
          ++r.clamps;
        }
      }
      x = xn;
      y = yn;
      if (!std::isfinite(x) || !std::isfinite(y))
        throw NumericError("simulate_general: path diverged at step " +
                           std::to_string(s));
    }
    r.x = x;
    r.y = y;
    return r;
  };
  return run_paths(cfg.n_paths, cfg.workers, one_path);
}

TerminalSample simulate_bns(const BnsParams& params, double epsilon,
                            const SimConfig& cfg) {
  params.validate();
  cfg.validate();
  const double eps = epsilon;
  const long n_steps = std::lround(cfg.t_end / cfg.dt);
  const double dt = cfg.t_end / n_steps;
  const int sub = cfg.substeps;
  const double ddt = dt / sub;
  const double decay = std::exp(-ddt / eps);
  const double shape = params.a * ddt / eps;

  auto one_path = [&](std::uint64_t idx) {
    PathRng rng(cfg.seed, idx);
    PathResult r;
    double x = params.x0, y = params.y0;
    for (long s = 0; s < n_steps; ++s) {
      for (int k = 0; k < sub; ++k) {
        x += eps * (params.r - 0.5 * y) * ddt +
             std::sqrt(eps * std::max(y, 0.0) * ddt) * rng.normal();
        // exact gamma-OU update: decay, then a subordinator increment
        y = y * decay + rng.gamma(shape, params.b);
      }
      if (!std::isfinite(x) || y < 0.0)
        throw NumericError("simulate_bns: invalid state at step " +
                           std::to_string(s));
    }
    r.x = x;
    r.y = y;
    return r;
  };
  return run_paths(cfg.n_paths, cfg.workers, one_path);
}

TerminalSample simulate_gene(const GeneParams& params, double epsilon,
                             const SimConfig& cfg) {
  params.validate();
  cfg.validate();
  const double eps = epsilon;
  const long n_steps = std::lround(cfg.t_end / cfg.dt);
  const double dt = cfg.t_end / n_steps;
  const double sdt = std::sqrt(dt);
  const double k1 = params.kappa1, km1 = params.kappa_m1;
  const double k2 = params.kappa2, k3 = params.kappa3;

  auto one_path = [&](std::uint64_t idx) {
    PathRng rng(cfg.seed, idx);
    PathResult r;
    double x = params.x0;
    int on = params.y0 == 1.0 ? 1 : 0;
    for (long s = 0; s < n_steps; ++s) {
      // chain occupation within [0, dt), rates frozen at the current x
      double occ_on = 0.0, t_in = 0.0;
      while (t_in < dt) {
        double rate = (on ? km1 : k1) * std::max(x, 0.0) / eps;
        double hold = rate > 0.0 ? -std::log(rng.uniform()) / rate : kInf;
        double seg = std::min(hold, dt - t_in);
        if (on) occ_on += seg;
        t_in += seg;
        if (hold < dt - t_in + seg) on = 1 - on;
        if (t_in >= dt) break;
      }
      double ybar = occ_on / dt;  // occupation-weighted production
      double var = eps * std::max(k2 * ybar + k3 * x, 0.0);
      if (k2 * ybar + k3 * x < 0.0) ++r.clamps;
      double xn = x + (k2 * ybar - k3 * x) * dt + std::sqrt(var) * sdt * rng.normal();
      if (x > eps) {
        // +-eps jumps, rate 1/(2 eps) each; symmetric, so no compensator
        unsigned up = rng.poisson(dt / (2.0 * eps));
        unsigned dn = rng.poisson(dt / (2.0 * eps));
        xn += eps * (double(up) - double(dn));
      } else {
        ++r.overflows;  // jump guard engaged
      }
      x = xn;
      if (!std::isfinite(x))
        throw NumericError("simulate_gene: path diverged at step " +
                           std::to_string(s));
    }
    r.x = x;
    r.y = on;
    return r;
  };
  return run_paths(cfg.n_paths, cfg.workers, one_path);
}

UEstimate estimate_u_eps(const TerminalSample& s,
                         const std::function<double(double)>& h,
                         double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon > 0");
  const int n = static_cast<int>(s.x_T.size());
  if (n < 1) throw ArgumentError("empty sample");
  const double cap = 1e8;

  std::vector<double> w(n);
  double m = -kInf;
  for (int i = 0; i < n; ++i) {
    double hv = std::clamp(h(s.x_T[i]), -cap, cap);
    w[i] = hv / epsilon;
    m = std::max(m, w[i]);
  }
  double sum = 0.0;
  for (double v : w) sum += std::exp(v - m);
  double lse = m + std::log(sum);
  UEstimate res;
  res.u_hat = epsilon * (lse - std::log(double(n)));
  double mean_shift = lse - std::log(double(n));
  double var = 0.0;
  for (double v : w) {
    double rr = std::exp(v - mean_shift) - 1.0;
    var += rr * rr;
  }
  if (n > 1) var /= double(n) * double(n - 1);
  res.stderr_hat = epsilon * std::sqrt(var);
  return res;
}

TailEstimate estimate_tail(const TerminalSample& s, double threshold,
                           double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon > 0");
  TailEstimate res;
  for (double x : s.x_T)
    if (x >= threshold) ++res.n_hits;
  if (res.n_hits == 0) {
    res.log_prob_scaled = -kInf;
    return res;
  }
  res.log_prob_scaled =
      epsilon * std::log(double(res.n_hits) / double(s.x_T.size()));
  return res;
}

std::vector<double> tightness_diagnostic(const ModelSpec& m,
                                         const LyapunovSpec& zeta,
                                         const std::vector<double>& epsilons,
                                         const Box& box, int nx, int ny) {
  m.validate();
  if (!zeta.zeta) throw ArgumentError("zeta required");
  if (nx < 2 || ny < 2) throw ArgumentError("grid too small");
  const auto& c = m.coeffs;

  // f(x) = ln(1 + x^2)
  auto fp = [](double x) { return 2.0 * x / (1.0 + x * x); };
  auto fpp = [](double x) {
    double d = 1.0 + x * x;
    return 2.0 * (1.0 - x * x) / (d * d);
  };

  // e^{-zeta} L1^{x,p} e^{zeta}(y): tilted generator action, via the exact
  // chain or a local grid discretization around the y-box
  auto tilted_L1 = [&](double x, double p, double y) {
    FastGenerator G;
    int iy = 0;
    if (m.is_chain()) {
      G = build_chain_generator(m.chain_rates,
                                std::get<FiniteSet>(m.fast_domain).states, x);
      for (int i = 0; i < G.size(); ++i)
        if (G.states(i) == y) iy = i;
    } else {
      GridSpec gs;
      double span = std::max(box.yhi - box.ylo, 1.0);
      gs.ymin = std::max(box.ylo - 2.0 * span,
                         std::holds_alternative<HalfLine>(m.fast_domain)
                             ? std::get<HalfLine>(m.fast_domain).lower
                             : box.ylo - 2.0 * span);
      gs.ymax = box.yhi + 6.0 * span;
      gs.n = 241;
      G = discretize_generator(m, x, p, gs);
      iy = static_cast<int>(std::lround((y - gs.ymin) / G.spacing));
      iy = std::clamp(iy, 0, G.size() - 1);
    }
    Eigen::VectorXd ez(G.size());
    for (int i = 0; i < G.size(); ++i) {
      double zv = zeta.zeta(G.states(i));
      if (zv > 700.0) throw NumericError("e^zeta overflow in tightness scan", zv);
      ez(i) = std::exp(zv);
    }
    double zi = zeta.zeta(G.states(iy));
    return (G.Q.row(iy) * ez)(0) / std::exp(zi);
  };

  std::vector<double> sups;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ArgumentError("epsilon > 0");
    double sup = -kInf;
    for (int ix = 0; ix < nx; ++ix) {
      double x = box.xlo + (box.xhi - box.xlo) * ix / (nx - 1);
      double fpx = fp(x);
      std::vector<double> ys;
      if (m.is_chain()) {
        ys = std::get<FiniteSet>(m.fast_domain).states;
      } else {
        for (int iy = 0; iy < ny; ++iy)
          ys.push_back(box.ylo + (box.yhi - box.ylo) * iy / (ny - 1));
      }
      for (double y : ys) {
        if (!m.contains_y(y)) continue;
        double s2 = c.sigma(x, y) * c.sigma(x, y);
        double term = c.b(x, y) * fpx + 0.5 * s2 * fpx * fpx +
                      eps * (c.b0(x, y) * fpx + 0.5 * s2 * fpp(x));
        if (!c.nu1.is_zero()) {
          auto g = [&](double z) {
            double k = c.k(x, y, z);
            double fdiff =
                (std::log(1.0 + (x + eps * k) * (x + eps * k)) -
                 std::log(1.0 + x * x)) / eps;
            return std::exp(fdiff) - 1.0 - fpx * k;
          };
          term += integrate(c.nu1, g);
        }
        term += tilted_L1(x, fpx, y);
        sup = std::max(sup, term);
      }
    }
    sups.push_back(sup);
  }
  return sups;
}

}  // namespace ldt
