// Command-line driver: scenario tables, Hamiltonian/rate/HJB grids,
// Monte Carlo estimates, and the acceptance suite.
//
// Exit codes: 0 success, 1 acceptance failure, 2 config error, 3 numeric
// failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldt/hjb.hpp"
#include "ldt/mc.hpp"
#include "ldt/output.hpp"
#include "ldt/rate.hpp"
#include "ldt/scenarios.hpp"
#include "ldt/verify.hpp"

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

// every key must be consumed; unknown keys are config errors
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double jget(const json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number())
    throw ConfigError("key '" + key + "' must be a number");
  return j[key].get<double>();
}

std::string jgets(const json& j, const std::string& key,
                  const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string())
    throw ConfigError("key '" + key + "' must be a string");
  return j[key].get<std::string>();
}

ldt::BnsParams bns_from(const json& j) {
  check_keys(j, {"scenario", "r", "a", "b", "x0", "y0", "K", "t"}, "bns params");
  ldt::BnsParams p;
  p.r = jget(j, "r", p.r);
  p.a = jget(j, "a", p.a);
  p.b = jget(j, "b", p.b);
  p.x0 = jget(j, "x0", p.x0);
  p.y0 = jget(j, "y0", p.y0);
  p.K = jget(j, "K", p.K);
  p.t = jget(j, "t", p.t);
  p.validate();
  return p;
}

ldt::GeneParams gene_from(const json& j) {
  check_keys(j,
             {"scenario", "kappa1", "kappa_m1", "kappa2", "kappa3", "x0", "y0",
              "t"},
             "gene params");
  ldt::GeneParams p;
  p.kappa1 = jget(j, "kappa1", p.kappa1);
  p.kappa_m1 = jget(j, "kappa_m1", p.kappa_m1);
  p.kappa2 = jget(j, "kappa2", p.kappa2);
  p.kappa3 = jget(j, "kappa3", p.kappa3);
  p.x0 = jget(j, "x0", p.x0);
  p.y0 = jget(j, "y0", p.y0);
  p.t = jget(j, "t", p.t);
  p.validate();
  return p;
}

std::vector<std::string> config_echo(const json& j, std::uint64_t seed) {
  std::vector<std::string> meta;
  meta.push_back("seed=" + std::to_string(seed));
  for (auto it = j.begin(); it != j.end(); ++it)
    meta.push_back(it.key() + "=" + it.value().dump());
  return meta;
}

std::string out_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  std::filesystem::create_directories(dir);
  return dir + "/" + name;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_hamiltonian(const json& cfg, std::uint64_t seed, const std::string& out,
                    bool svg) {
  check_keys(cfg,
             {"scenario", "params", "p_min", "p_max", "p_steps", "x_min",
              "x_max", "x_steps", "backend", "grid"},
             "hamiltonian config");
  std::string scen = jgets(cfg, "scenario", "bns");
  json pj = cfg.contains("params") ? cfg["params"] : json::object();
  std::string backend = jgets(cfg, "backend", "closed-form");

  ldt::HamiltonianHandle h;
  if (scen == "bns") {
    ldt::BnsParams p = bns_from(pj);
    if (backend == "matrix-eigen") {
      json gj = cfg.contains("grid") ? cfg["grid"] : json::object();
      check_keys(gj, {"ymin", "ymax", "n"}, "grid");
      ldt::GridSpec gs{jget(gj, "ymin", 0.0), jget(gj, "ymax", 40.0),
                       int(jget(gj, "n", 600))};
      h = ldt::make_matrix_eigen_handle(ldt::bns_model(p), gs,
                                        -std::sqrt(2.0 * p.b),
                                        std::sqrt(2.0 * p.b), true);
    } else {
      h = ldt::bns_handle(p.a, p.b);
    }
  } else if (scen == "gene") {
    ldt::GeneParams p = gene_from(pj);
    h = backend == "printed" ? ldt::gene_handle_printed(p) : ldt::gene_handle(p);
  } else {
    throw ConfigError("scenario must be 'bns' or 'gene'");
  }

  int np = int(jget(cfg, "p_steps", 41));
  int nx = int(jget(cfg, "x_steps", 1));
  double plo = jget(cfg, "p_min", -1.0), phi = jget(cfg, "p_max", 1.0);
  double xlo = jget(cfg, "x_min", 1.0), xhi = jget(cfg, "x_max", 1.0);
  if (np < 1 || nx < 1) throw ConfigError("p_steps and x_steps must be >= 1");

  ldt::Table t;
  t.meta = config_echo(cfg, seed);
  t.columns = {"x", "p", "value", "backend"};
  ldt::Table chart;
  chart.columns = {"p", "H"};
  for (int i = 0; i < nx; ++i) {
    double x = nx == 1 ? xlo : xlo + (xhi - xlo) * i / (nx - 1);
    for (int k = 0; k < np; ++k) {
      double p = np == 1 ? plo : plo + (phi - plo) * k / (np - 1);
      double v = ldt::hamiltonian_eval(h, x, p);
      t.rows.push_back({x, p, v, backend == "matrix-eigen" ? 1.0 : 0.0});
      if (i == 0) chart.rows.push_back({p, v});
    }
  }
  ldt::write_csv(t, out_path(out, "hamiltonian.csv"));
  if (svg)
    ldt::write_svg_chart(chart, out_path(out, "hamiltonian.svg"),
                         "H(x, p), " + scen);
  return 0;
}

int cmd_rate(const json& cfg, std::uint64_t seed, const std::string& out,
             bool svg) {
  check_keys(cfg,
             {"scenario", "params", "q_min", "q_max", "q_steps", "x_min",
              "x_max", "x_steps", "t", "x0"},
             "rate config");
  if (jgets(cfg, "scenario", "bns") != "bns")
    throw ConfigError("rate tables are available for the bns scenario");
  ldt::BnsParams p =
      bns_from(cfg.contains("params") ? cfg["params"] : json::object());
  double t = jget(cfg, "t", 1.0), x0 = jget(cfg, "x0", 0.0);
  ldt::HamiltonianHandle h = ldt::bns_handle(p.a, p.b);

  ldt::Table tq;
  tq.meta = config_echo(cfg, seed);
  tq.columns = {"q", "Lbar"};
  int nq = int(jget(cfg, "q_steps", 81));
  double qlo = jget(cfg, "q_min", -2.0), qhi = jget(cfg, "q_max", 2.0);
  for (int i = 0; i < nq; ++i) {
    double q = nq == 1 ? qlo : qlo + (qhi - qlo) * i / (nq - 1);
    tq.rows.push_back({q, ldt::bns_rate(q, p.a, p.b)});
  }
  ldt::write_csv(tq, out_path(out, "rate_q.csv"));

  ldt::Table tx;
  tx.meta = tq.meta;
  tx.columns = {"x", "I"};
  int nx = int(jget(cfg, "x_steps", 81));
  double xlo = jget(cfg, "x_min", -2.0), xhi = jget(cfg, "x_max", 2.0);
  for (int i = 0; i < nx; ++i) {
    double x = nx == 1 ? xlo : xlo + (xhi - xlo) * i / (nx - 1);
    tx.rows.push_back({x, ldt::rate_xfree(h, x0, t, x)});
  }
  ldt::write_csv(tx, out_path(out, "rate_x.csv"));
  if (svg) ldt::write_svg_chart(tx, out_path(out, "rate_x.svg"), "I(x; x0, t)");
  return 0;
}

int cmd_hjb(const json& cfg, std::uint64_t seed, const std::string& out,
            bool svg) {
  check_keys(cfg,
             {"scenario", "params", "initial", "beta", "c", "xmin", "xmax",
              "n", "t"},
             "hjb config");
  if (jgets(cfg, "scenario", "bns") != "bns")
    throw ConfigError("the hjb solver front end supports the bns scenario");
  ldt::BnsParams p =
      bns_from(cfg.contains("params") ? cfg["params"] : json::object());
  ldt::HamiltonianHandle h = ldt::bns_handle(p.a, p.b);

  ldt::GridFunction h0;
  h0.xmin = jget(cfg, "xmin", -4.0);
  h0.xmax = jget(cfg, "xmax", 4.0);
  h0.n = int(jget(cfg, "n", 801));
  h0.values.resize(h0.n);
  std::string init = jgets(cfg, "initial", "gaussian-bump");
  double max_slope;
  if (init == "gaussian-bump") {
    for (int i = 0; i < h0.n; ++i)
      h0.values[i] = std::exp(-h0.x(i) * h0.x(i));
    max_slope = std::sqrt(2.0 / std::exp(1.0));
  } else if (init == "capped-linear") {
    double beta = jget(cfg, "beta", 0.5), cap = jget(cfg, "c", 1.0);
    for (int i = 0; i < h0.n; ++i)
      h0.values[i] = std::clamp(beta * h0.x(i), -cap, cap);
    max_slope = std::abs(beta);
  } else {
    throw ConfigError("initial must be 'gaussian-bump' or 'capped-linear'");
  }

  ldt::SchemeConfig sc;
  sc.slope_cap = std::min(1.05 * max_slope + 1e-6, 0.95 * h.p_hi);
  sc.alpha = 1.2 * ldt::estimate_alpha(h, h0.xmin, h0.xmax, sc.slope_cap);
  sc.dt = 0.45 * h0.dx() / sc.alpha;
  ldt::SolveStats st;
  ldt::GridFunction u = ldt::solve_cauchy(h, h0, jget(cfg, "t", 1.0), sc, &st);

  ldt::Table t;
  t.meta = config_echo(cfg, seed);
  t.meta.push_back("clamp_events=" + std::to_string(st.clamp_events));
  t.columns = {"x", "u"};
  for (int i = 0; i < u.n; ++i) t.rows.push_back({u.x(i), u.values[i]});
  ldt::write_csv(t, out_path(out, "hjb.csv"));
  if (svg) ldt::write_svg_chart(t, out_path(out, "hjb.svg"), "u0(t, x)");
  return 0;
}

int cmd_simulate(const json& cfg, std::uint64_t seed, const std::string& out,
                 bool svg) {
  check_keys(cfg,
             {"scenario", "params", "epsilons", "t", "dt_factor", "n_paths",
              "h", "threshold", "workers"},
             "simulate config");
  std::string scen = jgets(cfg, "scenario", "bns");
  json pj = cfg.contains("params") ? cfg["params"] : json::object();
  double t = jget(cfg, "t", 1.0);
  double dt_factor = jget(cfg, "dt_factor", 20.0);
  int n_paths = int(jget(cfg, "n_paths", 10000));
  int workers = int(jget(cfg, "workers", 0));
  std::string hname = jgets(cfg, "h", "exp-neg-x2");
  if (hname != "exp-neg-x2" && hname != "neg-x2" && hname != "zero")
    throw ConfigError("h must be one of exp-neg-x2, neg-x2, zero");
  auto hfun = [hname](double x) {
    if (hname == "exp-neg-x2") return std::exp(-x * x);
    if (hname == "neg-x2") return -x * x;
    return 0.0;
  };
  std::vector<double> epsilons = {0.4, 0.2, 0.1};
  if (cfg.contains("epsilons")) {
    if (!cfg["epsilons"].is_array()) throw ConfigError("epsilons must be a list");
    epsilons = cfg["epsilons"].get<std::vector<double>>();
  }
  bool has_threshold = cfg.contains("threshold");
  double threshold = jget(cfg, "threshold", 0.0);

  ldt::Table tu, tt;
  tu.meta = config_echo(cfg, seed);
  tu.columns = {"epsilon", "u_hat", "stderr", "n_paths", "dt"};
  tt.meta = tu.meta;
  tt.columns = {"epsilon", "threshold", "log_prob_scaled", "n_hits"};

  for (double eps : epsilons) {
    ldt::SimConfig sim;
    sim.epsilon = eps;
    sim.t_end = t;
    sim.dt = eps / dt_factor;
    sim.n_paths = n_paths;
    sim.seed = seed;
    sim.workers = workers;
    ldt::TerminalSample s;
    if (scen == "bns") {
      s = ldt::simulate_bns(bns_from(pj), eps, sim);
    } else if (scen == "gene") {
      s = ldt::simulate_gene(gene_from(pj), eps, sim);
    } else {
      throw ConfigError("scenario must be 'bns' or 'gene'");
    }
    ldt::UEstimate ue = ldt::estimate_u_eps(s, hfun, eps);
    tu.rows.push_back({eps, ue.u_hat, ue.stderr_hat, double(n_paths), sim.dt});
    if (has_threshold) {
      ldt::TailEstimate te = ldt::estimate_tail(s, threshold, eps);
      tt.rows.push_back({eps, threshold, te.log_prob_scaled, double(te.n_hits)});
    }
  }
  ldt::write_csv(tu, out_path(out, "u_eps.csv"));
  if (has_threshold) ldt::write_csv(tt, out_path(out, "tail.csv"));
  if (svg) ldt::write_svg_chart(tu, out_path(out, "u_eps.svg"), "u_eps ladder");
  return 0;
}

int cmd_scenario(const std::string& which, const json& cfg, std::uint64_t seed,
                 const std::string& out, bool svg) {
  if (which == "bns") {
    check_keys(cfg, {"scenario", "params", "p_steps", "q_steps"},
               "scenario bns config");
    ldt::BnsParams p =
        bns_from(cfg.contains("params") ? cfg["params"] : json::object());
    ldt::Table t;
    t.meta = config_echo(cfg, seed);
    t.columns = {"p", "H", "q", "Lbar"};
    int n = int(jget(cfg, "p_steps", 81));
    double pe = 0.99 * std::sqrt(2.0 * p.b);
    for (int i = 0; i < n; ++i) {
      double pp = -pe + 2.0 * pe * i / (n - 1);
      double q = -2.0 + 4.0 * i / (n - 1);
      t.rows.push_back({pp, ldt::bns_hamiltonian(pp, p.a, p.b), q,
                        ldt::bns_rate(q, p.a, p.b)});
    }
    ldt::write_csv(t, out_path(out, "bns.csv"));
    if (std::exp(p.x0) < p.K) {
      ldt::Table ta;
      ta.meta = t.meta;
      ta.columns = {"K", "t", "otm_call_asymptote"};
      ta.rows.push_back({p.K, p.t, ldt::otm_call_asymptote(p)});
      ldt::write_csv(ta, out_path(out, "bns_call.csv"));
    }
    if (svg) {
      ldt::Table chart;
      chart.columns = {"p", "H"};
      for (auto& r : t.rows) chart.rows.push_back({r[0], r[1]});
      ldt::write_svg_chart(chart, out_path(out, "bns.svg"), "BNS Hamiltonian");
    }
    return 0;
  }
  if (which == "gene") {
    check_keys(cfg, {"scenario", "params", "p_min", "p_max", "p_steps", "x"},
               "scenario gene config");
    ldt::GeneParams p =
        gene_from(cfg.contains("params") ? cfg["params"] : json::object());
    double x = jget(cfg, "x", 1.0);
    int n = int(jget(cfg, "p_steps", 81));
    double plo = jget(cfg, "p_min", -2.0), phi = jget(cfg, "p_max", 2.0);
    ldt::Table t;
    t.meta = config_echo(cfg, seed);
    t.columns = {"p", "H_consistent", "H_printed", "H_pdmp"};
    bool sym = p.kappa1 == p.kappa_m1;
    for (int i = 0; i < n; ++i) {
      double pp = plo + (phi - plo) * i / (n - 1);
      t.rows.push_back({pp, ldt::gene_hamiltonian_consistent(x, pp, p),
                        ldt::gene_hamiltonian_printed(x, pp, p),
                        sym ? ldt::gene_pdmp_hamiltonian(x, pp, p)
                            : std::numeric_limits<double>::quiet_NaN()});
    }
    ldt::write_csv(t, out_path(out, "gene.csv"));
    if (svg)
      ldt::write_svg_chart(t, out_path(out, "gene.svg"),
                           "Gene Hamiltonians at x=" + ldt::format_double(x));
    return 0;
  }
  throw ConfigError("scenario must be 'bns' or 'gene'");
}

int cmd_verify(std::uint64_t seed, const std::string& out,
               const std::string& check, double tol_scale, int workers) {
  ldt::VerifyOptions opt;
  opt.seed = seed;
  opt.tol_scale = tol_scale;
  opt.workers = workers;
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    opt.out_dir = out;
  }
  if (!check.empty()) {
    const auto& names = ldt::acceptance_check_names();
    if (std::find(names.begin(), names.end(), check) == names.end())
      throw ConfigError("unknown check '" + check + "'");
    opt.only = {check};
  }
  auto results = ldt::run_acceptance(opt);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %2d %-20s (%.1fs) %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"large-deviation toolkit for two time-scale jump-diffusions"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path, out_dir, check_name, scenario_kind;
  std::uint64_t seed = 17;
  bool svg = false;
  double tol_scale = 1.0;
  int workers = 0;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", svg, "emit SVG charts");

  auto* c_h = app.add_subcommand("hamiltonian", "tabulate H(x, p)");
  auto* c_r = app.add_subcommand("rate", "tabulate Lbar(q) and I(x)");
  auto* c_j = app.add_subcommand("hjb", "solve the limiting Cauchy problem");
  auto* c_s = app.add_subcommand("simulate", "pre-limit Monte Carlo");
  auto* c_sc = app.add_subcommand("scenario", "worked-example tables");
  c_sc->add_option("kind", scenario_kind, "bns or gene")->required();
  auto* c_v = app.add_subcommand("verify", "run the acceptance suite");
  c_v->add_option("--check", check_name, "run a single named check");
  c_v->add_option("--tolerance-scale", tol_scale,
                  "multiply all tolerances (testing hook)");
  c_v->add_option("--workers", workers, "worker threads (0: auto)");

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    if (c_v->parsed()) return cmd_verify(seed, out_dir, check_name, tol_scale, workers);
    if (c_h->parsed()) return cmd_hamiltonian(cfg, seed, out_dir, svg);
    if (c_r->parsed()) return cmd_rate(cfg, seed, out_dir, svg);
    if (c_j->parsed()) return cmd_hjb(cfg, seed, out_dir, svg);
    if (c_s->parsed()) return cmd_simulate(cfg, seed, out_dir, svg);
    if (c_sc->parsed()) return cmd_scenario(scenario_kind, cfg, seed, out_dir, svg);
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ldt::ArgumentError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ldt::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
