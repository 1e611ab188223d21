#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wkin/bilinear.hpp"
#include "wkin/config.hpp"
#include "wkin/constants.hpp"
#include "wkin/controlmap.hpp"
#include "wkin/report.hpp"
#include "wkin/rng.hpp"
#include "wkin/weights.hpp"

namespace {

using namespace wkin;
using nlohmann::json;

struct Opts {
  std::string config_path;
  std::string out_dir;     // overrides output.dir when set
  std::string format;      // overrides output.formats when set
  std::uint64_t seed = 1;
  int threads = 0;
};

bool wants(const ExperimentConfig& cfg, const std::string& fmt) {
  for (const std::string& f : cfg.formats)
    if (f == fmt) return true;
  return false;
}

void apply_overrides(ExperimentConfig& cfg, const Opts& o) {
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.format.empty()) cfg.formats = {o.format};
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
}

ExperimentConfig require_config(const Opts& o) {
  if (o.config_path.empty())
    throw std::invalid_argument("missing --config PATH");
  ExperimentConfig cfg = load_config(o.config_path);
  return cfg;
}

std::string run_dir_for(const ExperimentConfig& cfg, const Opts& o) {
  return make_run_dir(cfg.out_dir, config_hash(cfg) + "-s" +
                                       std::to_string(o.seed));
}

Field random_field(const Lattice& lat, Rng& rng, double lo, double hi) {
  Field W(lat.size());
  for (double& w : W) w = rng.uniform(lo, hi);
  return W;
}

Field random_symmetric_sites(const Lattice& lat, Rng& rng) {
  Field g(lat.size());
  for (double& v : g) v = rng.uniform(-1.0, 1.0);
  Field V(lat.size());
  for (long y = 0; y < lat.size(); ++y) V[y] = 0.5 * (g[y] + g[lat.neg(y)]);
  return V;
}

// ---------------------------------------------------------------- solve ----

int cmd_solve(const Opts& o) {
  ExperimentConfig cfg = require_config(o);
  const std::string echo = config_echo(cfg);
  apply_overrides(cfg, o);
  const Lattice lat = build_lattice(cfg);
  const Model model = build_model(cfg);
  const Potential pot = build_potential(cfg, lat);
  const Field W_in = build_initial(cfg, lat);
  const CollisionConfig ccfg{&lat, &pot, model, {}};
  const std::string dir = run_dir_for(cfg, o);

  const PreflightReport pf = preflight(ccfg, W_in, cfg.solve);
  for (const PreflightCondition& c : pf.conditions)
    if (!c.pass)
      std::printf("warning: %s fails (lhs %s, rhs %s)\n", c.name.c_str(),
                  num_str(c.lhs).c_str(), num_str(c.rhs).c_str());

  const Trajectory traj = solve(ccfg, W_in, cfg.solve);

  write_file(dir + "/config.json", echo + "\n");
  if (wants(cfg, "csv")) write_file(dir + "/trajectory.csv", trajectory_csv(traj));
  if (wants(cfg, "json")) {
    write_file(dir + "/trajectory.json",
               trajectory_header_json(echo, lat, traj, o.seed));
    write_file(dir + "/fields.json", field_dump_json(lat, traj, cfg.nodes));
    write_file(dir + "/preflight.json", preflight_json(pf));
    if (cfg.d >= 3) {
      // the weight norms behind the monitored bounds exist only for d >= 3
      const MonitorReport mon = bound_monitor(ccfg, traj, cfg.samples, o.seed);
      write_file(dir + "/monitor.json", monitor_json(mon));
    } else {
      write_file(dir + "/monitor.json",
                 "{\n  \"note\": \"bound monitor needs d >= 3\"\n}\n");
    }
  }
  const NodeDiag& last = traj.diag.back();
  std::printf("solve: %d steps to T* = %s, mass %s, sup %s, im_max %s\n",
              traj.steps(), num_str(traj.times.back()).c_str(),
              num_str(last.mass).c_str(), num_str(last.sup).c_str(),
              num_str(last.im_max).c_str());
  if (!pf.all_pass)
    std::printf("note: theorem hypotheses not all satisfied, see preflight\n");
  std::printf("run dir: %s\n", dir.c_str());
  return 0;
}

// --------------------------------------------------------------- verify ----

json suite_colG(const ExperimentConfig& cfg, const Opts& o, bool& pass) {
  const double tol = 1e-10;
  double worst = 0;
  int checked = 0;
  Rng root(o.seed);
  for (int d = 1; d <= 3; ++d)
    for (int L = 2; L <= 3; ++L) {
      Lattice lat(d, L, cfg.c0);
      Rng rng = root.fork(std::uint64_t(16 * d + L));
      for (int rep = 0; rep < cfg.samples; ++rep) {
        const Potential pot =
            make_potential_values(lat, random_symmetric_sites(lat, rng));
        const Field W = random_field(lat, rng, 0.1, 1.5);
        Model m = build_model(cfg);
        const CollisionConfig ccfg{&lat, &pot, m, {}};
        const double s = rng.uniform(-3.0, 3.0);
        const CField direct = collision_kernel_s(ccfg, W, s);
        const CField fast = bilinear_kernel_s_fast(ccfg, W, s);
        double scale = 0;
        for (long k = 0; k < lat.size(); ++k)
          scale = std::max(scale, std::abs(direct[k]));
        for (long k = 0; k < lat.size(); ++k)
          worst = std::max(worst,
                           std::abs(direct[k] - fast[k]) / std::max(scale, 1e-30));
        ++checked;
      }
    }
  pass = worst <= tol;
  return {{"suite", "colG"},     {"cases", checked},
          {"max_rel_diff", worst}, {"tolerance", tol},
          {"pass", pass}};
}

json suite_fevo(const ExperimentConfig& cfg, const Opts& o, bool& pass) {
  const Lattice lat = build_lattice(cfg);
  const Model model = build_model(cfg);
  const Potential pot = build_potential(cfg, lat);
  const Field W_in = build_initial(cfg, lat);
  const CollisionConfig ccfg{&lat, &pot, model, {}};
  const Trajectory traj = solve(ccfg, W_in, cfg.solve);
  Rng rng(o.seed);
  std::vector<OperatorQuery> queries;
  const int n_nodes = int(traj.times.size());
  for (int i = 0; i < cfg.samples; ++i) {
    OperatorQuery q;
    q.n = 1 + int(rng.below(2));
    q.t1 = int(rng.below(std::uint64_t(n_nodes)));
    q.t2 = int(rng.below(std::uint64_t(n_nodes)));
    q.X.R.resize(lat.dim());
    q.X.u.resize(lat.dim());
    for (int a = 0; a < lat.dim(); ++a) {
      q.X.R[a] = rng.uniform(0.0, 2.0);
      q.X.u[a] = rng.uniform(0.0, 1.0);
    }
    q.X.kp = long(rng.below(std::uint64_t(lat.size())));
    q.X.sigma = rng.uniform() < 0.5 ? -1 : +1;
    q.X.x = long(rng.below(std::uint64_t(lat.size())));
    queries.push_back(q);
  }
  const FevoReport rep =
      fevo_residual(ccfg, traj, queries, cfg.solve.picard_tol);
  pass = rep.pass;
  return {{"suite", "fevo"},
          {"queries", rep.n_queries},
          {"max_residual", rep.max_residual},
          {"budget", rep.budget},
          {"pass", pass}};
}

json suite_weights(const ExperimentConfig& cfg, const Opts& o, bool& pass) {
  if (cfg.d < 3) {
    pass = false;
    return {{"suite", "weights"},
            {"pass", false},
            {"error", "weight sweep needs d >= 3 (estimates hold for "
                      "beta < 1 - 2/d)"}};
  }
  const WeightFns w(cfg.L, cfg.beta);
  const SweepReport rep =
      verify_weight_inequalities(w, cfg.d, cfg.samples, o.seed);
  pass = rep.all_pass;
  return json::parse(
      sweep_report_json(rep, cfg.d, cfg.L, cfg.beta, o.seed));
}

json suite_propagator(const ExperimentConfig& cfg, const Opts& o,
                      bool& pass) {
  const PropReport rep = verify_propagator_bounds(cfg.samples, o.seed);
  pass = rep.pass;
  return json::parse(prop_report_json(rep, o.seed));
}

json suite_conservation(const ExperimentConfig& cfg, const Opts& o,
                        bool& pass) {
  const Lattice lat = build_lattice(cfg);
  const Potential pot = build_potential(cfg, lat);
  const double tau0 = cfg.T0 > 0 ? cfg.T0 : cfg.solve.Tstar;
  double vmax = 0;
  for (double v : pot.Vhat) vmax = std::max(vmax, std::fabs(v));
  double worst = 0;
  Rng root(o.seed);
  for (const char* kind : {"dnls", "boson", "fermion"}) {
    Model m = build_model(cfg);
    const Model base = make_model(kind);
    m.q = base.q;
    m.theta = base.theta;
    const CollisionConfig ccfg{&lat, &pot, m, {}};
    Rng rng = root.fork(std::uint64_t(base.q * 2 + (base.theta > 0)));
    for (int i = 0; i < cfg.samples; ++i) {
      const Field W = random_field(lat, rng, 0.05, 2.0);
      const Field C = collision_direct(ccfg, W, tau0);
      double sum = 0, abs_sum = 0;
      for (double c : C) {
        sum += c;
        abs_sum += std::fabs(c);
      }
      // rounding floor for structurally-zero aggregates (a per-term bound on
      // the cancellation residue of the quartic sums)
      double wmax = 0;
      for (double w : W) wmax = std::max(wmax, w);
      const double floor = 64.0 * 2.3e-16 * m.window(tau0) * vmax * vmax *
                           std::max(wmax, 1.0) * std::max(wmax, 1.0) *
                           std::max(wmax, 1.0);
      if (abs_sum > 0)
        worst = std::max(worst, std::fabs(sum) /
                                    std::max(abs_sum, floor / 1e-12));
    }
  }
  pass = worst <= 1e-12;
  return {{"suite", "conservation"},
          {"models", 3},
          {"samples_per_model", cfg.samples},
          {"max_mass_drift_rel", worst},
          {"tolerance", 1e-12},
          {"pass", pass}};
}

int cmd_verify(const Opts& o) {
  ExperimentConfig cfg = require_config(o);
  const std::string echo = config_echo(cfg);
  apply_overrides(cfg, o);
  const std::string dir = run_dir_for(cfg, o);
  write_file(dir + "/config.json", echo + "\n");
  bool all_pass = true;
  json summary;
  summary["config"] = json::parse(echo);
  summary["seed"] = o.seed;
  json results = json::array();
  for (const std::string& name : cfg.suites) {
    bool pass = false;
    json rep;
    if (name == "colG") rep = suite_colG(cfg, o, pass);
    else if (name == "fevo") rep = suite_fevo(cfg, o, pass);
    else if (name == "weights") rep = suite_weights(cfg, o, pass);
    else if (name == "propagator") rep = suite_propagator(cfg, o, pass);
    else rep = suite_conservation(cfg, o, pass);
    rep["suite"] = name;
    write_file(dir + "/verify_" + name + ".json", rep.dump(2) + "\n");
    results.push_back({{"suite", name}, {"pass", pass}});
    std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", name.c_str());
    all_pass = all_pass && pass;
  }
  summary["results"] = results;
  summary["all_pass"] = all_pass;
  write_file(dir + "/verify_summary.json", summary.dump(2) + "\n");
  std::printf("verify: %zu suite(s), %s\n", cfg.suites.size(),
              all_pass ? "all pass" : "FAILURES");
  std::printf("run dir: %s\n", dir.c_str());
  return all_pass ? 0 : 3;
}

// ---------------------------------------------------------- compare-tau ----

int cmd_compare_tau(const Opts& o) {
  ExperimentConfig cfg = require_config(o);
  const std::string echo = config_echo(cfg);
  apply_overrides(cfg, o);
  if (cfg.ct_lambdas.empty())
    throw std::invalid_argument(
        o.config_path + ": compare-tau requires a compare_tau.lambdas list");
  const double T0 = cfg.ct_T0 > 0 ? cfg.ct_T0 : cfg.T0;
  if (!(T0 > 0))
    throw std::invalid_argument(
        o.config_path + ": compare-tau requires T0 (compare_tau.T0 or "
                        "model.tau.T0)");
  const Lattice lat = build_lattice(cfg);
  const Model model = build_model(cfg);
  const Potential pot = build_potential(cfg, lat);
  const Field W_in = build_initial(cfg, lat);
  const CollisionConfig ccfg{&lat, &pot, model, {}};
  const TauCompareReport rep =
      compare_tau(ccfg, W_in, cfg.ct_lambdas, T0, cfg.solve);
  const std::string dir = run_dir_for(cfg, o);
  write_file(dir + "/config.json", echo + "\n");
  if (wants(cfg, "csv"))
    write_file(dir + "/compare_tau.csv", tau_report_csv(rep));
  if (wants(cfg, "json"))
    write_file(dir + "/compare_tau.json", tau_report_json(rep, echo, o.seed));
  bool all_ok = true;
  for (const TauCompareRow& r : rep.rows) {
    std::printf("lambda %s  D_sup %s  D_sob %s  E_beta %s%s%s\n",
                num_str(r.lambda).c_str(), num_str(r.d_sup).c_str(),
                num_str(r.d_sob).c_str(), num_str(r.e_beta).c_str(),
                r.ok ? "" : "  FAILED: ", r.error.c_str());
    all_ok = all_ok && r.ok;
  }
  std::printf("fitted slope %s (p_d = %s)\n", num_str(rep.fitted_slope).c_str(),
              num_str(rep.p_d).c_str());
  if (!rep.regime_certified)
    std::printf("caveat: L < L_beta, theorem regime not certified\n");
  std::printf("run dir: %s\n", dir.c_str());
  return all_ok ? 0 : 3;
}

// ----------------------------------------------------- propagator table ----

int cmd_propagator(const Opts& o) {
  int draws = 40;
  std::string out = o.out_dir.empty() ? "runs" : o.out_dir;
  std::vector<std::string> formats = {"csv", "json"};
  if (!o.config_path.empty()) {
    ExperimentConfig cfg = load_config(o.config_path);
    draws = cfg.samples;
    if (o.out_dir.empty()) out = cfg.out_dir;
    formats = cfg.formats;
  }
  if (!o.format.empty()) formats = {o.format};
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
  const PropReport rep = verify_propagator_bounds(draws, o.seed);
  const std::string dir =
      make_run_dir(out, "propagator-s" + std::to_string(o.seed));
  for (const std::string& f : formats) {
    if (f == "csv") write_file(dir + "/propagator.csv", prop_report_csv(rep));
    if (f == "json")
      write_file(dir + "/propagator.json", prop_report_json(rep, o.seed));
  }
  std::printf("propagator: fitted delta %s, max ratios qi %s decay %s "
              "envelope %s, %s\n",
              num_str(rep.fitted_delta).c_str(),
              num_str(rep.max_ratio_qi).c_str(),
              num_str(rep.max_ratio_decay).c_str(),
              num_str(rep.max_ratio_envelope).c_str(),
              rep.pass ? "pass" : "FAIL");
  std::printf("run dir: %s\n", dir.c_str());
  return rep.pass ? 0 : 3;
}

// ------------------------------------------------------- constants table ----

int cmd_constants(const Opts& o) {
  std::vector<int> ds = {3, 4};
  std::vector<double> betas = {0.1, 0.2, 0.3};
  std::string out = o.out_dir.empty() ? "runs" : o.out_dir;
  std::vector<std::string> formats = {"csv", "json"};
  if (!o.config_path.empty()) {
    ExperimentConfig cfg = load_config(o.config_path);
    ds = {cfg.d};
    betas = {cfg.beta};
    if (o.out_dir.empty()) out = cfg.out_dir;
    formats = cfg.formats;
  }
  if (!o.format.empty()) formats = {o.format};
  const std::string dir = make_run_dir(out, "constants");
  for (const std::string& f : formats) {
    if (f == "csv") write_file(dir + "/constants.csv", constants_csv(ds, betas));
    if (f == "json")
      write_file(dir + "/constants.json", constants_json(ds, betas));
  }
  std::fputs(constants_csv(ds, betas).c_str(), stdout);
  std::printf("run dir: %s\n", dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice wave-kinetic toolkit"};
  app.require_subcommand(0, 1);
  Opts o;
  app.add_option("--config", o.config_path, "experiment config (JSON)");
  app.add_option("--out", o.out_dir, "output directory override");
  app.add_option("--seed", o.seed, "PRNG seed (splitmix64)");
  app.add_option("--threads", o.threads, "worker thread count");
  app.add_option("--format", o.format, "csv or json only")
      ->check(CLI::IsMember({"csv", "json"}));
  CLI::App* solve = app.add_subcommand("solve", "integrate the kinetic equation");
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  CLI::App* compare =
      app.add_subcommand("compare-tau", "memory vs constant window");
  CLI::App* prop = app.add_subcommand("propagator", "propagator bound sweep");
  CLI::App* consts = app.add_subcommand("constants", "estimate constants table");
  for (CLI::App* sc : {solve, verify, compare, prop, consts})
    sc->fallthrough();
  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed()) return cmd_solve(o);
    if (verify->parsed()) return cmd_verify(o);
    if (compare->parsed()) return cmd_compare_tau(o);
    if (prop->parsed()) return cmd_propagator(o);
    if (consts->parsed()) return cmd_constants(o);
    std::puts(app.help().c_str());
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "structural error: %s\n", e.what());
    return 2;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "structural error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
