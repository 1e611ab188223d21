#include "wkin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wkin/constants.hpp"
#include "wkin/controlmap.hpp"
#include "wkin/norms.hpp"

namespace wkin {

namespace {

constexpr std::uint64_t kPreflightSeed = 0x5f356495u;

double sup_abs(const Field& W) {
  double s = 0;
  for (double w : W) s = std::max(s, std::fabs(w));
  return s;
}

void require_finite(const Field& W, int step) {
  for (double w : W)
    if (!std::isfinite(w))
      throw std::runtime_error("solve: non-finite field at step " +
                               std::to_string(step));
}

void check_args(const CollisionConfig& cfg, const Field& W_in,
                const SolveOpts& opts) {
  if (cfg.lat == nullptr || cfg.pot == nullptr)
    throw std::invalid_argument("solve: lattice and potential required");
  if (long(W_in.size()) != cfg.lat->size())
    throw std::invalid_argument("solve: initial data length mismatch");
  if (!(opts.Tstar > 0.0) || opts.n_steps < 1)
    throw std::invalid_argument("solve: need Tstar > 0 and n_steps >= 1");
  if (!(opts.picard_tol > 0.0) || opts.picard_max_iter < 1)
    throw std::invalid_argument("solve: bad Picard parameters");
}

NodeDiag node_diag(const Lattice& lat, const Field& W, int iters,
                   double residual) {
  NodeDiag d;
  Functionals f = functionals(lat, W);
  d.mass = f.mass;
  d.energy = f.energy;
  d.sup = sup_abs(W);
  d.im_max = 0.0;  // the direct representation is real term by term
  d.wmin = *std::min_element(W.begin(), W.end());
  d.wmax = *std::max_element(W.begin(), W.end());
  d.picard_iters = iters;
  d.residual = residual;
  return d;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// (RHS - LHS) / RHS with the empty-window and unbounded cases pinned
double margin(double lhs, double rhs) {
  if (!std::isfinite(rhs)) return 1.0;
  if (rhs <= 0.0) return lhs > 0.0 ? -1.0 : 0.0;
  return (rhs - lhs) / rhs;
}

}  // namespace

Field initial_constant(const Lattice& lat, double c) {
  return Field(lat.size(), c);
}

Field initial_gaussian(const Lattice& lat, double amp, double width) {
  if (!(width > 0.0))
    throw std::invalid_argument("initial_gaussian: width must be positive");
  const int d = lat.dim();
  // per-axis periodization; |m| <= 3 images saturate double precision for
  // the widths in use
  auto prof = [width](double t) {
    double s = 0;
    for (int m = -3; m <= 3; ++m)
      s += std::exp(-0.5 * (t - m) * (t - m) / (width * width));
    return s;
  };
  const double p0 = prof(0.0);
  Field W(lat.size());
  for (long k = 0; k < lat.size(); ++k) {
    double v = amp;
    for (int a = 0; a < d; ++a) v *= prof(lat.kfrac(k, a)) / p0;
    W[k] = v;
  }
  return W;
}

Field initial_thermal(const Lattice& lat, double mu) {
  Field W(lat.size());
  for (long k = 0; k < lat.size(); ++k) {
    double o = lat.omega(k) - mu;
    W[k] = 1.0 / std::sqrt(1.0 + o * o);
  }
  return W;
}

Field initial_bandlimited(const Lattice& lat, std::uint64_t seed, int band,
                          double amp) {
  if (band < 0 || !(amp > 0.0))
    throw std::invalid_argument("initial_bandlimited: band >= 0, amp > 0");
  const int d = lat.dim();
  Rng rng(seed);
  std::vector<long> sites;
  std::vector<double> coef;
  std::vector<int> c(d);
  double norm = 0;
  for (long y = 0; y < lat.size(); ++y) {
    lat.coords(y, c.data());
    int linf = 0;
    for (int a = 0; a < d; ++a) linf = std::max(linf, std::abs(c[a]));
    if (linf == 0 || linf > band) continue;
    if (y > lat.neg(y)) continue;  // one draw per +/- pair
    double a = rng.uniform(-1.0, 1.0);
    sites.push_back(y);
    coef.push_back(a);
    norm += std::fabs(a);
  }
  Field W(lat.size(), amp);
  if (norm == 0.0) return W;
  const double twopi = 2.0 * std::numbers::pi;
  for (long k = 0; k < lat.size(); ++k) {
    double s = 0;
    for (size_t i = 0; i < sites.size(); ++i)
      s += coef[i] * std::cos(twopi * double(lat.dot(k, sites[i])) /
                              double(lat.side()));
    W[k] = amp * (1.0 + 0.9 * s / norm);  // stays inside amp * [0.1, 1.9]
  }
  return W;
}

Field initial_file(const Lattice& lat, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("initial data: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("initial data: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d") || !j.contains("L") ||
      !j.contains("values"))
    throw std::invalid_argument("initial data: file needs {d, L, values}");
  if (j["d"].get<int>() != lat.dim() || j["L"].get<int>() != lat.side())
    throw std::invalid_argument("initial data: file lattice mismatch");
  Field vals = j["values"].get<Field>();
  if (long(vals.size()) != lat.size())
    throw std::invalid_argument("initial data: values length mismatch");
  for (double v : vals)
    if (!std::isfinite(v))
      throw std::invalid_argument("initial data: non-finite entry");
  return vals;
}

Trajectory solve(const CollisionConfig& cfg, const Field& W_in,
                 const SolveOpts& opts) {
  check_args(cfg, W_in, opts);
  const Lattice& lat = *cfg.lat;
  const long N = lat.size();
  const int n = opts.n_steps;
  const double h = opts.Tstar / n;

  Trajectory tr;
  tr.lat = cfg.lat;
  tr.times.resize(n + 1);
  for (int j = 0; j <= n; ++j) tr.times[j] = h * j;
  tr.fields.reserve(n + 1);
  tr.fields.push_back(W_in);
  tr.diag.resize(n + 1);
  tr.diag[0] = node_diag(lat, W_in, 0, 0.0);

  // per-node collision cache keyed by the window argument; a constant tau
  // hits every step, the memory window misses and recomputes the history
  struct Slot {
    double tau = std::numeric_limits<double>::quiet_NaN();
    Field C;
  };
  std::vector<Slot> cache(n + 1);
  auto history_C = [&](int j, double tau) -> const Field& {
    Slot& s = cache[j];
    if (!(s.tau == tau)) {
      s.C = collision_direct(cfg, tr.fields[j], tau);
      s.tau = tau;
    }
    return s.C;
  };

  for (int step = 1; step <= n; ++step) {
    const double Tn = tr.times[step];
    Field base = W_in;
    for (int j = 0; j < step; ++j) {
      const double wj = (j == 0) ? 0.5 : 1.0;
      const Field& Cj = history_C(j, cfg.model.tau(Tn, tr.times[j]));
      const double f = h * wj;
      for (long i = 0; i < N; ++i) base[i] += f * Cj[i];
    }

    const double tau_end = cfg.model.tau(Tn, Tn);
    // the memory window closes at the endpoint, leaving the update explicit
    const bool live = cfg.model.window(tau_end) > 0.0;

    Field W = tr.fields[step - 1];
    double damp = 1.0, prev_res = 0.0, res = 0.0;
    bool halved = false, converged = false;
    int iters = 0;
    for (int m = 0; m < opts.picard_max_iter; ++m) {
      Field Wnew = base;
      if (live) {
        Field Cn = collision_direct(cfg, W, tau_end);
        for (long i = 0; i < N; ++i) Wnew[i] += 0.5 * h * Cn[i];
      }
      require_finite(Wnew, step);
      res = 0.0;
      for (long i = 0; i < N; ++i)
        res = std::max(res, std::fabs(Wnew[i] - W[i]));
      if (damp == 1.0) {
        W = std::move(Wnew);
      } else {
        for (long i = 0; i < N; ++i) W[i] += damp * (Wnew[i] - W[i]);
      }
      ++iters;
      if (res <= opts.picard_tol) {
        converged = true;
        break;
      }
      if (m >= 1 && res > prev_res && !halved) {
        damp = 0.5;  // one-shot relaxation on the first residual increase
        halved = true;
      }
      prev_res = res;
    }
    if (!converged)
      throw std::runtime_error("solve: Picard stalled at step " +
                               std::to_string(step) + ", residual " +
                               short_num(res));
    tr.fields.push_back(std::move(W));
    tr.diag[step] = node_diag(lat, tr.fields.back(), iters, res);
  }
  return tr;
}

Trajectory solve_rk4(const CollisionConfig& cfg, const Field& W_in,
                     const SolveOpts& opts) {
  check_args(cfg, W_in, opts);
  if (cfg.model.tau_mode != TauMode::Constant)
    throw std::invalid_argument("solve_rk4: constant window only");
  const Lattice& lat = *cfg.lat;
  const long N = lat.size();
  const int n = opts.n_steps;
  const double h = opts.Tstar / n;
  const double T0 = cfg.model.T0;

  Trajectory tr;
  tr.lat = cfg.lat;
  tr.times.resize(n + 1);
  for (int j = 0; j <= n; ++j) tr.times[j] = h * j;
  tr.fields.reserve(n + 1);
  tr.fields.push_back(W_in);
  tr.diag.resize(n + 1);
  tr.diag[0] = node_diag(lat, W_in, 0, 0.0);

  Field stage(N);
  for (int step = 1; step <= n; ++step) {
    const Field& W = tr.fields[step - 1];
    Field k1 = collision_direct(cfg, W, T0);
    for (long i = 0; i < N; ++i) stage[i] = W[i] + 0.5 * h * k1[i];
    Field k2 = collision_direct(cfg, stage, T0);
    for (long i = 0; i < N; ++i) stage[i] = W[i] + 0.5 * h * k2[i];
    Field k3 = collision_direct(cfg, stage, T0);
    for (long i = 0; i < N; ++i) stage[i] = W[i] + h * k3[i];
    Field k4 = collision_direct(cfg, stage, T0);
    Field next = W;
    for (long i = 0; i < N; ++i)
      next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    require_finite(next, step);
    tr.fields.push_back(std::move(next));
    tr.diag[step] = node_diag(lat, tr.fields.back(), 0, 0.0);
  }
  return tr;
}

PreflightReport preflight(const CollisionConfig& cfg, const Field& W_in,
                          const SolveOpts& opts) {
  if (cfg.lat == nullptr || cfg.pot == nullptr)
    throw std::invalid_argument("preflight: lattice and potential required");
  const Lattice& lat = *cfg.lat;
  const Model& md = cfg.model;
  PreflightReport rep;

  const double tbar = md.tau_mode == TauMode::Memory ? opts.Tstar : md.T0;
  const double lb = L_beta(md.lambda, tbar, md.beta);
  rep.conditions.push_back(
      {"L >= L_beta", double(lat.side()), lb, double(lat.side()) >= lb});

  const double fin =
      f_norm_estimate(lat, WeightFns(lat.side(), md.beta), W_in,
                      make_sample_grid(lat, 1000, kPreflightSeed));
  if (lat.dim() >= 3) {
    const Constants ct = constants_table(lat.dim(), md.beta);
    const double mvv = mv(*cfg.pot);
    const double rhs2 = 1.0 / (ct.c1 * mvv * (1.0 + fin) * (1.0 + fin));
    rep.conditions.push_back(
        {"Tstar contraction window", opts.Tstar, rhs2, opts.Tstar < rhs2});
    const double rhs3 = 1.0 / (2.0 * ct.c2 * mvv * fin);
    rep.conditions.push_back(
        {"Tstar comparison window", opts.Tstar, rhs3, opts.Tstar <= rhs3});
  } else {
    // no constant table below three dimensions: the windows are empty
    rep.conditions.push_back(
        {"Tstar contraction window", opts.Tstar, 0.0, false});
    rep.conditions.push_back(
        {"Tstar comparison window", opts.Tstar, 0.0, false});
  }
  rep.all_pass = true;
  for (const auto& c : rep.conditions) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

MonitorReport bound_monitor(const CollisionConfig& cfg, const Trajectory& traj,
                            int samples, std::uint64_t seed) {
  if (cfg.lat == nullptr || cfg.pot == nullptr || traj.lat == nullptr)
    throw std::invalid_argument("bound_monitor: incomplete configuration");
  if (traj.times.empty() || traj.fields.size() != traj.times.size())
    throw std::invalid_argument("bound_monitor: empty trajectory");
  const Lattice& lat = *cfg.lat;
  if (lat.dim() < 3)
    throw std::invalid_argument("bound_monitor: d >= 3 required");
  const int nn = int(traj.times.size());
  const Constants ct = constants_table(lat.dim(), cfg.model.beta);
  const WeightFns wf(lat.side(), cfg.model.beta);
  const SampleGrid grid = make_sample_grid(lat, samples, seed);

  std::vector<double> fdiag(nn);
  for (int t = 0; t < nn; ++t)
    fdiag[t] = f_norm_estimate(lat, wf, traj.fields[t], grid);

  // off-diagonal two-time norms on a coarse node subset
  const int npick = std::min(nn, 5);
  std::vector<int> pick(npick);
  for (int i = 0; i < npick; ++i)
    pick[i] = npick == 1 ? 0 : int(std::lround(double(i) * (nn - 1) /
                                               (npick - 1)));
  TimedEval F2 = make_traj_feval(traj);
  const int d = lat.dim();
  std::vector<double> foff;   // flattened pick x pick, diagonal skipped as 0
  foff.assign(npick * npick, 0.0);
  for (int a = 0; a < npick; ++a)
    for (int b = 0; b < npick; ++b) {
      if (pick[a] == pick[b]) continue;
      SampleEval se = [&, a, b](int n, const NormSample& s) {
        cplx zeta[8];
        for (int ax = 0; ax < d; ++ax)
          zeta[ax] = std::polar(s.R[ax], 2.0 * std::numbers::pi * s.u[ax]);
        return F2(n, pick[a], pick[b], zeta, s.kp, s.sigma, s.x);
      };
      foff[a * npick + b] = max_norm_estimate(lat, wf, se, grid);
    }

  const double W0sup = sup_abs(traj.fields[0]);
  const double F_in = fdiag[0];
  const double n16sq = cfg.pot->norm16 * cfg.pot->norm16;
  const double mvv = mv(*cfg.pot);

  MonitorReport rep;
  rep.worst_sup = rep.worst_fnorm = rep.worst_endpoint = 1.0;
  double integral = 0.0;
  double run_max = fdiag[0];
  for (int t = 0; t < nn; ++t) {
    if (t > 0)
      integral += 0.5 * (traj.times[t] - traj.times[t - 1]) *
                  (fdiag[t] + fdiag[t - 1]);
    run_max = std::max(run_max, fdiag[t]);
    double pair_max = run_max;
    for (int a = 0; a < npick; ++a)
      for (int b = 0; b < npick; ++b)
        if (pick[a] <= t && pick[b] <= t)
          pair_max = std::max(pair_max, foff[a * npick + b]);

    MonitorRow row;
    row.time = traj.times[t];
    row.sup_margin = margin(sup_abs(traj.fields[t]),
                            W0sup * std::exp(ct.c3 * n16sq * integral));
    const double disc = 1.0 - ct.c2 * mvv * F_in * traj.times[t];
    const double rhs_f =
        disc > 0.0 ? F_in / std::sqrt(disc)
                   : std::numeric_limits<double>::infinity();
    row.fnorm_margin = margin(pair_max, rhs_f);
    row.endpoint_margin =
        margin(sobolev_norm_sup(lat, traj.fields[t], 1.0 / 3.0),
               2.0 / std::sqrt(3.0) * F_in);
    rep.worst_sup = std::min(rep.worst_sup, row.sup_margin);
    rep.worst_fnorm = std::min(rep.worst_fnorm, row.fnorm_margin);
    rep.worst_endpoint = std::min(rep.worst_endpoint, row.endpoint_margin);
    rep.rows.push_back(row);
  }
  rep.any_negative = rep.worst_sup < 0.0 || rep.worst_fnorm < 0.0 ||
                     rep.worst_endpoint < 0.0;
  return rep;
}

TauCompareReport compare_tau(const CollisionConfig& cfg, const Field& W_in,
                             const std::vector<double>& lambdas, double T0,
                             const SolveOpts& opts) {
  if (cfg.lat == nullptr || cfg.pot == nullptr)
    throw std::invalid_argument("compare_tau: lattice and potential required");
  const Lattice& lat = *cfg.lat;
  if (lat.dim() < 3)
    throw std::invalid_argument("compare_tau: d >= 3 required");
  if (lambdas.empty())
    throw std::invalid_argument("compare_tau: empty lambda list");

  TauCompareReport rep;
  rep.p_d = constants_table(lat.dim(), cfg.model.beta).p_d;
  bool cert = true;
  for (double lam : lambdas) {
    TauCompareRow row;
    row.lambda = lam;
    try {
      if (!(lam > 0.0))
        throw std::invalid_argument("compare_tau: lambda must be positive");
      CollisionConfig ca = cfg, cb = cfg;
      ca.model.lambda = cb.model.lambda = lam;
      if (T0 > 0.0) {
        cb.model.tau_mode = TauMode::Constant;
        cb.model.T0 = T0;
      }  // otherwise both legs share cfg's window: the degenerate check
      Trajectory ta = solve(ca, W_in, opts);
      Trajectory tb = solve(cb, W_in, opts);
      double dsup = 0.0, dsob = 0.0;
      Field diff(lat.size());
      for (size_t nd = 0; nd < ta.fields.size(); ++nd) {
        for (long i = 0; i < lat.size(); ++i)
          diff[i] = ta.fields[nd][i] - tb.fields[nd][i];
        dsup = std::max(dsup, sup_abs(diff));
        dsob = std::max(dsob, sobolev_norm_sup(lat, diff, 1.0 / 3.0));
      }
      row.d_sup = dsup;
      row.d_sob = dsob;
      row.e_beta = error_term(lat.dim(), cfg.model.beta, lam,
                              TauSpec{ca.model.tau_mode, ca.model.T0},
                              TauSpec{cb.model.tau_mode, cb.model.T0},
                              opts.Tstar);
      const double wa =
          ca.model.tau_mode == TauMode::Memory ? opts.Tstar : ca.model.T0;
      const double wb =
          cb.model.tau_mode == TauMode::Memory ? opts.Tstar : cb.model.T0;
      if (double(lat.side()) <
          L_beta(lam, std::max(wa, wb), cfg.model.beta))
        cert = false;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      cert = false;
    }
    rep.rows.push_back(row);
  }
  rep.regime_certified = cert;

  // least-squares slope of log D against log lambda
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const TauCompareRow& r : rep.rows)
    if (r.ok && r.d_sup > 0.0 && r.lambda > 0.0) {
      double x = std::log(r.lambda), y = std::log(r.d_sup);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  rep.fitted_slope =
      m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return rep;
}

}  // namespace wkin
