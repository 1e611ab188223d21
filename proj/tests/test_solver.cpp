#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "wkin/constants.hpp"
#include "wkin/rng.hpp"
#include "wkin/solver.hpp"

using namespace wkin;

namespace {

const char* kKinds[] = {"dnls", "boson", "fermion"};

double sup_diff(const Field& a, const Field& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

double sup_abs(const Field& a) {
  double s = 0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

// cache-free mirror of the production Volterra loop, arithmetic in the same
// order so agreement can be checked bitwise
Field volterra_endpoint_reference(const CollisionConfig& cfg,
                                  const Field& W_in, const SolveOpts& opts) {
  const Lattice& lat = *cfg.lat;
  const long N = lat.size();
  const int n = opts.n_steps;
  const double h = opts.Tstar / n;
  std::vector<Field> fields{W_in};
  for (int step = 1; step <= n; ++step) {
    const double Tn = h * step;
    Field base = W_in;
    for (int j = 0; j < step; ++j) {
      Field Cj = collision_direct(cfg, fields[j], cfg.model.tau(Tn, h * j));
      const double f = h * ((j == 0) ? 0.5 : 1.0);
      for (long i = 0; i < N; ++i) base[i] += f * Cj[i];
    }
    const double tau_end = cfg.model.tau(Tn, Tn);
    const bool live = cfg.model.window(tau_end) > 0.0;
    Field W = fields[step - 1];
    double damp = 1.0, prev_res = 0.0;
    bool halved = false;
    for (int m = 0; m < opts.picard_max_iter; ++m) {
      Field Wnew = base;
      if (live) {
        Field Cn = collision_direct(cfg, W, tau_end);
        for (long i = 0; i < N; ++i) Wnew[i] += 0.5 * h * Cn[i];
      }
      double res = 0.0;
      for (long i = 0; i < N; ++i)
        res = std::max(res, std::fabs(Wnew[i] - W[i]));
      if (damp == 1.0) {
        W = std::move(Wnew);
      } else {
        for (long i = 0; i < N; ++i) W[i] += damp * (Wnew[i] - W[i]);
      }
      if (res <= opts.picard_tol) break;
      if (m >= 1 && res > prev_res && !halved) {
        damp = 0.5;
        halved = true;
      }
      prev_res = res;
    }
    fields.push_back(std::move(W));
  }
  return fields.back();
}

}  // namespace

TEST_CASE("free evolution leaves the data fixed") {
  Lattice lat(1, 4);
  Potential zero = make_potential_values(lat, Field(lat.size(), 0.0));
  Field W = initial_bandlimited(lat, 5u, 1, 0.7);
  for (const char* kind : kKinds) {
    CollisionConfig cfg{&lat, &zero, make_model(kind), {}};
    SolveOpts opts;
    opts.Tstar = 0.8;
    opts.n_steps = 6;
    Trajectory tr = solve(cfg, W, opts);
    REQUIRE(tr.fields.size() == 7);
    for (const Field& f : tr.fields)
      for (size_t i = 0; i < f.size(); ++i) CHECK(f[i] == W[i]);
  }
}

TEST_CASE("flat data is stationary for every model") {
  Lattice lat(1, 4);
  Potential pot = make_potential_onsite(lat);
  for (const char* kind : kKinds) {
    Model m = make_model(kind);
    m.tau_mode = TauMode::Constant;
    m.T0 = 1.0;
    CollisionConfig cfg{&lat, &pot, m, {}};
    SolveOpts opts;
    opts.Tstar = 1.0;
    opts.n_steps = 8;
    Trajectory tr = solve(cfg, initial_constant(lat, 0.9), opts);
    for (const Field& f : tr.fields)
      for (double v : f) CHECK(std::fabs(v - 0.9) <= 1e-14);
  }
}

TEST_CASE("mass is conserved along interacting runs") {
  Lattice lat(1, 4);
  Potential pot = make_potential_onsite(lat);
  Field W = initial_thermal(lat, 0.5);
  for (const char* kind : kKinds) {
    Model m = make_model(kind);
    CollisionConfig cfg{&lat, &pot, m, {}};
    SolveOpts opts;
    opts.Tstar = 0.5;
    opts.n_steps = 8;
    Trajectory tr = solve(cfg, W, opts);
    const double m0 = tr.diag[0].mass;
    for (const NodeDiag& d : tr.diag) {
      CHECK(std::fabs(d.mass - m0) <= 1e-12 * (1.0 + std::fabs(m0)));
      CHECK(d.im_max == 0.0);
      CHECK(d.wmin <= d.wmax);
      CHECK(d.sup >= d.wmax);
    }
    CHECK(tr.diag.back().picard_iters >= 1);
  }
}

TEST_CASE("step halving contracts the endpoint error") {
  Lattice lat(1, 4);
  Potential pot = make_potential_onsite(lat);
  Field W = initial_gaussian(lat, 1.1, 0.22);
  auto endpoint = [&](TauMode mode, int steps) {
    Model m = make_model("boson");
    m.tau_mode = mode;
    m.T0 = 1.0;
    CollisionConfig cfg{&lat, &pot, m, {}};
    SolveOpts opts;
    opts.Tstar = 0.5;
    opts.n_steps = steps;
    return solve(cfg, W, opts).fields.back();
  };
  for (TauMode mode : {TauMode::Memory, TauMode::Constant}) {
    Field w8 = endpoint(mode, 8);
    Field w16 = endpoint(mode, 16);
    Field w32 = endpoint(mode, 32);
    double e8 = sup_diff(w8, w16), e16 = sup_diff(w16, w32);
    CHECK(e8 > 0.0);
    CHECK(e8 / e16 >= 3.0);
  }
}

TEST_CASE("constant window agrees with the four-stage path") {
  Lattice lat(1, 4);
  Potential pot = make_potential_onsite(lat);
  Model m = make_model("boson");
  m.tau_mode = TauMode::Constant;
  m.T0 = 1.0;
  CollisionConfig cfg{&lat, &pot, m, {}};
  SolveOpts opts;
  opts.Tstar = 0.5;
  opts.n_steps = 32;
  Field W = initial_thermal(lat, 0.0);
  Trajectory tv = solve(cfg, W, opts);
  Trajectory tr = solve_rk4(cfg, W, opts);
  REQUIRE(tv.fields.size() == tr.fields.size());
  double worst = 0;
  for (size_t nd = 0; nd < tv.fields.size(); ++nd)
    worst = std::max(worst, sup_diff(tv.fields[nd], tr.fields[nd]));
  CHECK(worst <= 1e-4);
  CHECK(worst > 0.0);
  Model mem = make_model("boson");
  CollisionConfig bad{&lat, &pot, mem, {}};
  CHECK_THROWS_AS(solve_rk4(bad, W, opts), std::invalid_argument);
}

TEST_CASE("cached constant-window path matches direct recomputation") {
  Lattice lat(1, 3);
  Potential pot = make_potential_onsite(lat);
  Field W = initial_bandlimited(lat, 9u, 1, 0.8);
  for (TauMode mode : {TauMode::Constant, TauMode::Memory}) {
    Model m = make_model("fermion");
    m.tau_mode = mode;
    m.T0 = 0.7;
    CollisionConfig cfg{&lat, &pot, m, {}};
    SolveOpts opts;
    opts.Tstar = 0.6;
    opts.n_steps = 5;
    Field got = solve(cfg, W, opts).fields.back();
    Field want = volterra_endpoint_reference(cfg, W, opts);
    for (long i = 0; i < lat.size(); ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("stalled iteration and overflow are reported") {
  Lattice lat(1, 4);
  Potential pot = make_potential_onsite(lat);
  Model m = make_model("boson");
  m.tau_mode = TauMode::Constant;
  m.T0 = 1.0;
  CollisionConfig cfg{&lat, &pot, m, {}};
  SolveOpts tight;
  tight.Tstar = 0.5;
  tight.n_steps = 4;
  tight.picard_tol = 1e-30;
  tight.picard_max_iter = 2;
  Field W = initial_thermal(lat, 0.0);
  CHECK_THROWS_WITH_AS(solve(cfg, W, tight),
                       doctest::Contains("Picard stalled at step"),
                       std::runtime_error);
  SolveOpts opts;
  opts.Tstar = 0.5;
  opts.n_steps = 4;
  CHECK_THROWS_WITH_AS(solve(cfg, Field(lat.size(), 1e200), opts),
                       doctest::Contains("non-finite field at step 1"),
                       std::runtime_error);
  CHECK_THROWS_AS(solve(cfg, Field(3, 1.0), opts), std::invalid_argument);
  SolveOpts bad;
  bad.n_steps = 0;
  CHECK_THROWS_AS(solve(cfg, W, bad), std::invalid_argument);
}

TEST_CASE("preflight window arithmetic") {
  Potential* keep = nullptr;  // silence unused warnings on some compilers
  (void)keep;
  SolveOpts opts;
  opts.Tstar = 1.0;

  // lambda^2 = tau means the threshold is 4^{1/beta}; beta 1/2 gives 16
  {
    Lattice lat(3, 16);
    Potential pot = make_potential_onsite(lat);
    Model m = make_model("boson");
    m.lambda = 1.0;
    m.beta = 0.5;
    CollisionConfig cfg{&lat, &pot, m, {}};
    PreflightReport rep = preflight(cfg, initial_constant(lat, 0.5), opts);
    REQUIRE(rep.conditions.size() == 3);
    CHECK(rep.conditions[0].name == "L >= L_beta");
    CHECK(rep.conditions[0].rhs == doctest::Approx(16.0));
    CHECK(rep.conditions[0].pass);
  }
  {
    Lattice lat(3, 8);
    Potential pot = make_potential_onsite(lat);
    Model m = make_model("boson");
    m.lambda = 1.0;
    m.beta = 0.5;
    CollisionConfig cfg{&lat, &pot, m, {}};
    PreflightReport rep = preflight(cfg, initial_constant(lat, 0.5), opts);
    CHECK(!rep.conditions[0].pass);
    CHECK(!rep.all_pass);
  }
  // desk-scale sweep: small coupling pushes the admissible side length far
  // beyond the box
  {
    Lattice lat(3, 8);
    Potential pot = make_potential_onsite(lat);
    Model m = make_model("boson");
    m.lambda = 0.5;
    m.beta = 0.3;
    CollisionConfig cfg{&lat, &pot, m, {}};
    PreflightReport rep = preflight(cfg, initial_constant(lat, 0.5), opts);
    CHECK(!rep.conditions[0].pass);
    CHECK(rep.conditions[0].rhs > 1e3);
  }
  // with no interaction both time windows are unbounded
  {
    Lattice lat(3, 4);
    Potential zero = make_potential_values(lat, Field(lat.size(), 0.0));
    Model m = make_model("boson");
    m.beta = 0.3;
    CollisionConfig cfg{&lat, &zero, m, {}};
    opts.Tstar = 1e6;
    PreflightReport rep = preflight(cfg, initial_constant(lat, 0.5), opts);
    CHECK(rep.conditions[1].pass);
    CHECK(rep.conditions[2].pass);
    opts.Tstar = 1.0;
  }
  // constant window reads its own horizon
  {
    Lattice lat(3, 4);
    Potential pot = make_potential_onsite(lat);
    Model m = make_model("boson");
    m.lambda = 1.0;
    m.beta = 0.5;
    m.tau_mode = TauMode::Constant;
    m.T0 = 0.0625;  // L_beta = 4^{1/2} / ... = max(0.25^{1/beta}...)
    CollisionConfig cfg{&lat, &pot, m, {}};
    PreflightReport rep = preflight(cfg, initial_constant(lat, 0.5), opts);
    CHECK(rep.conditions[0].rhs == doctest::Approx(0.0625));
    CHECK(rep.conditions[0].pass);
  }
}

TEST_CASE("initial data generators") {
  Lattice lat(2, 5);
  // gaussian: even in k, peaked at the origin, positive
  Field g = initial_gaussian(lat, 1.3, 0.15);
  CHECK(g[lat.zero()] == doctest::Approx(1.3));
  for (long k = 0; k < lat.size(); ++k) {
    CHECK(g[k] > 0.0);
    CHECK(g[k] == doctest::Approx(g[lat.neg(k)]));
    CHECK(g[k] <= g[lat.zero()] + 1e-12);
  }
  // thermal: direct formula check
  Field th = initial_thermal(lat, 0.4);
  for (long k = 0; k < lat.size(); ++k) {
    double o = lat.omega(k) - 0.4;
    CHECK(th[k] == doctest::Approx(1.0 / std::sqrt(1.0 + o * o)));
  }
  // band-limited random: positive, reproducible, seed-sensitive
  Field b1 = initial_bandlimited(lat, 42u, 2, 0.8);
  Field b2 = initial_bandlimited(lat, 42u, 2, 0.8);
  Field b3 = initial_bandlimited(lat, 43u, 2, 0.8);
  CHECK(b1 == b2);
  CHECK(b1 != b3);
  double lo = 1e30, hi = 0;
  for (long k = 0; k < lat.size(); ++k) {
    CHECK(b1[k] > 0.0);
    lo = std::min(lo, b1[k]);
    hi = std::max(hi, b1[k]);
  }
  CHECK(hi > lo);  // genuinely nonconstant
  CHECK(initial_bandlimited(lat, 1u, 0, 0.5) == Field(lat.size(), 0.5));
  CHECK_THROWS_AS(initial_bandlimited(lat, 1u, -1, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(initial_gaussian(lat, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("initial data file round trip") {
  Lattice lat(1, 4);
  Field W = initial_thermal(lat, 0.2);
  const std::string path = "solver_w_in.json";
  {
    std::ofstream out(path);
    out << "{\"d\":1,\"L\":4,\"values\":[";
    for (long i = 0; i < lat.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", W[i]);
      out << (i ? "," : "") << buf;
    }
    out << "]}";
  }
  Field back = initial_file(lat, path);
  CHECK(back == W);
  {
    std::ofstream out(path);
    out << "{\"d\":1,\"L\":4,\"values\":[1.0,2.0]}";
  }
  CHECK_THROWS_AS(initial_file(lat, path), std::invalid_argument);
  {
    std::ofstream out(path);
    out << "{\"d\":2,\"L\":4,\"values\":[1,2,3,4]}";
  }
  CHECK_THROWS_AS(initial_file(lat, path), std::invalid_argument);
  CHECK_THROWS_AS(initial_file(lat, "no_such_file.json"),
                  std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("bound monitor on a free run") {
  Lattice lat(3, 4);
  Potential zero = make_potential_values(lat, Field(lat.size(), 0.0));
  Model m = make_model("boson");
  m.beta = 0.3;
  CollisionConfig cfg{&lat, &zero, m, {}};
  SolveOpts opts;
  opts.Tstar = 0.5;
  opts.n_steps = 4;
  Trajectory tr = solve(cfg, initial_thermal(lat, 0.0), opts);
  MonitorReport rep = bound_monitor(cfg, tr, 60, 3u);
  REQUIRE(rep.rows.size() == tr.times.size());
  for (const MonitorRow& r : rep.rows) {
    CHECK(r.sup_margin == 0.0);    // free run: the exponential bound is tight
    CHECK(r.fnorm_margin == 0.0);  // and the continuation bound is an equality
    CHECK(r.endpoint_margin >= 0.0);
  }
  CHECK(!rep.any_negative);
  CHECK(rep.worst_sup == 0.0);
}

TEST_CASE("bound monitor on an interacting run") {
  Lattice lat(3, 4);
  Potential pot = make_potential_onsite(lat);
  Model m = make_model("boson");
  m.beta = 0.3;
  CollisionConfig cfg{&lat, &pot, m, {}};
  SolveOpts opts;
  opts.Tstar = 0.3;
  opts.n_steps = 3;
  Trajectory tr = solve(cfg, initial_thermal(lat, 0.5), opts);
  MonitorReport rep = bound_monitor(cfg, tr, 40, 11u);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.rows[0].time == 0.0);
  // estimates are sampled lower bounds, so slack can be negative but the
  // report must stay internally consistent
  CHECK(rep.worst_sup <= rep.rows[0].sup_margin);
  CHECK(rep.any_negative ==
        (rep.worst_sup < 0 || rep.worst_fnorm < 0 || rep.worst_endpoint < 0));
  Lattice low(1, 4);
  CollisionConfig bad{&low, &pot, m, {}};
  CHECK_THROWS_AS(bound_monitor(bad, tr, 10, 0u), std::invalid_argument);
}

TEST_CASE("window comparison sweep") {
  Lattice lat(3, 4);
  Potential pot = make_potential_onsite(lat);
  Model m = make_model("boson");
  m.beta = 0.3;
  CollisionConfig cfg{&lat, &pot, m, {}};
  SolveOpts opts;
  opts.Tstar = 0.3;
  opts.n_steps = 6;
  Field W = initial_thermal(lat, 0.5);

  // degenerate: both legs share the memory window, the gap is exactly zero
  TauCompareReport deg = compare_tau(cfg, W, {1.0}, 0.0, opts);
  REQUIRE(deg.rows.size() == 1);
  CHECK(deg.rows[0].ok);
  CHECK(deg.rows[0].d_sup == 0.0);
  CHECK(deg.rows[0].d_sob == 0.0);
  CHECK(deg.rows[0].e_beta == 0.0);
  CHECK(deg.fitted_slope == 0.0);

  TauCompareReport rep = compare_tau(cfg, W, {1.0, 0.5}, 0.3, opts);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].lambda == 1.0);
  CHECK(rep.rows[1].lambda == 0.5);
  CHECK(rep.rows[0].ok);
  CHECK(rep.rows[1].ok);
  CHECK(rep.rows[0].d_sup > 0.0);
  CHECK(rep.rows[1].d_sup > 0.0);
  CHECK(rep.rows[0].d_sob > 0.0);
  CHECK(rep.rows[0].e_beta >= rep.rows[1].e_beta);
  CHECK(rep.rows[1].e_beta > 0.0);
  CHECK(std::isfinite(rep.fitted_slope));
  CHECK(rep.p_d == doctest::Approx(2 * 3 * 0.35 - 2));
  CHECK(!rep.regime_certified);  // lambda = 0.5 pushes L_beta past L = 4

  // a failing leg yields a partial report, not a throw
  SolveOpts tight = opts;
  tight.picard_tol = 1e-30;
  tight.picard_max_iter = 1;
  TauCompareReport part = compare_tau(cfg, W, {1.0}, 0.3, tight);
  REQUIRE(part.rows.size() == 1);
  CHECK(!part.rows[0].ok);
  CHECK(part.rows[0].error.find("Picard") != std::string::npos);
  CHECK(!part.regime_certified);
}
