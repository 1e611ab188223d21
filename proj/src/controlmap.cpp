#include "wkin/controlmap.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wkin/quadrature.hpp"

namespace wkin {

namespace {

void check_node(const std::vector<double>& times, int t, const char* who) {
  if (t < 0 || t >= int(times.size()))
    throw std::out_of_range(std::string(who) + ": time node " +
                            std::to_string(t) + " outside grid of " +
                            std::to_string(times.size()) + " nodes");
}

std::vector<cplx> point_phasor(const Lattice& lat, const PhasePoint& X) {
  std::vector<cplx> z(lat.dim());
  for (int a = 0; a < lat.dim(); ++a)
    z[a] = std::polar(X.R[a], 2.0 * std::numbers::pi * X.u[a]);
  return z;
}

// 0-based term tables, shared shape with the fixed-s bilinear kernel
struct JTerms {
  double sq[8];
  int s2[8] = {1, 1, 1, 1, 1, -1, -1, -1};
  int nt[8] = {2, 2, 1, 1, 2, 2, 2, 2};
  int xi[8] = {0, 0, 0, 0, 0, 1, 1, 1};
  int s3[8] = {-1, -1, -1, -1, -1, -1, 1, 1};
  JTerms(double th, double q) : sq{-th, -th, -q, q, th, th, th, 1.0} {}
};

// fixed-s integrand of the eight-term sum at time node t
cplx j_kernel_s(const CollisionConfig& cfg, const TimedEval& G,
                const TimedEval& Gcal, const OperatorQuery& q, int tnode,
                double s) {
  const Lattice& lat = *cfg.lat;
  const Potential& pot = *cfg.pot;
  const int d = lat.dim();
  const long N = lat.size();
  const JTerms tb(cfg.model.theta, cfg.model.q);
  const PhasePoint& X = q.X;
  const std::vector<cplx> zX = point_phasor(lat, X);
  std::vector<cplx> zg(d), zt(d);
  std::vector<int> ck(d), ckp(d);
  lat.coords(X.kp, ckp.data());
  cplx acc = 0;
  for (int i = 0; i < 8; ++i) {
    const double e0 = tb.xi[i] ? -1.0 : 1.0;  // e^{i pi xi}
    for (long k = 0; k < N; ++k) {
      lat.coords(k, ck.data());
      for (int a = 0; a < d; ++a) {
        zg[a] = s * (e0 - lat.root(-ck[a]));
        zt[a] = zX[a] +
                s * (lat.root(-ckp[a]) - e0 * lat.root(ck[a] - ckp[a]));
      }
      const long ktp =
          (i == 3 || i == 4) ? lat.sub(X.kp, k) : X.kp;  // ktilde'_i
      if (i == 7) {
        for (long y = 0; y < N; ++y) {
          if (pot.V[y] == 0.0) continue;
          for (long yp = 0; yp < N; ++yp) {
            if (pot.V[yp] == 0.0) continue;
            const long ph = lat.dot(X.kp, lat.sub(y, yp)) + lat.dot(k, yp);
            const cplx g = G(2, tnode, tnode, zg.data(), k, -1,
                             lat.add(y, yp));
            const cplx gg = Gcal(q.n, q.t1, tnode, zt.data(), ktp, X.sigma,
                                 lat.sub(lat.add(X.x, y), yp));
            acc += tb.sq[i] * 2.0 * pot.V[y] * pot.V[yp] * lat.root(-ph) *
                   g * gg;
          }
        }
      } else {
        const long kslot = (i == 2) ? lat.zero() : k;
        const long kmkp = lat.sub(k, X.kp);
        for (long y = 0; y < N; ++y) {
          const double v = (i <= 4)
                               ? script_V(lat, pot, cfg.model.theta, k, y)
                               : pot.VV[y];
          if (v == 0.0) continue;
          const long ph = (i == 6) ? lat.dot(X.kp, y) : lat.dot(kmkp, y);
          const long xarg =
              tb.s3[i] > 0 ? lat.add(X.x, y) : lat.sub(X.x, y);
          const cplx g =
              G(tb.nt[i], tnode, tnode, zg.data(), kslot, tb.s2[i], y);
          const cplx gg =
              Gcal(q.n, q.t1, tnode, zt.data(), ktp, X.sigma, xarg);
          acc += tb.sq[i] * v * lat.root(-ph) * g * gg;
        }
      }
    }
  }
  return 0.5 * acc / double(N);
}

}  // namespace

TimedEval make_traj_feval(const Trajectory& traj) {
  const Trajectory* tp = &traj;
  return [tp](int n, int ti, int tj, const cplx* zeta, long kp, int sigma,
              long x) {
    const Lattice& l = *tp->lat;
    const int d = l.dim();
    const Field& Wa = tp->fields[ti];
    const Field& Wb = tp->fields[tj];
    int c[8];
    cplx acc = 0;
    for (long k = 0; k < l.size(); ++k) {
      l.coords(k, c);
      double ph = 0;
      for (int a = 0; a < d; ++a) ph += (zeta[a] * l.root(-c[a])).real();
      double wf = Wb[l.add(kp, k)];
      if (n == 2) wf *= Wa[sigma > 0 ? k : l.neg(k)];
      acc += std::polar(1.0, ph) * wf * l.root(-l.dot(k, x));
    }
    return acc / double(l.size());
  };
}

cplx control_map_eval(const Trajectory& traj, const OperatorQuery& q) {
  check_node(traj.times, q.t1, "control_map_eval");
  check_node(traj.times, q.t2, "control_map_eval");
  const std::vector<cplx> z = point_phasor(*traj.lat, q.X);
  return make_traj_feval(traj)(q.n, q.t1, q.t2, z.data(), q.X.kp, q.X.sigma,
                               q.X.x);
}

PhasePoint reflect_point(const Lattice& lat, const PhasePoint& X) {
  PhasePoint Xt;
  Xt.R = X.R;
  Xt.sigma = X.sigma;
  Xt.kp = X.sigma > 0 ? lat.neg(X.kp) : X.kp;
  Xt.x = X.sigma > 0 ? X.x : lat.neg(X.x);
  Xt.u.resize(lat.dim());
  std::vector<int> ckp(lat.dim());
  lat.coords(X.kp, ckp.data());
  for (int a = 0; a < lat.dim(); ++a)
    Xt.u[a] = X.sigma * (X.u[a] - double(ckp[a]) / lat.side());
  return Xt;
}

cplx J_eval(const CollisionConfig& cfg, const std::vector<double>& times,
            const TimedEval& G, const TimedEval& Gcal,
            const OperatorQuery& q) {
  check_node(times, q.t1, "J_eval");
  check_node(times, q.t2, "J_eval");
  if (q.t2 == 0) return 0;
  const double h = times[1] - times[0];
  const SQuad& sq = cfg.squad;
  const Quad quad = gauss_legendre(sq.order);
  const Quad quad2 = gauss_legendre(2 * sq.order);

  auto panel = [&](int j, double a, int p, const Quad& qd) {
    const double w = 2.0 * a / sq.panels;
    const double lo = -a + p * w;
    cplx t = 0;
    for (size_t g = 0; g < qd.x.size(); ++g)
      t += 0.5 * w * qd.w[g] *
           j_kernel_s(cfg, G, Gcal, q, j, lo + 0.5 * w * (1.0 + qd.x[g]));
    return t;
  };

  // spot panel re-done at doubled order; jm has a nonzero window in both
  // tau modes
  const int jm = q.t2 / 2, pm = sq.panels / 2;
  double est = 0;
  cplx out = 0;
  for (int j = 0; j <= q.t2; ++j) {
    const double wj = h * ((j == 0 || j == q.t2) ? 0.5 : 1.0);
    const double a = cfg.model.window(cfg.model.tau(times[q.t2], times[j]));
    if (a <= 0.0) continue;
    cplx node = 0;
    for (int p = 0; p < sq.panels; ++p) {
      const cplx pv = panel(j, a, p, quad);
      node += pv;
      if (j == jm && p == pm)
        est = std::abs(panel(j, a, p, quad2) - pv) * sq.panels * times[q.t2];
    }
    out += wj * node;
  }
  if (est > sq.tol)
    throw std::runtime_error("J_eval: s-quadrature residual " +
                             std::to_string(est) + " exceeds tol " +
                             std::to_string(sq.tol));
  return out;
}

cplx I_eval(const CollisionConfig& cfg, const std::vector<double>& times,
            const TimedEval& G, const TimedEval& Gcal,
            const OperatorQuery& q) {
  check_node(times, q.t1, "I_eval");
  check_node(times, q.t2, "I_eval");
  const Lattice& lat = *cfg.lat;
  const std::vector<cplx> zX = point_phasor(lat, q.X);
  cplx out = Gcal(q.n, 0, 0, zX.data(), q.X.kp, q.X.sigma, q.X.x);
  OperatorQuery qa = q;
  qa.t1 = 0;
  out += 0.5 * (J_eval(cfg, times, G, Gcal, qa) +
                J_eval(cfg, times, G, Gcal, q));
  if (q.n == 2) {
    OperatorQuery qr;
    qr.n = 2;
    qr.X = reflect_point(lat, q.X);
    qr.t1 = 0;
    qr.t2 = q.t1;
    OperatorQuery qr2 = qr;
    qr2.t1 = q.t2;
    const cplx ph = lat.root(lat.dot(q.X.kp, q.X.x));  // e^{-i 2 pi k'.x}
    out += 0.5 * ph * (J_eval(cfg, times, G, Gcal, qr) +
                       J_eval(cfg, times, G, Gcal, qr2));
  }
  return out;
}

FevoReport fevo_residual(const CollisionConfig& cfg, const Trajectory& traj,
                         const std::vector<OperatorQuery>& queries,
                         double solver_tol) {
  FevoReport rep;
  rep.n_queries = int(queries.size());
  double wmax = 0;
  for (const Field& W : traj.fields)
    for (double w : W) wmax = std::max(wmax, std::abs(w));
  rep.budget = 2.0 * cfg.squad.tol * (1.0 + wmax) +
               2.0 * solver_tol * (1.0 + wmax) +
               1e-10 * (1.0 + wmax) * (1.0 + wmax) * (1.0 + wmax) *
                   (1.0 + mv(*cfg.pot));
  const TimedEval F = make_traj_feval(traj);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (size_t qi = 0; qi < queries.size(); ++qi) {
    try {
      const cplx lhs = control_map_eval(traj, queries[qi]);
      const cplx rhs = I_eval(cfg, traj.times, F, F, queries[qi]);
      const double r = std::abs(lhs - rhs);
#pragma omp critical
      rep.max_residual = std::max(rep.max_residual, r);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  rep.pass = rep.max_residual <= rep.budget;
  return rep;
}

}  // namespace wkin
