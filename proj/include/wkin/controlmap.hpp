#pragma once
#include <functional>
#include <vector>

#include "wkin/bilinear.hpp"
#include "wkin/solver.hpp"

namespace wkin {

// X = (R, k', u, sigma, x); (R, u) per axis, k' a flat dual mode, x a flat
// site
struct PhasePoint {
  std::vector<double> R, u;
  long kp = 0;
  int sigma = +1;
  long x = 0;
};

struct OperatorQuery {
  int n = 1;  // 1 or 2
  int t1 = 0, t2 = 0;  // node indices on the trajectory grid
  PhasePoint X;
};

// time-slotted evaluator G^{(n)}_{ti,tj} on phasor arguments zeta_a
using TimedEval = std::function<cplx(int n, int ti, int tj, const cplx* zeta,
                                     long kp, int sigma, long x)>;

// F[W]^{(n)}_{t1,t2}: first slot W_{t1}(sigma k0)^{n-1}, second W_{t2}(k'+k0).
// The closure holds a pointer; the trajectory must outlive it
TimedEval make_traj_feval(const Trajectory& traj);
cplx control_map_eval(const Trajectory& traj, const OperatorQuery& q);

// X -> (R, -sigma k', sigma(u - k'), sigma, sigma x), the reflected argument
// of the n=2 branch
PhasePoint reflect_point(const Lattice& lat, const PhasePoint& X);

// eight-term operator with time quadrature (trapezoid on the grid up to t2)
// and s-quadrature per node over [-a, a], a = lambda^{-2} tau(t_{t2}, t).
// Inner evaluator G at slots (t,t), outer Gcal at (t1, t).  Carries the same
// one-half normalization as the fixed-s bilinear kernel
cplx J_eval(const CollisionConfig& cfg, const std::vector<double>& times,
            const TimedEval& G, const TimedEval& Gcal,
            const OperatorQuery& q);

// Gcal_{0,0}(X) + (J_{0,t2} + J_{t1,t2})(X)/2, plus for n=2 the reflected
// pair (e^{-i 2 pi k'.x}/2)(J_{0,t1} + J_{t2,t1})(Xtilde)
cplx I_eval(const CollisionConfig& cfg, const std::vector<double>& times,
            const TimedEval& G, const TimedEval& Gcal,
            const OperatorQuery& q);

struct FevoReport {
  int n_queries = 0;
  double max_residual = 0;
  double budget = 0;
  bool pass = false;
};

// max |F[W](X) - I[F[W],F[W]](X)| over the queries, against a budget
// composed from the declared error sources: the s-quadrature estimates of
// the J terms, the solver residual entering through both field slots, and a
// rounding floor for the eight-term sums
FevoReport fevo_residual(const CollisionConfig& cfg, const Trajectory& traj,
                         const std::vector<OperatorQuery>& queries,
                         double solver_tol);

}  // namespace wkin
