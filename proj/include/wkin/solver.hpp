#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "wkin/collision.hpp"
#include "wkin/rng.hpp"

namespace wkin {

struct MonitorSet {
  bool mass = true;
  bool energy = true;
  bool realness = true;
  bool sup_bound = false;
  bool f_norm = false;
};

struct SolveOpts {
  double Tstar = 1.0;
  int n_steps = 32;
  double picard_tol = 1e-12;
  int picard_max_iter = 60;
  MonitorSet monitor;
};

struct NodeDiag {
  double mass = 0, energy = 0, sup = 0, im_max = 0;
  double wmin = 0, wmax = 0;  // fermion range watch; monitored, never enforced
  int picard_iters = 0;
  double residual = 0;
};

struct Trajectory {
  const Lattice* lat = nullptr;
  std::vector<double> times;   // uniform, times[0] = 0
  std::vector<Field> fields;   // one spectral field per node
  std::vector<NodeDiag> diag;  // same length as times
  int steps() const { return int(times.size()) - 1; }
};

// initial data generators; all real
Field initial_constant(const Lattice& lat, double c);
// periodized Gaussian bump in k centered at 0
Field initial_gaussian(const Lattice& lat, double amp, double width);
// thermal-like 1 / <omega(k) - mu>
Field initial_thermal(const Lattice& lat, double mu);
// positive random field with cosine content up to |y|_inf <= band
Field initial_bandlimited(const Lattice& lat, std::uint64_t seed, int band,
                          double amp);
Field initial_file(const Lattice& lat, const std::string& path);

// W_T = W_in + int_0^T C(W_t, tau(T,t)) dt on a uniform grid, trapezoid in
// time, Picard on the implicit endpoint.  One code path for both tau modes:
// Memory re-evaluates the whole history at every step (the tau argument of
// each summand moves with T), Constant reuses cached per-node collisions
Trajectory solve(const CollisionConfig& cfg, const Field& W_in,
                 const SolveOpts& opts);

// independent check path for Constant mode: classical RK4 on
// dW/dT = C(W, T0)
Trajectory solve_rk4(const CollisionConfig& cfg, const Field& W_in,
                     const SolveOpts& opts);

struct PreflightCondition {
  std::string name;
  double lhs = 0, rhs = 0;
  bool pass = false;
};
struct PreflightReport {
  std::vector<PreflightCondition> conditions;
  bool all_pass = false;
};
// hypothesis checks: lattice size against L_beta, final time against the
// contraction windows.  Failures are warnings, not aborts
PreflightReport preflight(const CollisionConfig& cfg, const Field& W_in,
                          const SolveOpts& opts);

struct MonitorRow {
  double time = 0;
  double sup_margin = 0;     // exponential sup-norm bound
  double fnorm_margin = 0;   // control-map norm continuation bound
  double endpoint_margin = 0;  // final-time 2/sqrt(3) bound
};
struct MonitorReport {
  std::vector<MonitorRow> rows;
  double worst_sup = 0, worst_fnorm = 0, worst_endpoint = 0;
  bool any_negative = false;
};
// margins are (RHS - LHS) / RHS with sampled norm estimators; negative
// margins are flagged, not fatal (the estimator undersamples)
MonitorReport bound_monitor(const CollisionConfig& cfg, const Trajectory& traj,
                            int samples, std::uint64_t seed);

struct TauCompareRow {
  double lambda = 0;
  double d_sup = 0;   // max over nodes of ||W - Wtilde||_inf
  double d_sob = 0;   // max over nodes of the sup-Sobolev-1/3 difference
  double e_beta = 0;
  bool ok = false;
  std::string error;
};
struct TauCompareReport {
  std::vector<TauCompareRow> rows;
  double fitted_slope = 0;  // log D vs log lambda
  double p_d = 0;
  bool regime_certified = false;  // L >= L_beta at every lambda
};
// Memory vs Constant(T0) runs from the same data, one row per lambda
TauCompareReport compare_tau(const CollisionConfig& cfg, const Field& W_in,
                             const std::vector<double>& lambdas, double T0,
                             const SolveOpts& opts);

}  // namespace wkin
