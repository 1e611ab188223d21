#pragma once
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace wkin {

inline double mean_br(double r) { return std::sqrt(1.0 + r * r); }  // <r>

// Single-axis weight Phi(r,x) = <x>^{1/3-gamma(r)} max(1, varphi(r)/<x>^{1/2})
// with varphi = <r>^{1/2} for |r| <= L^beta and the decaying tail beyond;
// gamma ramps 0 -> 1/3 linearly on [aL, bL].  Range [1, <L/2>^{1/3}].
class WeightFns {
public:
  WeightFns(int L, double beta);

  double gammaf(double r) const;
  double varphi(double r) const;
  double weight(double r, double x) const;
  double weight_d(const double* R, const int* x, int d) const;
  double weight_d(const std::vector<double>& R, const std::vector<int>& x) const;

  int L() const { return L_; }
  double beta() const { return beta_; }
  double Lb() const { return Lb_; }
  double aL() const { return aL_; }
  double bL() const { return bL_; }

private:
  int L_;
  double beta_, Lb_, aL_, bL_;
};

// admissibility threshold: max((4 tau0 / lambda^2)^{1/beta}, tau0 / lambda^2)
double L_beta(double lambda, double tau0, double beta);

// int_0^{1/2} |r - s sin(pi k)|^{-p} dk for s > 0, r >= 0, p in (0, 1/2);
// the interior algebraic singularity is split off and integrated by a
// double-exponential rule, so the result is accurate to ~1e-10 relative
double singular_axis_integral(double r, double s, double p);

struct SweepRow {
  std::string name;
  int samples = 0;
  double max_ratio = 0.0;   // worst LHS/RHS over the draw
  double quad_tol = 0.0;    // declared accuracy of the left-hand evaluation
  std::string worst_input;  // rendering of the argmax sample
  bool pass = false;        // max_ratio <= 1 + 1e-9
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool all_pass = false;
};

// sampled check of the weighted-ratio and window-integral estimates that back
// the norm machinery: each row draws n_samples admissible inputs, evaluates
// the left side by quadrature at the declared tolerance and the right side in
// closed form, and records the worst ratio.  Inadmissible draws (a zero mode
// where the bound degenerates, a window wider than the lattice admits) are
// resampled, never silently included.
SweepReport verify_weight_inequalities(const WeightFns& w, int d, int n_samples,
                                       uint64_t seed);

}  // namespace wkin
