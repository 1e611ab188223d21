#pragma once
#include <vector>

#include "wkin/lattice.hpp"

namespace wkin {

// phi(k; R, u) = sum_a R_a cos(2 pi (k_a + u_a)), k in fractional coordinates
double phase_phi(const std::vector<double>& R, const std::vector<double>& u,
                 const double* kfrac, int d);

// per-axis tables of R_a cos(2 pi (m/L + u_a)); phi at a flat mode is a d-term
// table sum, so sweeps over all modes cost one cos per axis value
class AxisPhase {
public:
  AxisPhase(const Lattice& lat, const std::vector<double>& R,
            const std::vector<double>& u);
  double operator()(long flat) const;

private:
  const Lattice* lat_;
  std::vector<double> tab_;  // d x L by digit
};

double arg_pi(cplx z);    // principal argument in (-pi, pi], arg(0) = 0
double frac_arg(cplx z);  // arg_pi / (2 pi)

// modulus/argument split; R >= 0 and u = frac_arg(z)
void polar_ru(cplx z, double& R, double& u);

// z_xi(k) = 1 -+ e^{-i 2 pi k}: xi=0 vanishes at k=0, xi=1 at k=1/2
cplx zpm(double kfrac, int xi);

// phasor of the inner factor at window position s: s (e^{i pi xi} - e^{i 2 pi k})
cplx inner_phasor(double s, double kfrac, int xi);

// phasor of the outer factor: R e^{i 2 pi u} + s (e^{i 2 pi k'} - e^{i 2 pi (k'-k-xi/2)})
cplx shifted_phasor(double R, double u, double s, double kpfrac, double kfrac,
                    int xi);

}  // namespace wkin
