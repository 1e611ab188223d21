#include "wkin/phase.hpp"

#include <cmath>
#include <numbers>

namespace wkin {

using std::numbers::pi;

double phase_phi(const std::vector<double>& R, const std::vector<double>& u,
                 const double* kfrac, int d) {
  double s = 0;
  for (int a = 0; a < d; ++a) s += R[a] * std::cos(2.0 * pi * (kfrac[a] + u[a]));
  return s;
}

AxisPhase::AxisPhase(const Lattice& lat, const std::vector<double>& R,
                     const std::vector<double>& u)
    : lat_(&lat), tab_(size_t(lat.dim()) * lat.side()) {
  for (int a = 0; a < lat.dim(); ++a)
    for (int g = 0; g < lat.side(); ++g) {
      double k = double(g + lat.lo()) / lat.side();
      tab_[size_t(a) * lat.side() + g] = R[a] * std::cos(2.0 * pi * (k + u[a]));
    }
}

double AxisPhase::operator()(long flat) const {
  double s = 0;
  long rem = flat;
  int L = lat_->side();
  for (int a = lat_->dim() - 1; a >= 0; --a) {
    s += tab_[size_t(a) * L + rem % L];
    rem /= L;
  }
  return s;
}

double arg_pi(cplx z) {
  if (z == cplx(0.0, 0.0)) return 0.0;
  double a = std::arg(z);
  if (a <= -pi) a = pi;  // atan2(-0, x<0) lands on -pi; fold onto +pi
  return a;
}

double frac_arg(cplx z) { return arg_pi(z) / (2.0 * pi); }

void polar_ru(cplx z, double& R, double& u) {
  R = std::abs(z);
  u = frac_arg(z);
}

cplx zpm(double kfrac, int xi) {
  cplx e = std::polar(1.0, -2.0 * pi * kfrac);
  return xi == 0 ? 1.0 - e : 1.0 + e;
}

cplx inner_phasor(double s, double kfrac, int xi) {
  cplx head = (xi == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);  // e^{i pi xi}
  return s * (head - std::polar(1.0, 2.0 * pi * kfrac));
}

cplx shifted_phasor(double R, double u, double s, double kpfrac, double kfrac,
                    int xi) {
  cplx base = std::polar(R, 2.0 * pi * u);
  cplx e1 = std::polar(1.0, 2.0 * pi * kpfrac);
  cplx e2 = std::polar(1.0, 2.0 * pi * (kpfrac - kfrac - 0.5 * xi));
  return base + s * (e1 - e2);
}

}  // namespace wkin
