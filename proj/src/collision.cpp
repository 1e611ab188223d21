#include "wkin/collision.hpp"

#include <cmath>
#include <numbers>

namespace wkin {

double psinc(double a, double Omega) {
  double t = a * Omega;
  if (std::abs(t) < 1e-4) {
    double t2 = t * t;
    return a * (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0)));
  }
  return std::sin(t) / Omega;
}

double delta_energy(double Omega, double lambda, double tau0) {
  return psinc(tau0 / (lambda * lambda), Omega) / std::numbers::pi;
}

namespace {
// shared inner double sum; F(Om) is either the analytic window or e^{-i s Om}
template <typename Acc, typename WinF>
Acc direct_at(const CollisionConfig& cfg, const Field& W, long k0,
              const WinF& win) {
  const Lattice& lat = *cfg.lat;
  const Field& Vh = cfg.pot->Vhat;
  const double theta = cfg.model.theta, q = cfg.model.q;
  const long N = lat.size();
  Acc acc{};
  const double h0 = W[k0];
  for (long k1 = 0; k1 < N; ++k1) {
    const long k01 = lat.add(k0, k1);
    const double h1 = W[k1];
    for (long k3 = 0; k3 < N; ++k3) {
      const long k2 = lat.sub(k01, k3);
      const double Om =
          lat.omega(k0) + lat.omega(k1) - lat.omega(k2) - lat.omega(k3);
      const double vf = Vh[lat.sub(k1, k2)] + theta * Vh[lat.sub(k1, k3)];
      const double h2 = W[k2], h3 = W[k3];
      const double cubic =
          h1 * h2 * h3 + h0 * h2 * h3 - h0 * h1 * h3 - h0 * h1 * h2;
      const double quad = h2 * h3 - h0 * h1;
      acc += win(Om) * (vf * vf * (theta * cubic + q * quad));
    }
  }
  return acc / double(N * N);
}
}  // namespace

Field collision_direct(const CollisionConfig& cfg, const Field& W,
                       double tau0) {
  const long N = cfg.lat->size();
  const double a = cfg.model.window(tau0);
  Field out(N);
#pragma omp parallel for schedule(static)
  for (long k0 = 0; k0 < N; ++k0)
    out[k0] = direct_at<double>(cfg, W, k0,
                                [a](double Om) { return psinc(a, Om); });
  return out;
}

Field collision_direct_serial(const CollisionConfig& cfg, const Field& W,
                              double tau0) {
  const long N = cfg.lat->size();
  const double a = cfg.model.window(tau0);
  Field out(N);
  for (long k0 = 0; k0 < N; ++k0)
    out[k0] = direct_at<double>(cfg, W, k0,
                                [a](double Om) { return psinc(a, Om); });
  return out;
}

cplx kernel_fixed_s_direct(const CollisionConfig& cfg, const Field& W,
                           double s, long k0) {
  // pi delta(Om) = (1/2) int_{-a}^{a} e^{-i s Om} ds term by term
  return direct_at<cplx>(cfg, W, k0, [s](double Om) {
    return cplx(0.5 * std::cos(s * Om), -0.5 * std::sin(s * Om));
  });
}

CField collision_kernel_s(const CollisionConfig& cfg, const Field& W,
                          double s) {
  const long N = cfg.lat->size();
  CField out(N);
  for (long k0 = 0; k0 < N; ++k0)
    out[k0] = kernel_fixed_s_direct(cfg, W, s, k0);
  return out;
}

Functionals functionals(const Lattice& lat, const Field& W) {
  return {mass(lat, W), energy(lat, W)};
}

}  // namespace wkin
