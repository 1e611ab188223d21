#pragma once
#include "wkin/lattice.hpp"
#include "wkin/model.hpp"
#include "wkin/potential.hpp"

namespace wkin {

struct SQuad {
  int panels = 32;
  int order = 16;
  double tol = 1e-8;
};

struct CollisionConfig {
  const Lattice* lat = nullptr;
  const Potential* pot = nullptr;
  Model model;
  SQuad squad;
};

// energy window sin(a Omega) / (pi Omega), a = tau0 / lambda^2;
// delta(0) = a / pi.  Series below |a Omega| = 1e-4
double delta_energy(double Omega, double lambda, double tau0);

// pi * delta = sin(a Omega) / Omega, the form entering the collision sum
double psinc(double a, double Omega);

// C^lambda(W, tau0)(k0) = theta C_nls + q C_cl: double sum over (k1, k3)
// with k2 = k0 + k1 - k3 fixed by the lattice delta.  Parallel over k0 with
// a fixed per-k0 summation order, so results are bit-stable across thread
// counts; the serial variant runs the identical per-k0 loop
Field collision_direct(const CollisionConfig& cfg, const Field& W,
                       double tau0);
Field collision_direct_serial(const CollisionConfig& cfg, const Field& W,
                              double tau0);

// fixed-s integrand of the direct representation: C = int_{-a}^{a} K ds
cplx kernel_fixed_s_direct(const CollisionConfig& cfg, const Field& W,
                           double s, long k0);
CField collision_kernel_s(const CollisionConfig& cfg, const Field& W,
                          double s);

// mass = int dk W, energy = int dk omega(k) W(k); the k-measure carries
// the 1/L^d normalization
struct Functionals {
  double mass = 0;
  double energy = 0;
};
Functionals functionals(const Lattice& lat, const Field& W);

}  // namespace wkin
