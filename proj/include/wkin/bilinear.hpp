#pragma once
#include <functional>

#include "wkin/collision.hpp"

namespace wkin {

// i runs 1..8 in the tables below (public entry points keep that indexing):
//   sigma^(q) = (-th, -th, -q, q, th, th, th, +1)
//   sigma^(2) = (+,+,+,+,+,-,-,-)   n~ = (2,2,1,1,2,2,2,2)   xi = (0,0,0,0,0,1,1,1)
// v_i = script_V(k,y) for i<=5, (V*V)(y) for i=6,7, 2V(y) for i=8;
// w_i = 1(y'=0) for i<=7, V(y') for i=8
void vw_tables(const Lattice& lat, const Potential& pot, const Model& m,
               int i, long k, long y, long yp, double& v, double& w);

// generic evaluation slot G^{(n)}(R, k', u, sigma, x) with (R, u) carried as
// per-axis phasors zeta_l = R_l e^{i 2 pi u_l}
using GEval =
    std::function<cplx(int n, const cplx* zeta, long kp, int sigma, long x)>;

// stationary instantiation G = F[W]_{t,t}; copies W
GEval make_f_geval(const Lattice& lat, const Field& W);

// fixed-s integrand of the eight-term sum, (y, y') restricted to the
// support of v_i w_i; C~ = int_{-a}^{a} ds of this kernel
cplx kernel_fixed_s_bilinear(const CollisionConfig& cfg, const GEval& G,
                             const Field& W, double s, long k0);
CField bilinear_kernel_s(const CollisionConfig& cfg, const GEval& G,
                         const Field& W, double s);

// same values for G = F[W] through cached tables: the eight terms share four
// (xi, sigma2, n, slot) classes whose G(k, x) grids are k0-independent and
// reduce to factorized inverse transforms, and the i=8 double site sum
// contracts against a potential presum
CField bilinear_kernel_s_fast(const CollisionConfig& cfg, const Field& W,
                              double s);

// Gauss-Legendre s-quadrature over [-a, a] of the fixed-s kernel with the
// supplied G; the error estimate doubles the order on three spot panels and
// must stay within cfg.squad.tol.  Result is the real part; the imaginary
// residue is checked against the same tolerance
Field collision_bilinear(const CollisionConfig& cfg, const GEval& G,
                         const Field& W, double tau0);

}  // namespace wkin
