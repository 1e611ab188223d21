#pragma once
#include <functional>
#include <vector>

#include "wkin/lattice.hpp"

namespace wkin {

struct Quad {
  std::vector<double> x, w;  // nodes and weights on [-1,1]
};

// nodes by Newton iteration on P_n; symmetric, increasing
Quad gauss_legendre(int n);

// composite rule: panels equal subdivisions of [a,b], rule q per panel
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const Quad& q, int panels);
cplx integrate_gl_c(const std::function<cplx(double)>& f, double a, double b,
                    const Quad& q, int panels);

// tanh-sinh for int_0^len g(u) du with the only admissible singularity at
// u = 0: nodes near 0 are exact endpoint distances, so integrable blowups
// like u^{-p}, p < 1, integrate to full precision.  Callers substitute to
// move their singular point to 0.  Levels halve h until the sum settles.
double integrate_ts0(const std::function<double(double)>& g, double len,
                     double tol = 1e-12, int max_level = 9);

}  // namespace wkin
