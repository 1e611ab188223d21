#pragma once
#include <string>

#include "wkin/lattice.hpp"

namespace wkin {

// Symmetric real pair potential with its transform and self-convolution.
// Vhat = dft(V) is real by symmetry; VV = V*V on sites has transform Vhat^2.
// Immutable after construction.
struct Potential {
  Field V;      // site
  Field Vhat;   // spectral
  Field VV;     // site, (V*V)(y) = sum_z V(z) V(y-z)
  double norm16 = 0;  // ||Vhat||_{1/6}
  double norm23 = 0;  // ||Vhat||_{2/3}
};

Potential make_potential_onsite(const Lattice& lat);
Potential make_potential_nearest(const Lattice& lat);
Potential make_potential_exp_decay(const Lattice& lat, double rate);
// fails on any V(y) != V(-y); never symmetrizes
Potential make_potential_values(const Lattice& lat, const Field& values);
Potential make_potential_file(const Lattice& lat, const std::string& path);

// sum_y prod_j <y_j>^p |fcheck(y)| with fcheck = idft(f); <r> = sqrt(1+r^2)
double sobolev_norm(const Lattice& lat, const Field& spec, double p);
double sobolev_norm_sup(const Lattice& lat, const Field& spec, double p);

// M_V shorthand: squared 2/3-norm of Vhat
inline double mv(const Potential& pot) { return pot.norm23 * pot.norm23; }

// script V(k,y) = 1(y=0) Vhat(k)^2 + 2 theta Vhat(k) V(y) + (V*V)(y)
double script_V(const Lattice& lat, const Potential& pot, int theta, long k,
                long y);

}  // namespace wkin
