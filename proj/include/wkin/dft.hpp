#pragma once
#include "wkin/lattice.hpp"

namespace wkin {

// fhat(k) = sum_y e^{-i 2 pi k.y} f(y); inverse carries the 1/L^d.
// Parseval: (1/L^d) sum_k fhat ghat* = sum_y f g*.
CField dft(const Lattice& lat, const CField& site);
CField idft(const Lattice& lat, const CField& spec);

// dimension-factorized path, O(d L^{d+1}); same values as the direct sums
CField dft_fact(const Lattice& lat, const CField& site);
CField idft_fact(const Lattice& lat, const CField& spec);

CField dft(const Lattice& lat, const Field& site);
Field real_part(const CField& f);

}  // namespace wkin
