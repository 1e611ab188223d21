#pragma once
#include <complex>
#include <cstdint>
#include <vector>

namespace wkin {

using cplx = std::complex<double>;
using Field = std::vector<double>;   // real spectral or site data, flat layout
using CField = std::vector<cplx>;

// Centered window {-(L-1)/2, ..., L/2}^d shared by sites and modes; modes are
// the same integers scaled by 1/L.  Flat layout is row-major over centered
// coordinates, axis 0 slowest.  Index arithmetic never leaves the integers;
// trigonometry sees 2*pi*m/L in a single multiplication.
class Lattice {
public:
  Lattice(int d, int L, double c0 = 0.0);

  int dim() const { return d_; }
  int side() const { return L_; }
  double c0() const { return c0_; }
  long size() const { return n_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  int coord(long i, int axis) const {
    return int((i / stride_[axis]) % L_) + lo_;
  }
  void coords(long i, int* out) const {
    for (int a = 0; a < d_; ++a) out[a] = coord(i, a);
  }
  long flat(const int* c) const;  // accepts any integers, reduces mod L

  long add(long i, long j) const {
    return pair_tab_ ? add_tab_[i * n_ + j] : combine(i, j, +1);
  }
  long sub(long i, long j) const {
    return pair_tab_ ? sub_tab_[i * n_ + j] : combine(i, j, -1);
  }
  long neg(long i) const { return neg_tab_[i]; }
  long zero() const { return zero_; }

  double omega(long i) const { return omega_[i]; }
  double kfrac(long i, int axis) const { return double(coord(i, axis)) / L_; }

  // e^{-i 2 pi r / L} for any integer r
  cplx root(long r) const { return root_[((r % L_) + L_) % L_]; }
  // sum_a coord(i,a)*coord(j,a) reduced mod L; pairs with root() for
  // e^{-i 2 pi k.y} at exact table phases
  long dot(long i, long j) const {
    long s = 0;
    for (int a = 0; a < d_; ++a) s += long(coord(i, a)) * coord(j, a);
    return s;
  }

private:
  long combine(long i, long j, int sgn) const;

  int d_, L_, lo_, hi_;
  double c0_;
  long n_;
  bool pair_tab_;
  std::vector<long> stride_;
  std::vector<int32_t> add_tab_, sub_tab_, neg_tab_;
  std::vector<double> omega_;
  std::vector<cplx> root_;
  long zero_;
};

double mass(const Lattice& lat, const Field& W);    // (1/L^d) sum W
double energy(const Lattice& lat, const Field& W);  // (1/L^d) sum omega W

}  // namespace wkin
