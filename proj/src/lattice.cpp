#include "wkin/lattice.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wkin {

namespace {
constexpr long kPairTableCap = 512;  // N*N int32 tables stay under 2 MB
}

Lattice::Lattice(int d, int L, double c0) : d_(d), L_(L), c0_(c0) {
  if (d < 1 || d > 6) throw std::invalid_argument("lattice: d out of range");
  if (L < 2) throw std::invalid_argument("lattice: L < 2");
  lo_ = -((L - 1) / 2);
  hi_ = L / 2;
  n_ = 1;
  for (int a = 0; a < d; ++a) n_ *= L;
  stride_.assign(d, 1);
  for (int a = d - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * L;

  root_.resize(L);
  for (int r = 0; r < L; ++r) {
    double th = -2.0 * std::numbers::pi * r / L;
    root_[r] = {std::cos(th), std::sin(th)};
  }

  // per-axis cos table indexed by digit, then omega by digit sum
  std::vector<double> cs(L);
  for (int g = 0; g < L; ++g)
    cs[g] = std::cos(2.0 * std::numbers::pi * (g + lo_) / L);
  omega_.resize(n_);
  for (long i = 0; i < n_; ++i) {
    double w = c0_;
    for (int a = 0; a < d_; ++a) w -= cs[(i / stride_[a]) % L_];
    omega_[i] = w;
  }

  neg_tab_.resize(n_);
  for (long i = 0; i < n_; ++i) {
    long r = 0;
    for (int a = 0; a < d_; ++a) {
      long g = (i / stride_[a]) % L_;
      long c = -(g + lo_);
      r += (((c - lo_) % L_ + L_) % L_) * stride_[a];
    }
    neg_tab_[i] = int32_t(r);
  }

  pair_tab_ = n_ <= kPairTableCap;
  if (pair_tab_) {
    add_tab_.resize(n_ * n_);
    sub_tab_.resize(n_ * n_);
    for (long i = 0; i < n_; ++i)
      for (long j = 0; j < n_; ++j) {
        add_tab_[i * n_ + j] = int32_t(combine(i, j, +1));
        sub_tab_[i * n_ + j] = int32_t(combine(i, j, -1));
      }
  }

  int zc[6] = {0, 0, 0, 0, 0, 0};
  zero_ = flat(zc);
}

long Lattice::flat(const int* c) const {
  long r = 0;
  for (int a = 0; a < d_; ++a) {
    long g = ((long(c[a]) - lo_) % L_ + L_) % L_;
    r += g * stride_[a];
  }
  return r;
}

long Lattice::combine(long i, long j, int sgn) const {
  long r = 0;
  for (int a = 0; a < d_; ++a) {
    long gi = (i / stride_[a]) % L_;
    long gj = (j / stride_[a]) % L_;
    long c = (gi + lo_) + sgn * (gj + lo_);
    r += (((c - lo_) % L_ + L_) % L_) * stride_[a];
  }
  return r;
}

double mass(const Lattice& lat, const Field& W) {
  double s = 0;
  for (double w : W) s += w;
  return s / double(lat.size());
}

double energy(const Lattice& lat, const Field& W) {
  double s = 0;
  for (long i = 0; i < lat.size(); ++i) s += lat.omega(i) * W[i];
  return s / double(lat.size());
}

}  // namespace wkin
