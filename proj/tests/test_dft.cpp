#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wkin/dft.hpp"
#include "wkin/rng.hpp"

using namespace wkin;

namespace {

CField random_cfield(const Lattice& lat, uint64_t seed) {
  Rng rng(seed);
  CField f(lat.size());
  for (auto& z : f) z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return f;
}

// phases built from std::polar directly, independent of the root table
CField dft_naive(const Lattice& lat, const CField& f) {
  CField out(lat.size());
  std::vector<int> kc(lat.dim()), yc(lat.dim());
  for (long k = 0; k < lat.size(); ++k) {
    lat.coords(k, kc.data());
    cplx acc = 0;
    for (long y = 0; y < lat.size(); ++y) {
      lat.coords(y, yc.data());
      double ph = 0;
      for (int a = 0; a < lat.dim(); ++a)
        ph += double(kc[a]) * yc[a] / lat.side();
      acc += f[y] * std::polar(1.0, -2.0 * std::numbers::pi * ph);
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("direct transform matches polar-phase loop") {
  for (auto [d, L] : {std::pair{1, 4}, {2, 3}, {3, 4}}) {
    Lattice lat(d, L);
    CField f = random_cfield(lat, 99 + d);
    CField a = dft(lat, f), b = dft_naive(lat, f);
    for (long i = 0; i < lat.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("frozen anchor, d=2 L=3") {
  // reference evaluation: numpy double-loop oracle, centered row-major
  Lattice lat(2, 3);
  CField f(9);
  for (int i = 0; i < 9; ++i)
    f[i] = cplx(0.1 * i - 0.05 * (i % 3), 0.02 * i * i);
  CField g = dft(lat, f);
  const double re[9] = {-1.1102230246251565e-16, -2.4941531628991829,
                        -1.1102230246251565e-16, -0.83138438763306066,
                        3.1500000000000004,      0.83138438763306144,
                        2.2204460492503131e-16,  2.4941531628991838,
                        4.4408920985006262e-16};
  const double im[9] = {-0.35999999999999988, 1.0188457268119904,
                        0.3600000000000001,   0.19980762113533246,
                        4.0800000000000001,   -0.31980762113533101,
                        0.35999999999999999,  -2.0988457268119891,
                        -0.36000000000000021};
  for (int i = 0; i < 9; ++i) {
    CHECK(g[i].real() == doctest::Approx(re[i]).epsilon(1e-12));
    CHECK(g[i].imag() == doctest::Approx(im[i]).epsilon(1e-12));
  }
}

TEST_CASE("inverse and factorized paths") {
  for (auto [d, L] : {std::pair{1, 6}, {2, 4}, {3, 3}}) {
    Lattice lat(d, L);
    CField f = random_cfield(lat, 7 * d + L);
    CField g = dft(lat, f);
    CField gf = dft_fact(lat, f);
    for (long i = 0; i < lat.size(); ++i) CHECK(std::abs(g[i] - gf[i]) < 1e-12);
    CField back = idft(lat, g);
    CField backf = idft_fact(lat, g);
    for (long i = 0; i < lat.size(); ++i) {
      CHECK(std::abs(back[i] - f[i]) < 1e-13);
      CHECK(std::abs(backf[i] - f[i]) < 1e-13);
    }
  }
}

TEST_CASE("Parseval") {
  Lattice lat(2, 5);
  CField f = random_cfield(lat, 1), g = random_cfield(lat, 2);
  CField fh = dft(lat, f), gh = dft(lat, g);
  cplx lhs = 0, rhs = 0;
  for (long i = 0; i < lat.size(); ++i) {
    lhs += fh[i] * std::conj(gh[i]);
    rhs += f[i] * std::conj(g[i]);
  }
  lhs /= double(lat.size());
  CHECK(std::abs(lhs - rhs) < 1e-12);
}
