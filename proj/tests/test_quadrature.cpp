#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wkin/quadrature.hpp"

using namespace wkin;

TEST_CASE("order 16 nodes and weights") {
  // reference evaluation: mpmath root-finding on P_16 at 40 digits
  const double xs[8] = {0.095012509837637440, 0.28160355077925891,
                        0.45801677765722739,  0.61787624440264375,
                        0.75540440835500303,  0.86563120238783174,
                        0.94457502307323258,  0.98940093499164993};
  const double ws[8] = {0.18945061045506850,  0.18260341504492359,
                        0.16915651939500254,  0.14959598881657673,
                        0.12462897125553387,  0.095158511682492785,
                        0.062253523938647893, 0.027152459411754095};
  Quad q = gauss_legendre(16);
  REQUIRE(q.x.size() == 16);
  for (int i = 0; i < 8; ++i) {
    CHECK(q.x[8 + i] == doctest::Approx(xs[i]).epsilon(1e-14));
    CHECK(q.x[7 - i] == doctest::Approx(-xs[i]).epsilon(1e-14));
    CHECK(q.w[8 + i] == doctest::Approx(ws[i]).epsilon(1e-13));
    CHECK(q.w[7 - i] == doctest::Approx(ws[i]).epsilon(1e-13));
  }
}

TEST_CASE("polynomial exactness") {
  for (int n : {4, 8, 16}) {
    Quad q = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; p += 3) {
      double got = integrate_gl([p](double x) { return std::pow(x, p); }, 0.0,
                                1.0, q, 1);
      CHECK(got == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("composite panels") {
  Quad q = gauss_legendre(8);
  double got = integrate_gl([](double x) { return std::sin(x); }, 0.0, 3.0, q, 8);
  CHECK(got == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-13));
  cplx gc = integrate_gl_c([](double s) { return std::polar(1.0, 2.0 * s); },
                           -1.0, 1.0, q, 8);
  CHECK(gc.real() == doctest::Approx(std::sin(2.0)).epsilon(1e-13));
  CHECK(std::abs(gc.imag()) < 1e-14);
}

TEST_CASE("tanh-sinh handles a singularity at zero") {
  double got = integrate_ts0([](double u) { return 1.0 / std::sqrt(u); }, 1.0);
  CHECK(got == doctest::Approx(2.0).epsilon(1e-12));
  got = integrate_ts0([](double u) { return std::log(u); }, 1.0);
  CHECK(got == doctest::Approx(-1.0).epsilon(1e-12));
  // two-sided singular integral split at the interior point, each side
  // substituted so its blowup lands on u = 0
  got = integrate_ts0([](double u) { return std::pow(u, -0.45); }, 0.3) +
        integrate_ts0([](double u) { return std::pow(u, -0.35); }, 0.7);
  double ref = std::pow(0.3, 0.55) / 0.55 + std::pow(0.7, 0.65) / 0.65;
  CHECK(got == doctest::Approx(ref).epsilon(1e-12));
  // regular integrand over a short interval still converges
  got = integrate_ts0([](double u) { return std::cos(u); }, 0.9);
  CHECK(got == doctest::Approx(std::sin(0.9)).epsilon(1e-12));
}
