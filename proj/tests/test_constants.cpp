#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wkin/constants.hpp"

using namespace wkin;

namespace {
// reference evaluation: mpmath at 50 digits; grid infimum cross-checked
// against a 40-digit ternary search (agreement ~1e-13 relative)
struct Frozen {
  int d;
  double beta;
  double c1, c2, c3, c4, c5, c6, cb6, cb7, cb8, cb9, eta, p_d, alpha;
};
const Frozen kTable[] = {
    {3, 0.1, 83177075.977444160, 83177075.977444160, 9579.1993631588058,
     143959.58149747040, 49.941125496954281, 1534.4787315605059,
     5824.1388897655931, 55011.293635875767, 371326.23204216143,
     8.6297361791004707, 3583.9468839265417, 0.70000000000000000,
     9098.7113207366058},
    {3, 0.2, 517177661.54703200, 517177661.54703200, 9579.1993631588058,
     211106.42290560465, 49.941125496954281, 1534.4787315605059,
     1683.6297455318740, 342048.71795438625, 2308828.8461921072,
     9.8043274930960382, 1274.4370320196633, 0.40000000000000000,
     2868.4833220442423},
    {3, 0.3, 41331108488.337070, 41331108488.337070, 9579.1993631588058,
     345932.35364023665, 49.941125496954281, 1534.4787315605059,
     2522.3896503024870, 27335389.211863141, 184513877.18007620,
     11.558843609420171, 2351.6066952601374, 0.10000000000000000,
     4827.9821639550188},
    {4, 0.1, 480420752.19945944, 480420752.19945944, 7352.1148188436490,
     1659331.9709086373, 58.256362045554758, 1009.6222367053421,
     25633.114395178104, 254035.03260332594, 1605752.3048506529,
     8.6297361791004707, 16910.229103181258, 1.6000000000000000,
     101462.37461908755},
    {4, 0.2, 1879665246.6866574, 1879665246.6866574, 7352.1148188436490,
     2764486.3054792554, 58.256362045554758, 1009.6222367053421,
     3095.9924741393016, 993922.14020583474, 6282569.5775973751,
     9.8043274930960382, 2693.4768911959378, 1.2000000000000000,
     9428.1691191857824},
    {4, 0.3, 13032347810.544239, 13032347810.544239, 7352.1148188436490,
     5340731.6374458175, 58.256362045554758, 1009.6222367053421,
     1255.6614339538581, 6891194.6159540072, 43559156.090968539,
     11.558843609420171, 1440.0788269060209, 0.80000000000000000,
     3841.2102050827223},
};
}  // namespace

TEST_CASE("table matches the high-precision reference") {
  for (const Frozen& f : kTable) {
    Constants c = constants_table(f.d, f.beta);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    CHECK(rel(c.c1, f.c1) < 1e-10);
    CHECK(rel(c.c2, f.c2) < 1e-10);
    CHECK(rel(c.c3, f.c3) < 1e-10);
    CHECK(rel(c.c4, f.c4) < 1e-10);
    CHECK(rel(c.c5, f.c5) < 1e-10);
    CHECK(rel(c.c6, f.c6) < 1e-10);
    CHECK(rel(c.cb6, f.cb6) < 1e-10);
    CHECK(rel(c.cb7, f.cb7) < 1e-10);
    CHECK(rel(c.cb8, f.cb8) < 1e-10);
    CHECK(rel(c.cb9, f.cb9) < 1e-10);
    CHECK(rel(c.eta, f.eta) < 1e-10);
    CHECK(rel(c.p_d, f.p_d) < 1e-10);
    CHECK(rel(c.alpha, f.alpha) < 1e-10);
  }
}

TEST_CASE("structure relations") {
  Constants c = constants_table(3, 0.25);
  CHECK(c.c1 == std::max(c.c2, std::sqrt(3.0) / 6.0 * c.c3));
  CHECK(c.c6 <= c.cb6);                 // infimum under any member
  CHECK(c.pp == doctest::Approx(0.375));
  CHECK(c.theorem_valid);
  CHECK_THROWS_AS(constants_table(2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(constants_table(3, 1.5), std::invalid_argument);
  // beta past 1-2/d: computed anyway, flagged, and the d-only pieces that
  // the solver preflight reads stay positive
  Constants f = constants_table(3, 0.5);
  CHECK(!f.theorem_valid);
  CHECK(f.c2 > 0.0);
  CHECK(f.c3 > 0.0);
}

TEST_CASE("error term cases") {
  TauSpec mem{TauMode::Memory, 0.0};
  TauSpec c3{TauMode::Constant, 0.3};
  TauSpec c7{TauMode::Constant, 0.7};
  // same window: exactly zero
  CHECK(error_term(3, 0.3, 0.5, mem, mem, 0.3) == 0.0);
  CHECK(error_term(3, 0.3, 0.5, c3, c3, 0.3) == 0.0);
  // reference evaluation: mpmath
  CHECK(error_term(3, 0.3, 0.5, c3, c7, 0.3) ==
        doctest::Approx(28.997866895812945).epsilon(1e-12));
  CHECK(error_term(4, 0.2, 0.8, {TauMode::Constant, 0.4},
                   {TauMode::Constant, 0.9}, 1.0) ==
        doctest::Approx(1375.7538387706335).epsilon(1e-12));
  CHECK(error_term(3, 0.3, 0.5, mem, c3, 0.3) ==
        doctest::Approx(1435.2509712405404).epsilon(1e-12));
  CHECK(error_term(3, 0.3, 0.2, mem, c3, 0.3) ==
        doctest::Approx(1309.5854720434074).epsilon(1e-12));
}

TEST_CASE("error term, one-constant case frozen values") {
  TauSpec mem{TauMode::Memory, 0.0};
  CHECK(error_term(4, 0.1, 1.5, {TauMode::Constant, 0.5}, mem, 2.0) ==
        doctest::Approx(202924.74923817509).epsilon(1e-12));
  // d pp = 2 branch (d=5, beta=0.2)
  CHECK(error_term(5, 0.2, 0.5, {TauMode::Constant, 0.3}, mem, 0.3) ==
        doctest::Approx(6060.2374694685676).epsilon(1e-12));
}

TEST_CASE("limits and continuity") {
  TauSpec mem{TauMode::Memory, 0.0};
  TauSpec cst{TauMode::Constant, 0.3};
  // non-increasing in lambda; flat above the min(1,.) kink at sqrt(T0),
  // strictly decreasing below it (p_d = 0.1 here, so the decay is slow)
  double prev = 1e300;
  for (double lam : {1.0, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05}) {
    double e = error_term(3, 0.3, lam, mem, cst, 0.3);
    CHECK(e <= prev);
    if (lam < std::sqrt(0.3) && prev < 1e300) CHECK(e < prev);
    prev = e;
  }
  CHECK(error_term(3, 0.3, 1e-12, mem, cst, 0.3) <
        error_term(3, 0.3, 1.0, mem, cst, 0.3) * 0.1);
  // T -> 0 sends it to zero (linearly in T once the kink saturates)
  CHECK(error_term(3, 0.3, 0.5, mem, cst, 1e-12) < 1e-8);
  // continuity across the min(1, .) kink at lambda = sqrt(min(T,T0))
  double lc = std::sqrt(0.3);
  double lo = error_term(3, 0.3, lc - 1e-9, mem, cst, 0.3);
  double hi = error_term(3, 0.3, lc + 1e-9, mem, cst, 0.3);
  CHECK(std::abs(lo - hi) < 1e-6);
  // both-constant case: continuous in T0tilde -> T0 with limit zero
  double e1 = error_term(3, 0.3, 0.5, cst, {TauMode::Constant, 0.3 + 1e-9}, 0.3);
  CHECK(e1 < 1e-5);
}
