#include "wkin/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wkin {

using std::numbers::pi;

namespace {

double mean_br(double r) { return std::sqrt(1.0 + r * r); }

double c_beta9(double beta) {
  return std::pow(2.0, 7.0 / 6.0) * std::sqrt(3.0) *
         std::cbrt(mean_br(std::pow(16.0, 1.0 / (1.0 - beta)) / 2.0));
}

double c_beta7(int d, double beta) {
  double a = d * (1.0 - beta) / 4.0;
  double gr = std::exp(std::lgamma(a - 0.5) - std::lgamma(a));
  return 0.25 * std::pow(c_beta9(beta) * std::sqrt(pi) * gr, d);
}

double c_beta8(int d, double beta) {
  double t1 = 2.0 * d * std::pow(c_beta9(beta), d);
  double t2 = 2.0 * c_beta7(d, beta) * std::pow(1.0 - 1.0 / d, -d);
  return std::max(t1, t2);
}

}  // namespace

double c_beta6(int d, double beta) {
  return 2.0 + std::pow(2.0, d * (1.0 - beta) / 2.0 + 1.0) *
                   std::pow(1.0 + 2.0 / (pi * beta), d) * 2.0 /
                   (d * (1.0 - beta) - 2.0);
}

double c6_infimum(int d) {
  const int n = 10000;
  double lo = 0.0, hi = 1.0 - 2.0 / d;
  auto scan = [&](double a, double b, double& xbest) {
    double h = (b - a) / (n + 1);
    double vbest = HUGE_VAL;
    for (int i = 1; i <= n; ++i) {
      double x = a + i * h;
      double v = c_beta6(d, x);
      if (v < vbest) {
        vbest = v;
        xbest = x;
      }
    }
    return h;
  };
  double x1 = 0.5 * hi;
  double h = scan(lo, hi, x1);
  double x2 = x1;
  scan(x1 - h, x1 + h, x2);
  return c_beta6(d, x2);
}

Constants constants_table(int d, double beta) {
  if (d < 3) throw std::invalid_argument("constants: d >= 3 required");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("constants: beta outside (0, 1)");
  Constants c;
  c.theorem_valid = beta < 1.0 - 2.0 / d;
  c.d = d;
  c.beta = beta;
  c.pp = (1.0 - beta) / 2.0;
  c.cb9 = c_beta9(beta);
  c.cb7 = c_beta7(d, beta);
  c.cb8 = c_beta8(d, beta);
  c.cb6 = c_beta6(d, beta);
  double pref = 32.0 * (std::pow(2.0, 2.0 * d / 3.0) + 3.0);
  c.c2 = pref * c.cb8;
  c.c4 = pref * std::pow(c.cb9, d);
  c.c6 = c6_infimum(d);
  double e6 = std::pow(2.0, d / 6.0);
  c.c3 = e6 * (e6 + 3.0) * c.c6;
  c.c5 = e6 * (e6 + 3.0) * 8.0;
  c.c1 = std::max(c.c2, std::sqrt(3.0) / 6.0 * c.c3);
  double dp = d * c.pp;
  c.eta = std::pow(2.0 + 4.0 / (pi * beta), d) * std::pow(2.0, -dp) / (dp - 1.0);
  c.p_d = dp < 2.0 ? 2.0 * dp - 2.0 : 2.0;
  c.alpha = 1.0 + c.eta * (1.0 + std::max(1.0 / std::fabs(dp - 2.0), 1.0));
  return c;
}

double error_term(int d, double beta, double lambda, TauSpec tau, TauSpec taut,
                  double T) {
  Constants c = constants_table(d, beta);
  double dp = d * c.pp;
  bool ca = tau.mode == TauMode::Constant;
  bool cb = taut.mode == TauMode::Constant;
  if (tau.mode == taut.mode && (!ca || tau.T0 == taut.T0)) return 0.0;
  if (ca && cb) {
    double e = dp - 1.0;
    return c.eta * T * std::fabs(std::pow(tau.T0, -e) - std::pow(taut.T0, -e)) *
           std::pow(lambda, 2.0 * dp - 2.0);
  }
  double T0 = ca ? tau.T0 : taut.T0;
  double m = std::min(1.0, lambda / std::sqrt(std::min(T, T0)));
  if (dp != 2.0) return c.alpha * T * std::pow(m, c.p_d);
  return (1.0 + c.eta * (1.0 + std::log(std::min(T0, T) / (lambda * lambda) +
                                        std::numbers::e))) *
         T * m * m;
}

}  // namespace wkin
