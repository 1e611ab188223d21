#include "wkin/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace wkin {

using std::numbers::pi;

Quad gauss_legendre(int n) {
  Quad q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like seed, then Newton on P_n
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p1 = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, pm;
      p1 = x;
      for (int j = 2; j <= n; ++j) {
        pm = p0;
        p0 = p1;
        p1 = ((2 * j - 1) * x * p0 - (j - 1) * pm) / j;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p1 = dp;  // keep P'_n for the weight
        break;
      }
      p1 = dp;
    }
    q.x[n - 1 - i] = x;
    q.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * p1 * p1);
  }
  return q;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const Quad& q, int panels) {
  double s = 0;
  for (int p = 0; p < panels; ++p) {
    double a0 = a + (b - a) * p / panels;
    double b0 = a + (b - a) * (p + 1) / panels;
    double mid = 0.5 * (a0 + b0), half = 0.5 * (b0 - a0);
    for (size_t i = 0; i < q.x.size(); ++i)
      s += half * q.w[i] * f(mid + half * q.x[i]);
  }
  return s;
}

cplx integrate_gl_c(const std::function<cplx(double)>& f, double a, double b,
                    const Quad& q, int panels) {
  cplx s = 0;
  for (int p = 0; p < panels; ++p) {
    double a0 = a + (b - a) * p / panels;
    double b0 = a + (b - a) * (p + 1) / panels;
    double mid = 0.5 * (a0 + b0), half = 0.5 * (b0 - a0);
    for (size_t i = 0; i < q.x.size(); ++i)
      s += half * q.w[i] * f(mid + half * q.x[i]);
  }
  return s;
}

double integrate_ts0(const std::function<double(double)>& g, double len,
                     double tol, int max_level) {
  // abscissae near 0 are carried as exact distances 2/(e^{2s}+1); tanh
  // would round to +-1 there and silently truncate the singular tail
  double half = 0.5 * len;
  auto eval = [&](double t) {  // t >= 0; sums the node pair (+t, -t)
    double s = 0.5 * pi * std::sinh(t);
    double es = std::exp(-2.0 * s);
    double dist = 2.0 * es / (1.0 + es);          // 1 - tanh(s)
    double w = 0.5 * pi * std::cosh(t) * 4.0 * es / ((1.0 + es) * (1.0 + es));
    if (w == 0.0 || half * dist == 0.0) return 0.0;
    double lo = half * dist;                      // exact near the blowup
    if (t == 0.0) return w * g(half);
    return w * (g(lo) + g(len - lo));             // far end is regular
  };
  const double tmax = 6.5;
  double h = 0.5;
  double sum = eval(0.0);
  for (double t = h; t <= tmax; t += h) sum += eval(t);
  double prev = sum * h * half;
  for (int lev = 1; lev <= max_level; ++lev) {
    h *= 0.5;
    double add = 0;
    for (double t = h; t <= tmax; t += 2 * h) add += eval(t);
    sum += add;
    double cur = sum * h * half;
    if (lev >= 4 && std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace wkin
