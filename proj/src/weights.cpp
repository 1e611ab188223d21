#include "wkin/weights.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wkin/constants.hpp"
#include "wkin/quadrature.hpp"
#include "wkin/rng.hpp"

namespace wkin {

using std::numbers::pi;

WeightFns::WeightFns(int L, double beta) : L_(L), beta_(beta) {
  Lb_ = std::pow(double(L), beta);
  aL_ = 1.5 * Lb_;
  bL_ = std::max(2.0 * Lb_, double(L) / 8.0);
}

double WeightFns::gammaf(double r) const {
  double ar = std::fabs(r);
  if (ar <= aL_) return 0.0;
  if (ar >= bL_) return 1.0 / 3.0;
  return (ar - aL_) / (bL_ - aL_) / 3.0;
}

double WeightFns::varphi(double r) const {
  double ar = std::fabs(r);
  if (ar <= Lb_) return std::sqrt(mean_br(r));
  return std::sqrt(mean_br(Lb_)) / std::pow(mean_br(ar - Lb_), 0.5 * beta_);
}

double WeightFns::weight(double r, double x) const {
  double mx = mean_br(x);
  return std::pow(mx, 1.0 / 3.0 - gammaf(r)) *
         std::max(1.0, varphi(r) / std::sqrt(mx));
}

double WeightFns::weight_d(const double* R, const int* x, int d) const {
  double p = 1;
  for (int a = 0; a < d; ++a) p *= weight(R[a], double(x[a]));
  return p;
}

double WeightFns::weight_d(const std::vector<double>& R,
                           const std::vector<int>& x) const {
  return weight_d(R.data(), x.data(), int(R.size()));
}

double L_beta(double lambda, double tau0, double beta) {
  double w = tau0 / (lambda * lambda);
  return std::max(std::pow(4.0 * w, 1.0 / beta), w);
}

double singular_axis_integral(double r, double s, double p) {
  if (!(s > 0.0) || !(r >= 0.0) || !(p > 0.0 && p < 0.5))
    throw std::invalid_argument(
        "singular_axis_integral: need s > 0, r >= 0, p in (0, 1/2)");
  // each piece is written in the distance v from its singular point, with
  // the cancellation r - s sin(.) resolved by half-angle identities so the
  // blowup profile stays exact down to subnormal distances
  if (r > s) {
    // sharp but regular peak at k = 1/2: r - s cos(pi v) with v = 1/2 - k
    double gap = r - s;
    return integrate_ts0(
        [&](double v) {
          double sh = std::sin(0.5 * pi * v);
          return std::pow(gap + 2.0 * s * sh * sh, -p);
        },
        0.5, 1e-11);
  }
  if (r == s)
    // exact touch: the gap is 2 s sin^2(pi v/2); powers taken separately so
    // subnormal distances cannot underflow through the square
    return integrate_ts0(
        [&](double v) {
          double sh = std::sin(0.5 * pi * v);
          return std::pow(2.0 * s, -p) * std::pow(sh, -2.0 * p);
        },
        0.5, 1e-11);
  // r < s: singular at sin(pi k*) = r/s; below k* the gap factors as
  // 2 sin(pi v/2) (r sin(pi v/2) + B cos(pi v/2)), above with the sign of
  // the r term flipped, B = sqrt(s^2 - r^2)
  double ks = std::asin(r / s) / pi;
  double B = std::sqrt((s - r) * (s + r));
  auto piece = [&](double sgn, double len) {
    if (!(len > 0.0)) return 0.0;
    return integrate_ts0(
        [&](double v) {
          double sh = std::sin(0.5 * pi * v), ch = std::cos(0.5 * pi * v);
          return std::pow(2.0 * sh, -p) * std::pow(sgn * r * sh + B * ch, -p);
        },
        len, 1e-11);
  };
  return piece(+1.0, ks) + piece(-1.0, 0.5 - ks);
}

namespace {

using C = std::complex<double>;

// z_xi(k) = 1 - e^{-i 2 pi (k + xi/2)}; |z_0(k)| = 2|sin(pi k)|, and the
// zero of z_xi sits at k = xi/2
C zfun(int xi, double k) {
  return 1.0 - std::polar(1.0, -2.0 * pi * (k + 0.5 * xi));
}

// reduce to (-1/2, 1/2]
double torus_frac(double v) {
  double r = v - std::floor(v + 0.5);
  return r == -0.5 ? 0.5 : r;
}

int wrap_site(long v, int L) {
  int lo = -((L - 1) / 2);
  long m = ((v - lo) % L + L) % L;
  return int(m) + lo;
}

int draw_site(Rng& g, int L) {
  return -((L - 1) / 2) + int(g.below(uint64_t(L)));
}

double log_uniform(Rng& g, double lo, double hi) {
  return lo * std::exp(g.uniform() * std::log(hi / lo));
}

// radius scales span all weight branches; exact zero exercises the floor
double draw_radius(Rng& g, int L) {
  return g.uniform() < 0.08 ? 0.0 : log_uniform(g, 1e-3, 3.0 * L);
}

double gl_refine(const std::function<double(double)>& f, double a, double b,
                 const Quad& q, int p0, int pmax, double rtol) {
  double prev = integrate_gl(f, a, b, q, p0);
  for (int p = 2 * p0; p <= pmax; p *= 2) {
    double cur = integrate_gl(f, a, b, q, p);
    if (std::fabs(cur - prev) <= rtol * std::max(std::fabs(cur), 1e-300))
      return cur;
    prev = cur;
  }
  return prev;
}

std::string nstr(const char* k, double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%s=%.6g", k, v);
  return b;
}

std::string vstr(const char* k, const std::vector<double>& v) {
  std::string s = std::string(k) + "=(";
  char b[32];
  for (size_t a = 0; a < v.size(); ++a) {
    std::snprintf(b, sizeof b, "%s%.5g", a ? "," : "", v[a]);
    s += b;
  }
  return s + ")";
}

std::string istr(const char* k, const std::vector<int>& v) {
  std::string s = std::string(k) + "=(";
  char b[16];
  for (size_t a = 0; a < v.size(); ++a) {
    std::snprintf(b, sizeof b, "%s%d", a ? "," : "", v[a]);
    s += b;
  }
  return s + ")";
}

struct SweepCtx {
  const WeightFns& w;
  int d, L;
  Constants ct;
  Quad q8, q16;
  std::vector<double> az[2];  // |z_xi| over the centered mode window
  std::vector<C> zc[2];
};

// Phi(r,x) / (Phi(R',xt) Phi(|s z|,yt)) against the two-branch closed form
double fam_pointwise(const SweepCtx& c, Rng g, std::string* desc) {
  int L = c.L;
  int xi = int(g.below(2)), sg = g.below(2) ? 1 : -1;
  double r = draw_radius(g, L);
  double k = g.uniform() - 0.5, kp = g.uniform() - 0.5, u = g.uniform() - 0.5;
  int x = draw_site(g, L), y = draw_site(g, L), yp = draw_site(g, L);
  double win = 0.25 * c.w.Lb(), s;
  do s = g.uniform(-1.25 * win, 1.25 * win);
  while (std::fabs(s) > win);
  C z = zfun(xi, k);
  double az = std::abs(z);
  double rp = std::abs(std::polar(r, 2.0 * pi * (u - kp)) + s * z);
  int xt = wrap_site(long(x) + sg * long(y) - yp, L);
  int yt = wrap_site(long(y) + yp, L);
  double lhs =
      c.w.weight(r, x) /
      (c.w.weight(rp, xt) * c.w.weight(std::fabs(s) * az, yt));
  double m1 = 1.0 / std::sqrt(mean_br(std::fabs(r) - std::fabs(s) * az));
  double m2 = std::pow(mean_br(s * az), -c.ct.pp);
  double rhs = c.ct.cb9 * std::pow(mean_br(y) * mean_br(yp), 2.0 / 3.0) *
               std::max(m1, m2);
  if (desc)
    *desc = nstr("r", r) + " " + nstr("s", s) + " " + nstr("k", k) + " " +
            nstr("u", u) + " " + nstr("k'", kp) + " " + nstr("xi", xi) + " " +
            nstr("sigma", sg) + " " + nstr("x", x) + " " + nstr("y", y) + " " +
            nstr("y'", yp);
  return lhs / rhs;
}

// s-window integral at one fixed admissible mode vs the per-axis closed form
double fam_fixed_mode(const SweepCtx& c, Rng g, std::string* desc) {
  int d = c.d, L = c.L;
  int xi = int(g.below(2)), sg = g.below(2) ? 1 : -1;
  std::vector<double> R(d), kred(d), az(d);
  std::vector<C> base(d), z(d);
  std::vector<int> x(d), y(d), yp(d), xt(d), yt(d);
  for (int a = 0; a < d; ++a) {
    R[a] = draw_radius(g, L);
    double uu = g.uniform() - 0.5, kp = g.uniform() - 0.5;
    base[a] = std::polar(R[a], 2.0 * pi * (uu - kp));
    double kr;
    int j;
    do {
      j = draw_site(g, L);
      kr = torus_frac(double(j) / L - 0.5 * xi);
    } while (kr == 0.0);
    kred[a] = kr;
    z[a] = zfun(xi, double(j) / L);
    az[a] = std::abs(z[a]);
    x[a] = draw_site(g, L);
    y[a] = draw_site(g, L);
    yp[a] = draw_site(g, L);
    xt[a] = wrap_site(long(x[a]) + sg * long(y[a]) - yp[a], L);
    yt[a] = wrap_site(long(y[a]) + yp[a], L);
  }
  double numer = 1.0, ybar = 1.0, kprod = 1.0;
  for (int a = 0; a < d; ++a) {
    numer *= c.w.weight(R[a], x[a]);
    ybar *= std::pow(mean_br(y[a]) * mean_br(yp[a]), 2.0 / 3.0);
    kprod *= std::pow(std::fabs(kred[a]), -1.0 / double(d));
  }
  auto f = [&](double s) {
    double v = numer;
    for (int a = 0; a < d; ++a)
      v /= c.w.weight(std::abs(base[a] + s * z[a]), xt[a]) *
           c.w.weight(std::fabs(s) * az[a], yt[a]);
    return v;
  };
  double win = 0.25 * c.w.Lb();
  double lhs = gl_refine(f, -win, 0.0, c.q16, 4, 64, 1e-8) +
               gl_refine(f, 0.0, win, c.q16, 4, 64, 1e-8);
  double rhs = c.ct.cb7 * ybar * kprod;
  if (desc)
    *desc = vstr("R", R) + " " + vstr("k", kred) + " " + istr("x", x) + " " +
            istr("y", y) + " " + istr("y'", yp) + " " + nstr("xi", xi) + " " +
            nstr("sigma", sg);
  return lhs / rhs;
}

// s-window integral summed over all modes, admissible window widths only
double fam_mode_sum(const SweepCtx& c, Rng g, std::string* desc) {
  int d = c.d, L = c.L;
  int xi = int(g.below(2)), sg = g.below(2) ? 1 : -1;
  double lam, t0;
  do {
    lam = log_uniform(g, 0.25, 4.0);
    t0 = log_uniform(g, 0.01, 1.0);
  } while (L_beta(lam, t0, c.ct.beta) > L);
  double a = t0 / (lam * lam);
  std::vector<double> R(d);
  std::vector<C> base(d);
  std::vector<int> x(d), y(d), yp(d), xt(d), yt(d);
  for (int ax = 0; ax < d; ++ax) {
    R[ax] = draw_radius(g, L);
    double uu = g.uniform() - 0.5;
    double kp = double(draw_site(g, L)) / L;
    base[ax] = std::polar(R[ax], 2.0 * pi * (uu - kp));
    x[ax] = draw_site(g, L);
    y[ax] = draw_site(g, L);
    yp[ax] = draw_site(g, L);
    xt[ax] = wrap_site(long(x[ax]) + sg * long(y[ax]) - yp[ax], L);
    yt[ax] = wrap_site(long(y[ax]) + yp[ax], L);
  }
  double numer = 1.0, ybar = 1.0;
  for (int ax = 0; ax < d; ++ax) {
    numer *= c.w.weight(R[ax], x[ax]);
    ybar *= std::pow(mean_br(y[ax]) * mean_br(yp[ax]), 2.0 / 3.0);
  }
  const std::vector<double>& azt = c.az[xi];
  const std::vector<C>& zt = c.zc[xi];
  auto f = [&](double s) {
    double v = numer;
    for (int ax = 0; ax < d; ++ax) {
      double acc = 0.0;
      for (int j = 0; j < L; ++j)
        acc += 1.0 / (c.w.weight(std::abs(base[ax] + s * zt[j]), xt[ax]) *
                      c.w.weight(std::fabs(s) * azt[j], yt[ax]));
      v *= acc / L;
    }
    return v;
  };
  double lhs = gl_refine(f, -a, 0.0, c.q16, 2, 16, 1e-6) +
               gl_refine(f, 0.0, a, c.q16, 2, 16, 1e-6);
  double rhs = c.ct.cb8 * ybar;
  if (desc)
    *desc = nstr("lambda", lam) + " " + nstr("tau0", t0) + " " + vstr("R", R) +
            " " + istr("x", x) + " " + istr("y", y) + " " + istr("y'", yp) +
            " " + nstr("xi", xi) + " " + nstr("sigma", sg);
  return lhs / rhs;
}

// one-axis singular kernel vs (1 + 2/(pi beta)) s^{-(1-beta)/2}
double fam_singular(const SweepCtx& c, Rng g, std::string* desc) {
  double s = log_uniform(g, 1e-3, 1e3);
  double r;
  switch (int(g.below(4))) {
    case 0: r = 0.0; break;
    case 1: r = s * g.uniform(); break;
    case 2: r = s; break;
    default: r = s * (1.0 + log_uniform(g, 1e-3, 10.0));
  }
  double lhs = singular_axis_integral(r, s, c.ct.pp);
  double rhs = (1.0 + 2.0 / (pi * c.ct.beta)) * std::pow(s, -c.ct.pp);
  if (desc) *desc = nstr("r", r) + " " + nstr("s", s);
  return lhs / rhs;
}

// time-integrated gap between two window choices vs the comparison error term
double fam_mismatch(const SweepCtx& c, Rng g, std::string* desc) {
  int d = c.d, L = c.L;
  int xi = int(g.below(2));
  int pair = int(g.below(4));
  TauSpec t1, t2;
  double T = 0.0, lam = 1.0, wmax = 0.0;
  do {
    lam = log_uniform(g, 0.3, 3.0);
    T = log_uniform(g, 0.02, 1.0);
    t1 = TauSpec{TauMode::Memory, 0.0};
    t2 = t1;
    if (pair == 1) {
      t1 = TauSpec{TauMode::Constant, log_uniform(g, 0.02, 1.0)};
      t2 = TauSpec{TauMode::Constant,
                   g.uniform() < 0.25 ? t1.T0 : log_uniform(g, 0.02, 1.0)};
    } else if (pair == 2) {
      t2 = TauSpec{TauMode::Constant, log_uniform(g, 0.02, 1.0)};
    } else if (pair == 3) {
      t1 = TauSpec{TauMode::Constant, log_uniform(g, 0.02, 1.0)};
    }
    auto wof = [&](const TauSpec& t) {
      return t.mode == TauMode::Memory ? T : t.T0;
    };
    wmax = std::max(wof(t1), wof(t2));
  } while (L_beta(lam, wmax, c.ct.beta) > L);
  std::vector<double> R(d);
  for (int ax = 0; ax < d; ++ax) R[ax] = draw_radius(g, L);
  if (desc)
    *desc = nstr("pair", pair) + " " + nstr("lambda", lam) + " " +
            nstr("T", T) + " " + nstr("T0", t1.T0) + " " + nstr("T0'", t2.T0) +
            " " + vstr("R", R) + " " + nstr("xi", xi);
  double rhs = error_term(d, c.ct.beta, lam, t1, t2, T);
  // identical windows: the gap integrates to zero exactly, no quadrature
  if (t1.mode == t2.mode && (t1.mode == TauMode::Memory || t1.T0 == t2.T0))
    return 0.0;
  const std::vector<double>& azt = c.az[xi];
  double il2 = 1.0 / (lam * lam), p = c.ct.pp;
  auto h = [&](double s) {
    double v = 1.0;
    for (int ax = 0; ax < d; ++ax) {
      double acc = 0.0;
      for (int j = 0; j < L; ++j)
        acc += std::pow(mean_br(R[ax] - s * azt[j]), -p);
      v *= acc / L;
    }
    return v;
  };
  // cumulative integral of h: panel prefix sums, partial panels finished by
  // the same rule, so H carries no interpolation error
  double smax = il2 * wmax;
  const int P = 64;
  std::vector<double> pref(P + 1, 0.0);
  for (int i = 0; i < P; ++i)
    pref[i + 1] =
        pref[i] + integrate_gl(h, smax * i / P, smax * (i + 1) / P, c.q8, 1);
  auto H = [&](double sv) {
    sv = std::min(sv, smax);
    int i = std::min(P - 1, int(sv / smax * P));
    double a0 = smax * i / P;
    return pref[i] + (sv > a0 ? integrate_gl(h, a0, sv, c.q8, 1) : 0.0);
  };
  auto win1 = [&](double t) {
    return il2 * (t1.mode == TauMode::Memory ? T - t : t1.T0);
  };
  auto win2 = [&](double t) {
    return il2 * (t2.mode == TauMode::Memory ? T - t : t2.T0);
  };
  auto gt = [&](double t) { return std::fabs(H(win2(t)) - H(win1(t))); };
  double lhs;
  if (t1.mode == TauMode::Constant && t2.mode == TauMode::Constant) {
    lhs = T * gt(0.0);
  } else {
    // the varying leg crosses the constant one where T - t = T0
    double T0c = t1.mode == TauMode::Constant ? t1.T0 : t2.T0;
    double cut = T - T0c > 0.0 && T - T0c < T ? T - T0c : 0.0;
    lhs = (cut > 0.0 ? gl_refine(gt, 0.0, cut, c.q16, 2, 16, 1e-8) : 0.0) +
          gl_refine(gt, cut, T, c.q16, 2, 16, 1e-8);
  }
  if (rhs == 0.0)
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return lhs / rhs;
}

// mode-summed inverse weight over the short window vs the infimum constant
double fam_inverse_weight(const SweepCtx& c, Rng g, std::string* desc) {
  int d = c.d, L = c.L;
  int xi = int(g.below(2));
  std::vector<int> x(d);
  for (int ax = 0; ax < d; ++ax) x[ax] = draw_site(g, L);
  const std::vector<double>& azt = c.az[xi];
  auto f = [&](double s) {
    double v = 1.0;
    for (int ax = 0; ax < d; ++ax) {
      double acc = 0.0;
      for (int j = 0; j < L; ++j) acc += 1.0 / c.w.weight(s * azt[j], x[ax]);
      v *= acc / L;
    }
    return v;
  };
  double win = 0.5 * std::pow(double(L), 1.0 / 7.0);
  double lhs = 2.0 * gl_refine(f, 0.0, win, c.q16, 4, 64, 1e-8);
  double rhs = c.ct.c6;
  for (int ax = 0; ax < d; ++ax) rhs *= std::pow(mean_br(x[ax]), 1.0 / 6.0);
  if (desc) *desc = istr("x", x) + " " + nstr("xi", xi);
  return lhs / rhs;
}

}  // namespace

SweepReport verify_weight_inequalities(const WeightFns& w, int d, int n_samples,
                                       uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("verify_weight_inequalities: n_samples >= 1");
  Constants ct = constants_table(d, w.beta());
  if (!ct.theorem_valid)
    throw std::invalid_argument(
        "verify_weight_inequalities: beta outside (0, 1-2/d)");
  SweepCtx c{w, d, w.L(), ct, gauss_legendre(8), gauss_legendre(16), {}, {}};
  int L = w.L(), lo = -((L - 1) / 2);
  for (int xi = 0; xi < 2; ++xi) {
    c.az[xi].resize(L);
    c.zc[xi].resize(L);
    for (int j = 0; j < L; ++j) {
      C z = zfun(xi, double(lo + j) / L);
      c.zc[xi][j] = z;
      c.az[xi][j] = std::abs(z);
    }
  }
  struct Fam {
    const char* name;
    double tol;
    double (*eval)(const SweepCtx&, Rng, std::string*);
  };
  const Fam fams[] = {
      {"pointwise ratio", 0.0, fam_pointwise},
      {"window integral, fixed mode", 1e-8, fam_fixed_mode},
      {"window integral, mode sum", 1e-6, fam_mode_sum},
      {"singular axis integral", 1e-10, fam_singular},
      {"window mismatch vs error term", 1e-8, fam_mismatch},
      {"inverse weight integral", 1e-8, fam_inverse_weight},
  };
  SweepReport rep;
  rep.all_pass = true;
  Rng root(seed);
  for (uint64_t fi = 0; fi < 6; ++fi) {
    const Fam& fm = fams[fi];
    Rng base = root.fork(fi);
    std::vector<double> ratio(n_samples);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_samples; ++i)
      ratio[i] = fm.eval(c, base.fork(uint64_t(i)), nullptr);
    int argmax = 0;
    for (int i = 1; i < n_samples; ++i)
      if (ratio[i] > ratio[argmax]) argmax = i;
    SweepRow row;
    row.name = fm.name;
    row.samples = n_samples;
    row.quad_tol = fm.tol;
    row.max_ratio = ratio[argmax];
    std::string desc;
    fm.eval(c, base.fork(uint64_t(argmax)), &desc);
    char pre[32];
    std::snprintf(pre, sizeof pre, "sample %d: ", argmax);
    row.worst_input = pre + desc;
    row.pass = row.max_ratio <= 1.0 + 1e-9;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace wkin
