#include "wkin/bilinear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wkin/dft.hpp"
#include "wkin/quadrature.hpp"
#include "wkin/rng.hpp"

namespace wkin {

namespace {
// 0-based term tables; public indices are 1-based
struct Terms {
  double sq[8];
  int s2[8] = {1, 1, 1, 1, 1, -1, -1, -1};
  int nt[8] = {2, 2, 1, 1, 2, 2, 2, 2};
  int xi[8] = {0, 0, 0, 0, 0, 1, 1, 1};
  Terms(double th, double q)
      : sq{-th, -th, -q, q, th, th, th, 1.0} {}
};
}  // namespace

void vw_tables(const Lattice& lat, const Potential& pot, const Model& m,
               int i, long k, long y, long yp, double& v, double& w) {
  if (i < 1 || i > 8)
    throw std::out_of_range("vw_tables: i = " + std::to_string(i) +
                            " outside 1..8");
  if (i <= 5)
    v = script_V(lat, pot, m.theta, k, y);
  else if (i <= 7)
    v = pot.VV[y];
  else
    v = 2.0 * pot.V[y];
  w = (i <= 7) ? (yp == lat.zero() ? 1.0 : 0.0) : pot.V[yp];
}

GEval make_f_geval(const Lattice& lat, const Field& W) {
  const Lattice* lp = &lat;
  Field Wc = W;
  return [lp, Wc](int n, const cplx* zeta, long kp, int sigma, long x) {
    const Lattice& l = *lp;
    const int d = l.dim();
    int c[8];
    cplx acc = 0;
    for (long k = 0; k < l.size(); ++k) {
      l.coords(k, c);
      double ph = 0;
      for (int a = 0; a < d; ++a) ph += (zeta[a] * l.root(-c[a])).real();
      double wf = Wc[l.add(kp, k)];
      if (n == 2) wf *= Wc[sigma > 0 ? k : l.neg(k)];
      acc += std::polar(1.0, ph) * wf * l.root(-l.dot(k, x));
    }
    return acc / double(l.size());
  };
}

cplx kernel_fixed_s_bilinear(const CollisionConfig& cfg, const GEval& G,
                             const Field& W, double s, long k0) {
  const Lattice& lat = *cfg.lat;
  const Potential& pot = *cfg.pot;
  const int d = lat.dim();
  const long N = lat.size();
  const Terms tb(cfg.model.theta, cfg.model.q);
  const double om0 = lat.omega(k0), c0 = lat.c0();
  std::vector<cplx> zg(d);
  std::vector<int> ck(d);
  cplx acc = 0;
  for (int i = 0; i < 8; ++i) {
    for (long k = 0; k < N; ++k) {
      lat.coords(k, ck.data());
      const double e0 = tb.xi[i] ? -1.0 : 1.0;  // e^{i pi xi}
      for (int a = 0; a < d; ++a) zg[a] = s * (e0 - lat.root(-ck[a]));
      const long ks = lat.sub(k0, k);
      // xi = 1 shifts every axis by 1/2, flipping each cosine
      const double om_sh = tb.xi[i] ? 2.0 * c0 - lat.omega(ks) : lat.omega(ks);
      const cplx outer = std::polar(1.0, -s * (om0 - om_sh));
      const double wf = (i == 3 || i == 4) ? W[ks] : W[k0];
      if (i == 7) {
        for (long y = 0; y < N; ++y) {
          if (pot.V[y] == 0.0) continue;
          for (long yp = 0; yp < N; ++yp) {
            if (pot.V[yp] == 0.0) continue;
            const long ph = lat.dot(k0, lat.sub(y, yp)) + lat.dot(k, yp);
            const cplx g = G(2, zg.data(), k, -1, lat.add(y, yp));
            acc += tb.sq[i] * 2.0 * pot.V[y] * pot.V[yp] * lat.root(-ph) *
                   outer * g * wf;
          }
        }
      } else {
        const long kslot = (i == 2) ? lat.zero() : k;
        const long kmk0 = lat.sub(k, k0);
        for (long y = 0; y < N; ++y) {
          const double v = (i <= 4)
                               ? script_V(lat, pot, cfg.model.theta, k, y)
                               : pot.VV[y];
          if (v == 0.0) continue;
          const long ph = (i == 6) ? lat.dot(k0, y) : lat.dot(kmk0, y);
          const cplx g = G(tb.nt[i], zg.data(), kslot, tb.s2[i], y);
          acc += tb.sq[i] * v * lat.root(-ph) * outer * g * wf;
        }
      }
    }
  }
  // the eight-term display double-counts the direct kernel
  return 0.5 * acc / double(N);
}

CField bilinear_kernel_s(const CollisionConfig& cfg, const GEval& G,
                         const Field& W, double s) {
  const long N = cfg.lat->size();
  CField out(N);
  for (long k0 = 0; k0 < N; ++k0)
    out[k0] = kernel_fixed_s_bilinear(cfg, G, W, s, k0);
  return out;
}

CField bilinear_kernel_s_fast(const CollisionConfig& cfg, const Field& W,
                              double s) {
  const Lattice& lat = *cfg.lat;
  const Potential& pot = *cfg.pot;
  const int d = lat.dim(), L = lat.side();
  const long N = lat.size();
  const double th = cfg.model.theta, q = cfg.model.q;
  const double c0 = lat.c0();

  // class tables A:(xi0,+,n2,k) B:(xi0,+,n1,0) C:(xi0,+,n1,k) D:(xi1,-,n2,k),
  // each G(k, x) = idft_x of a per-k weighted phase field
  CField A(N * N), B(N * N), C(N * N), D(N * N);
  std::vector<double> ph0(d * L), ph1(d * L);
  std::vector<int> ck(d);
  CField g0(N), g1(N), gA(N), gB(N), gC(N), gD(N);
  for (long k = 0; k < N; ++k) {
    lat.coords(k, ck.data());
    for (int a = 0; a < d; ++a) {
      const cplx z0 = s * (1.0 - lat.root(-ck[a]));
      const cplx z1 = s * (-1.0 - lat.root(-ck[a]));
      for (int m = 0; m < L; ++m) {
        const cplx e = lat.root(-(m + lat.lo()));
        ph0[a * L + m] = (z0 * e).real();
        ph1[a * L + m] = (z1 * e).real();
      }
    }
    for (long kk = 0; kk < N; ++kk) {
      lat.coords(kk, ck.data());
      double p0 = 0, p1 = 0;
      for (int a = 0; a < d; ++a) {
        p0 += ph0[a * L + ck[a] - lat.lo()];
        p1 += ph1[a * L + ck[a] - lat.lo()];
      }
      const cplx e0 = std::polar(1.0, p0), e1 = std::polar(1.0, p1);
      const double wkp = W[lat.add(k, kk)];
      gA[kk] = e0 * W[kk] * wkp;
      gB[kk] = e0 * W[kk];
      gC[kk] = e0 * wkp;
      gD[kk] = e1 * W[lat.neg(kk)] * wkp;
    }
    g0 = idft_fact(lat, gA);
    std::copy(g0.begin(), g0.end(), A.begin() + k * N);
    g0 = idft_fact(lat, gB);
    std::copy(g0.begin(), g0.end(), B.begin() + k * N);
    g0 = idft_fact(lat, gC);
    std::copy(g0.begin(), g0.end(), C.begin() + k * N);
    g0 = idft_fact(lat, gD);
    std::copy(g0.begin(), g0.end(), D.begin() + k * N);
  }

  // i=8 presum T(p, w) = sum_y V(y) V(w-y) e^{i 2 pi p.y}
  CField T(N * N);
  for (long p = 0; p < N; ++p)
    for (long w = 0; w < N; ++w) {
      cplx t = 0;
      for (long y = 0; y < N; ++y)
        if (pot.V[y] != 0.0)
          t += pot.V[y] * pot.V[lat.sub(w, y)] * lat.root(-lat.dot(p, y));
      T[p * N + w] = t;
    }

  CField out(N);
#pragma omp parallel for schedule(static)
  for (long k0 = 0; k0 < N; ++k0) {
    const double om0 = lat.omega(k0);
    const double wk0 = W[k0];
    cplx acc = 0;
    for (long k = 0; k < N; ++k) {
      const long ks = lat.sub(k0, k);
      const cplx out0 = std::polar(1.0, -s * (om0 - lat.omega(ks)));
      const cplx out1 =
          std::polar(1.0, -s * (om0 - (2.0 * c0 - lat.omega(ks))));
      const double wks = W[ks];
      const cplx* Ak = &A[k * N];
      const cplx* Bk = &B[k * N];
      const cplx* Ck = &C[k * N];
      const cplx* Dk = &D[k * N];
      const long kmk0 = lat.sub(k, k0);
      const long p8 = lat.sub(lat.add(k0, k0), k);
      const cplx* Tp = &T[p8 * N];
      // script_V splits as 1(y=0) Vh^2 + (2 th Vh) V(y) + VV(y); the V and
      // VV pieces share the phase sum below
      cplx vA = 0, vB = 0, vC = 0, cA = 0, cB = 0, cC = 0, cD = 0, d7 = 0,
           t8 = 0;
      for (long y = 0; y < N; ++y) {
        const double vy = pot.V[y], cy = pot.VV[y];
        const cplx ph = lat.root(-lat.dot(kmk0, y));
        if (vy != 0.0) {
          const cplx e = vy * ph;
          vA += e * Ak[y];
          vB += e * Bk[y];
          vC += e * Ck[y];
        }
        if (cy != 0.0) {
          const cplx e = cy * ph;
          cA += e * Ak[y];
          cB += e * Bk[y];
          cC += e * Ck[y];
          cD += e * Dk[y];
          d7 += cy * lat.root(-lat.dot(k0, y)) * Dk[y];
        }
        t8 += ph * Dk[y] * Tp[y];
      }
      const double vh2 = pot.Vhat[k] * pot.Vhat[k];
      const double cb = 2.0 * th * pot.Vhat[k];
      const long z = lat.zero();
      const cplx sA = vh2 * Ak[z] + cb * vA + cA;
      const cplx sB = vh2 * Bk[z] + cb * vB + cB;
      const cplx sC = vh2 * Ck[z] + cb * vC + cC;
      acc += out0 * (-2.0 * th * wk0 * sA - q * wk0 * sB + q * wks * sC +
                     th * wks * sA);
      acc += out1 * wk0 * (th * cD + th * d7 + 2.0 * t8);
    }
    out[k0] = 0.5 * acc / double(N);
  }
  return out;
}

Field collision_bilinear(const CollisionConfig& cfg, const GEval& G,
                         const Field& W, double tau0) {
  const Lattice& lat = *cfg.lat;
  const long N = lat.size();
  const double a = cfg.model.window(tau0);
  if (a == 0.0) return Field(N, 0.0);
  const SQuad& sq = cfg.squad;
  const Quad quad = gauss_legendre(sq.order);
  const Quad quad2 = gauss_legendre(2 * sq.order);
  const double h = 2.0 * a / sq.panels;

  auto panel_sum = [&](int p, const Quad& qd) {
    CField tot(N, cplx(0, 0));
    const double lo = -a + p * h, hi = lo + h;
    for (size_t j = 0; j < qd.x.size(); ++j) {
      const double s = 0.5 * (lo + hi) + 0.5 * h * qd.x[j];
      const CField ks = bilinear_kernel_s(cfg, G, W, s);
      const double w = 0.5 * h * qd.w[j];
      for (long i = 0; i < N; ++i) tot[i] += w * ks[i];
    }
    return tot;
  };

  CField tot(N, cplx(0, 0));
  std::vector<CField> panels(sq.panels);
  for (int p = 0; p < sq.panels; ++p) {
    panels[p] = panel_sum(p, quad);
    for (long i = 0; i < N; ++i) tot[i] += panels[p][i];
  }

  // order-doubling spot estimate on three panels (deterministic draw)
  Rng rng(0x5eedu + std::uint64_t(sq.panels) * 131u + sq.order);
  double est = 0;
  for (int t = 0; t < 3; ++t) {
    const int p = int(rng.below(std::uint64_t(sq.panels)));
    const CField refd = panel_sum(p, quad2);
    for (long i = 0; i < N; ++i)
      est = std::max(est, std::abs(refd[i] - panels[p][i]));
  }
  est *= sq.panels;  // worst panel extrapolated across the window
  if (est > sq.tol)
    throw std::runtime_error(
        "collision_bilinear: s-quadrature residual " + std::to_string(est) +
        " exceeds tol " + std::to_string(sq.tol));
  double imax = 0;
  for (long i = 0; i < N; ++i) imax = std::max(imax, std::abs(tot[i].imag()));
  if (imax > sq.tol)
    throw std::runtime_error(
        "collision_bilinear: imaginary residue " + std::to_string(imax) +
        " exceeds tol " + std::to_string(sq.tol));
  return real_part(tot);
}

}  // namespace wkin
