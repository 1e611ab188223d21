#include "wkin/norms.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "wkin/rng.hpp"

namespace wkin {

namespace {

// stable per-(r, u) key: the same pair maps to the same (k', sigma, x)
// triple at every refinement level
std::uint64_t pair_key(double r, double u, std::uint64_t seed) {
  std::uint64_t a = std::bit_cast<std::uint64_t>(r);
  std::uint64_t b = std::bit_cast<std::uint64_t>(u);
  return seed ^ (a * 0x9e3779b97f4a7c15ull) ^ std::rotl(b, 31);
}

}  // namespace

SampleGrid make_sample_grid(const Lattice& lat, int n_random,
                            std::uint64_t seed, int level) {
  if (n_random < 0 || level < 0 || level > 20)
    throw std::invalid_argument("make_sample_grid: bad size arguments");
  const int d = lat.dim();
  const long N = lat.size();
  SampleGrid g;
  g.level = level;
  g.n_random = n_random;
  g.seed = seed;

  // R ladder: 0 plus a geometric sweep [1/16, 2L]; doubling the segment
  // count keeps every previous rung (nested in log spacing)
  const int segs = 31 << level;
  const double rmin = 1.0 / 16.0, rmax = 2.0 * double(lat.side());
  std::vector<double> r_axis{0.0};
  for (int j = 0; j <= segs; ++j)
    r_axis.push_back(rmin * std::pow(rmax / rmin, double(j) / segs));
  const int nu = 8 << level;

  g.pts.push_back(NormSample{std::vector<double>(d, 0.0),
                             std::vector<double>(d, 0.0), lat.zero(), +1,
                             lat.zero()});
  for (double r : r_axis)
    for (int j = 0; j < nu; ++j) {
      const double u = double(j) / nu;
      Rng h(pair_key(r, u, seed));
      NormSample s;
      s.R.assign(d, r);
      s.u.assign(d, u);
      s.kp = long(h.below(std::uint64_t(N)));
      s.sigma = (h.next() & 1) ? +1 : -1;
      s.x = long(h.below(std::uint64_t(N)));
      g.pts.push_back(std::move(s));
    }

  Rng rng(seed);
  for (int i = 0; i < n_random; ++i) {
    NormSample s;
    s.R.resize(d);
    s.u.resize(d);
    for (int a = 0; a < d; ++a) s.R[a] = rng.uniform(0.0, rmax);
    for (int a = 0; a < d; ++a) s.u[a] = rng.uniform();
    s.kp = long(rng.below(std::uint64_t(N)));
    s.sigma = (rng.next() & 1) ? +1 : -1;
    s.x = long(rng.below(std::uint64_t(N)));
    g.pts.push_back(std::move(s));
  }
  return g;
}

SampleGrid refine_grid(const Lattice& lat, const SampleGrid& grid) {
  return make_sample_grid(lat, 2 * grid.n_random, grid.seed, grid.level + 1);
}

double phi_norm_estimate(const Lattice& lat, const WeightFns& wf,
                         const SampleEval& G, int n, const SampleGrid& grid) {
  if (n != 1 && n != 2)
    throw std::out_of_range("phi_norm_estimate: component index");
  if (grid.pts.empty())
    throw std::logic_error("phi_norm_estimate: empty sample grid");
  const int d = lat.dim();
  double best = 0.0;
  const long np = long(grid.pts.size());
#pragma omp parallel for schedule(static) reduction(max : best)
  for (long i = 0; i < np; ++i) {
    const NormSample& s = grid.pts[i];
    int xc[8];
    lat.coords(s.x, xc);
    const double w = wf.weight_d(s.R.data(), xc, d);
    const double v = std::abs(G(n, s));
    best = std::max(best, w * v);
  }
  return best;
}

double max_norm_estimate(const Lattice& lat, const WeightFns& wf,
                         const SampleEval& G, const SampleGrid& grid) {
  return std::max(phi_norm_estimate(lat, wf, G, 1, grid),
                  phi_norm_estimate(lat, wf, G, 2, grid));
}

SampleEval wrap_geval(const Lattice& lat, const GEval& G) {
  const int d = lat.dim();
  return [d, G](int n, const NormSample& s) {
    cplx zeta[8];
    for (int a = 0; a < d; ++a)
      zeta[a] = std::polar(s.R[a], 2.0 * std::numbers::pi * s.u[a]);
    return G(n, zeta, s.kp, s.sigma, s.x);
  };
}

double f_norm_estimate(const Lattice& lat, const WeightFns& wf, const Field& W,
                       const SampleGrid& grid) {
  return max_norm_estimate(lat, wf, wrap_geval(lat, make_f_geval(lat, W)),
                           grid);
}

}  // namespace wkin
