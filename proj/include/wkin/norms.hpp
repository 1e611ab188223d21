#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "wkin/bilinear.hpp"
#include "wkin/weights.hpp"

namespace wkin {

// One point of the evaluation domain (R, k', u, sigma, x); R and u carry one
// entry per axis, k' and x are flat indices.
struct NormSample {
  std::vector<double> R, u;
  long kp = 0;
  int sigma = +1;
  long x = 0;
};

// Evaluation set for the weighted supremum: a deterministic core (log-spaced
// R ladder through [0, 2L] crossed with uniform u values, each pair bound to
// a hashed (k', sigma, x) triple) plus n_random uniform draws.  Grids nest
// under refine_grid, so estimates are monotone nondecreasing in the level.
struct SampleGrid {
  std::vector<NormSample> pts;
  int level = 0;
  int n_random = 0;
  std::uint64_t seed = 0;
};

SampleGrid make_sample_grid(const Lattice& lat, int n_random,
                            std::uint64_t seed, int level = 0);
SampleGrid refine_grid(const Lattice& lat, const SampleGrid& grid);

// component evaluator on sample points; n is the component index in {1, 2}
using SampleEval = std::function<cplx(int n, const NormSample& s)>;

// max over the grid of Phi^d(R, x) |G^{(n)}(X)|, a lower bound for the
// supremum norm; reported together with the grid that produced it
double phi_norm_estimate(const Lattice& lat, const WeightFns& wf,
                         const SampleEval& G, int n, const SampleGrid& grid);
// larger of the two component estimates
double max_norm_estimate(const Lattice& lat, const WeightFns& wf,
                         const SampleEval& G, const SampleGrid& grid);

// adapts a phasor-argument evaluator: zeta_a = R_a e^{i 2 pi u_a}
SampleEval wrap_geval(const Lattice& lat, const GEval& G);
// estimate of ||F[W]||_max with both field slots at the same W
double f_norm_estimate(const Lattice& lat, const WeightFns& wf, const Field& W,
                       const SampleGrid& grid);

}  // namespace wkin
