// Times the parallel collision evaluation against the serial reference on a
// ladder of lattices.  Both paths share direct_at; outputs agree bitwise
// because the parallel loop only splits the independent k0 entries.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "wkin/collision.hpp"
#include "wkin/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace wkin;

namespace {

double time_of(int reps, const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-12s %10s %12s %12s %8s %10s\n", "lattice", "sites",
              "serial [s]", "parallel [s]", "speedup", "max|diff|");
  struct Case { int d, L; };
  for (const Case c : {Case{1, 64}, Case{2, 12}, Case{3, 6}, Case{3, 8}}) {
    Lattice lat(c.d, c.L);
    Potential pot = make_potential_onsite(lat);
    Model m = make_model("boson");
    m.lambda = 0.8;
    CollisionConfig cfg{&lat, &pot, m, {}};
    Rng rng(17);
    Field W(lat.size());
    for (double& w : W) w = rng.uniform(0.1, 1.3);
    Field Cs, Cp;
    const double ts =
        time_of(reps, [&] { Cs = collision_direct_serial(cfg, W, 0.3); });
    const double tp = time_of(reps, [&] { Cp = collision_direct(cfg, W, 0.3); });
    double dmax = 0;
    for (long i = 0; i < lat.size(); ++i)
      dmax = std::max(dmax, std::fabs(Cs[i] - Cp[i]));
    std::printf("d=%d L=%-4d %10ld %12.4f %12.4f %8.2f %10.2e\n", c.d, c.L,
                lat.size(), ts, tp, ts / tp, dmax);
    if (dmax != 0.0) {
      std::printf("serial and parallel paths disagree\n");
      return 1;
    }
  }
  return 0;
}
