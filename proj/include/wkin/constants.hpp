#pragma once
#include "wkin/model.hpp"

namespace wkin {

// Explicit estimate constants for dimension d and exponent beta in (0, 1-2/d).
// c6 (and hence c3) come from a grid infimum over beta and depend on d only.
struct Constants {
  int d;
  double beta;
  double pp;  // (1-beta)/2
  double c1, c2, c3, c4, c5, c6;
  double cb6, cb7, cb8, cb9;
  double eta, alpha, p_d;
  // beta inside (0, 1-2/d); outside, the closed forms are still evaluated
  // but the estimates they feed carry no guarantee
  bool theorem_valid = true;
};

double c_beta6(int d, double beta);
// inf over beta in (0, 1-2/d): 1e4-point grid, refined once onto the
// bracketing pair of intervals
double c6_infimum(int d);
Constants constants_table(int d, double beta);

struct TauSpec {
  TauMode mode = TauMode::Memory;
  double T0 = 0.0;
};

// comparison error between two window choices; zero iff the windows agree
double error_term(int d, double beta, double lambda, TauSpec tau, TauSpec taut,
                  double T);

}  // namespace wkin
