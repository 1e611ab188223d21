#pragma once
#include <stdexcept>
#include <string>

namespace wkin {

enum class TauMode { Memory, Constant };

// (q,theta): (0,+1) cubic-only, (1,+1) bosonic, (1,-1) fermionic
struct Model {
  int q = 0;
  int theta = +1;
  double lambda = 1.0;
  TauMode tau_mode = TauMode::Memory;
  double T0 = 0.0;   // only read in Constant mode
  double beta = 0.3; // weight exponent, in (0, 1-2/d) where estimates apply

  double tau(double T, double t) const {
    return tau_mode == TauMode::Memory ? T - t : T0;
  }
  // half-width of the s-window; delta_{lambda,tau0} integrates over [-a,a]
  double window(double tau0) const { return tau0 / (lambda * lambda); }
};

inline Model make_model(const std::string& kind) {
  Model m;
  if (kind == "dnls") {
    m.q = 0;
    m.theta = +1;
  } else if (kind == "boson") {
    m.q = 1;
    m.theta = +1;
  } else if (kind == "fermion") {
    m.q = 1;
    m.theta = -1;
  } else {
    throw std::invalid_argument("model: unknown kind " + kind);
  }
  return m;
}

inline std::string model_kind(const Model& m) {
  if (m.q == 0) return "dnls";
  return m.theta > 0 ? "boson" : "fermion";
}

}  // namespace wkin
