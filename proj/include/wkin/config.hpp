#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "wkin/lattice.hpp"
#include "wkin/model.hpp"
#include "wkin/potential.hpp"
#include "wkin/solver.hpp"

namespace wkin {

// Parsed experiment description.  Every field is materialized (defaults
// applied), so config_echo() is the canonical self-describing form.
struct ExperimentConfig {
  // lattice
  int d = 1;
  int L = 2;
  double c0 = 0.0;
  // model
  std::string model_kind = "dnls";
  double lambda = 1.0;
  TauMode tau_mode = TauMode::Memory;
  double T0 = 0.0;  // required in Constant mode
  double beta = 0.3;
  // potential
  std::string pot_kind = "onsite";
  double pot_rate = 0.0;          // exp_decay
  std::vector<double> pot_values; // values
  std::string pot_path;           // file
  // initial data
  std::string init_kind = "constant";
  double init_value = 1.0;            // constant
  double init_amp = 1.0;              // gaussian, bandlimited
  double init_width = 0.25;           // gaussian
  double init_mu = 0.0;               // thermal
  std::uint64_t init_seed = 1;        // bandlimited
  int init_band = 1;                  // bandlimited
  std::string init_path;              // file
  // solve
  SolveOpts solve;
  // verify
  std::vector<std::string> suites;
  int samples = 20;
  // output
  std::string out_dir = "runs";
  std::vector<std::string> formats = {"csv", "json"};
  std::vector<int> nodes;  // field-dump node indices; empty = final node
  // compare_tau
  std::vector<double> ct_lambdas;
  double ct_T0 = -1.0;  // < 0: fall back to model T0
};

// Strict schema: unknown keys rejected, types and ranges checked.  Throws
// std::invalid_argument with a message anchored to a source line where one
// can be located.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& name);
ExperimentConfig load_config(const std::string& path);

// canonical JSON echo (sorted keys, defaults materialized)
std::string config_echo(const ExperimentConfig& cfg);
// FNV-1a 64 over the echo, 16 hex digits; names the run directory
std::string config_hash(const ExperimentConfig& cfg);

Lattice build_lattice(const ExperimentConfig& cfg);
Model build_model(const ExperimentConfig& cfg);
Potential build_potential(const ExperimentConfig& cfg, const Lattice& lat);
Field build_initial(const ExperimentConfig& cfg, const Lattice& lat);

}  // namespace wkin
