#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "wkin/propagator.hpp"
#include "wkin/solver.hpp"
#include "wkin/weights.hpp"

namespace wkin {

// shortest round-trip decimal, locale-free; feeds every CSV cell
std::string num_str(double x);

// step,time,mass,energy,sup_norm,im_max,picard_iters
std::string trajectory_csv(const Trajectory& traj);
std::string trajectory_header_json(const std::string& echo_json,
                                   const Lattice& lat, const Trajectory& traj,
                                   std::uint64_t seed);
// one {step, time, values} entry per requested node index
std::string field_dump_json(const Lattice& lat, const Trajectory& traj,
                            const std::vector<int>& nodes);

// lambda,D_sup,D_sobolev,E_beta rows; '#' footer carries the fit as JSON
std::string tau_report_csv(const TauCompareReport& rep);
std::string tau_report_json(const TauCompareReport& rep,
                            const std::string& echo_json, std::uint64_t seed);

std::string preflight_json(const PreflightReport& rep);
std::string monitor_json(const MonitorReport& rep);
std::string sweep_report_json(const SweepReport& rep, int d, int L,
                              double beta, std::uint64_t seed);

// sweep,d,L,R,y,gap,bound,ratio rows for the qi / decay / envelope sweeps
std::string prop_report_csv(const PropReport& rep);
std::string prop_report_json(const PropReport& rep, std::uint64_t seed);

std::string constants_csv(const std::vector<int>& ds,
                          const std::vector<double>& betas);
std::string constants_json(const std::vector<int>& ds,
                           const std::vector<double>& betas);

// creates out_dir/tag (and parents); returns the run directory path
std::string make_run_dir(const std::string& out_dir, const std::string& tag);
void write_file(const std::string& path, const std::string& content);

}  // namespace wkin
