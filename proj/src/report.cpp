#include "wkin/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wkin/constants.hpp"

namespace wkin {
namespace {

using nlohmann::json;

json grid_json(const Lattice& lat) {
  return {{"d", lat.dim()}, {"L", lat.side()}, {"c0", lat.c0()}};
}

json rows_json(const std::vector<PropRow>& rows, const char* sweep) {
  json out = json::array();
  for (const PropRow& r : rows)
    out.push_back({{"sweep", sweep},
                   {"d", r.d},
                   {"L", r.L},
                   {"R", r.R},
                   {"y", r.y},
                   {"gap", r.gap},
                   {"bound", r.bound},
                   {"ratio", r.ratio}});
  return out;
}

void csv_rows(std::ostringstream& os, const std::vector<PropRow>& rows,
              const char* sweep) {
  for (const PropRow& r : rows)
    os << sweep << ',' << r.d << ',' << r.L << ',' << num_str(r.R) << ','
       << num_str(r.y) << ',' << num_str(r.gap) << ',' << num_str(r.bound)
       << ',' << num_str(r.ratio) << '\n';
}

}  // namespace

std::string num_str(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "step,time,mass,energy,sup_norm,im_max,picard_iters\n";
  for (size_t n = 0; n < traj.times.size(); ++n) {
    const NodeDiag& d = traj.diag[n];
    os << n << ',' << num_str(traj.times[n]) << ',' << num_str(d.mass) << ','
       << num_str(d.energy) << ',' << num_str(d.sup) << ','
       << num_str(d.im_max) << ',' << d.picard_iters << '\n';
  }
  return os.str();
}

std::string trajectory_header_json(const std::string& echo_json,
                                   const Lattice& lat, const Trajectory& traj,
                                   std::uint64_t seed) {
  json j;
  j["config"] = json::parse(echo_json);
  j["grid"] = grid_json(lat);
  j["seed"] = seed;
  j["n_steps"] = traj.steps();
  j["times"] = traj.times;
  j["columns"] = {"step", "time",   "mass",        "energy",
                  "sup_norm", "im_max", "picard_iters"};
  return j.dump(2) + "\n";
}

std::string field_dump_json(const Lattice& lat, const Trajectory& traj,
                            const std::vector<int>& nodes) {
  json j;
  j["grid"] = grid_json(lat);
  json list = json::array();
  std::vector<int> want = nodes;
  if (want.empty()) want.push_back(traj.steps());
  for (int n : want) {
    if (n < 0 || n > traj.steps())
      throw std::out_of_range("field dump: node index outside trajectory");
    list.push_back({{"step", n},
                    {"time", traj.times[size_t(n)]},
                    {"values", traj.fields[size_t(n)]}});
  }
  j["nodes"] = list;
  return j.dump(2) + "\n";
}

std::string tau_report_csv(const TauCompareReport& rep) {
  std::ostringstream os;
  os << "lambda,D_sup,D_sobolev,E_beta\n";
  for (const TauCompareRow& r : rep.rows)
    os << num_str(r.lambda) << ',' << num_str(r.d_sup) << ','
       << num_str(r.d_sob) << ',' << num_str(r.e_beta) << '\n';
  json foot = {{"fitted_slope", rep.fitted_slope},
               {"p_d", rep.p_d},
               {"regime_certified", rep.regime_certified}};
  if (!rep.regime_certified)
    foot["caveat"] = "L < L_beta, theorem regime not certified";
  os << "# " << foot.dump() << '\n';
  return os.str();
}

std::string tau_report_json(const TauCompareReport& rep,
                            const std::string& echo_json,
                            std::uint64_t seed) {
  json j;
  j["config"] = json::parse(echo_json);
  j["seed"] = seed;
  json rows = json::array();
  for (const TauCompareRow& r : rep.rows) {
    json row = {{"lambda", r.lambda}, {"D_sup", r.d_sup},
                {"D_sobolev", r.d_sob}, {"E_beta", r.e_beta},
                {"ok", r.ok}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["fitted_slope"] = rep.fitted_slope;
  j["p_d"] = rep.p_d;
  j["regime_certified"] = rep.regime_certified;
  if (!rep.regime_certified)
    j["caveat"] = "L < L_beta, theorem regime not certified";
  return j.dump(2) + "\n";
}

std::string preflight_json(const PreflightReport& rep) {
  json rows = json::array();
  for (const PreflightCondition& c : rep.conditions)
    rows.push_back(
        {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  json j = {{"conditions", rows}, {"all_pass", rep.all_pass}};
  return j.dump(2) + "\n";
}

std::string monitor_json(const MonitorReport& rep) {
  json rows = json::array();
  for (const MonitorRow& r : rep.rows)
    rows.push_back({{"time", r.time},
                    {"sup_margin", r.sup_margin},
                    {"fnorm_margin", r.fnorm_margin},
                    {"endpoint_margin", r.endpoint_margin}});
  json j = {{"rows", rows},
            {"worst_sup", rep.worst_sup},
            {"worst_fnorm", rep.worst_fnorm},
            {"worst_endpoint", rep.worst_endpoint},
            {"any_negative", rep.any_negative},
            {"note", "margins use sampled norm estimators"}};
  return j.dump(2) + "\n";
}

std::string sweep_report_json(const SweepReport& rep, int d, int L,
                              double beta, std::uint64_t seed) {
  json rows = json::array();
  for (const SweepRow& r : rep.rows)
    rows.push_back({{"name", r.name},
                    {"samples", r.samples},
                    {"max_ratio", r.max_ratio},
                    {"quad_tol", r.quad_tol},
                    {"worst_input", r.worst_input},
                    {"pass", r.pass}});
  json j = {{"d", d},       {"L", L},   {"beta", beta},
            {"seed", seed}, {"rows", rows}, {"all_pass", rep.all_pass}};
  return j.dump(2) + "\n";
}

std::string prop_report_csv(const PropReport& rep) {
  std::ostringstream os;
  os << "sweep,d,L,R,y,gap,bound,ratio\n";
  csv_rows(os, rep.qi, "qi");
  csv_rows(os, rep.decay, "decay");
  csv_rows(os, rep.envelope, "envelope");
  csv_rows(os, rep.bsweep, "bsweep");
  json foot = {{"fitted_delta", rep.fitted_delta},
               {"max_ratio_qi", rep.max_ratio_qi},
               {"max_ratio_decay", rep.max_ratio_decay},
               {"max_ratio_envelope", rep.max_ratio_envelope},
               {"pass", rep.pass}};
  os << "# " << foot.dump() << '\n';
  return os.str();
}

std::string prop_report_json(const PropReport& rep, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  json rows = rows_json(rep.qi, "qi");
  for (json& r : rows_json(rep.decay, "decay")) rows.push_back(r);
  for (json& r : rows_json(rep.envelope, "envelope")) rows.push_back(r);
  for (json& r : rows_json(rep.bsweep, "bsweep")) rows.push_back(r);
  j["rows"] = rows;
  j["fitted_delta"] = rep.fitted_delta;
  j["max_ratio_qi"] = rep.max_ratio_qi;
  j["max_ratio_decay"] = rep.max_ratio_decay;
  j["max_ratio_envelope"] = rep.max_ratio_envelope;
  j["max_ratio_b"] = rep.max_ratio_b;
  j["pass"] = rep.pass;
  return j.dump(2) + "\n";
}

std::string constants_csv(const std::vector<int>& ds,
                          const std::vector<double>& betas) {
  std::ostringstream os;
  os << "d,beta,c1,c2,c3,c4,c5,c6,cb6,cb7,cb8,cb9,eta,alpha,p_d,"
        "theorem_valid\n";
  for (int d : ds)
    for (double b : betas) {
      const Constants ct = constants_table(d, b);
      os << d << ',' << num_str(b) << ',' << num_str(ct.c1) << ','
         << num_str(ct.c2) << ',' << num_str(ct.c3) << ',' << num_str(ct.c4)
         << ',' << num_str(ct.c5) << ',' << num_str(ct.c6) << ','
         << num_str(ct.cb6) << ',' << num_str(ct.cb7) << ','
         << num_str(ct.cb8) << ',' << num_str(ct.cb9) << ','
         << num_str(ct.eta) << ',' << num_str(ct.alpha) << ','
         << num_str(ct.p_d) << ',' << (ct.theorem_valid ? 1 : 0) << '\n';
    }
  return os.str();
}

std::string constants_json(const std::vector<int>& ds,
                           const std::vector<double>& betas) {
  json rows = json::array();
  for (int d : ds)
    for (double b : betas) {
      const Constants ct = constants_table(d, b);
      rows.push_back({{"d", d},
                      {"beta", b},
                      {"c1", ct.c1},
                      {"c2", ct.c2},
                      {"c3", ct.c3},
                      {"c4", ct.c4},
                      {"c5", ct.c5},
                      {"c6", ct.c6},
                      {"cb6", ct.cb6},
                      {"cb7", ct.cb7},
                      {"cb8", ct.cb8},
                      {"cb9", ct.cb9},
                      {"eta", ct.eta},
                      {"alpha", ct.alpha},
                      {"p_d", ct.p_d},
                      {"theorem_valid", ct.theorem_valid}});
    }
  json j = {{"rows", rows}};
  return j.dump(2) + "\n";
}

std::string make_run_dir(const std::string& out_dir, const std::string& tag) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(out_dir) / tag;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create run directory " + dir.string() +
                             ": " + ec.message());
  return dir.string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wkin
