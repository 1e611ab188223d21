#include "wkin/config.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace wkin {
namespace {

using nlohmann::json;

struct Ctx {
  const std::string& text;
  const std::string& name;
};

// 1-based line of the first occurrence of "token" as a quoted key, 0 if absent
int line_of(const std::string& text, const std::string& token) {
  const std::string quoted = "\"" + token + "\"";
  const size_t pos = text.find(quoted);
  if (pos == std::string::npos) return 0;
  int line = 1;
  for (size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

[[noreturn]] void fail(const Ctx& c, const std::string& anchor,
                       const std::string& msg) {
  const int line = line_of(c.text, anchor);
  std::ostringstream os;
  os << c.name << ":";
  if (line > 0) os << line << ":";
  os << " " << msg;
  throw std::invalid_argument(os.str());
}

void check_keys(const Ctx& c, const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok)
      fail(c, item.key(), where + ": unknown key \"" + item.key() + "\"");
  }
}

const json& member(const Ctx& c, const json& obj, const std::string& where,
                   const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(c, where, where + ": missing required \"" + key + "\"");
  return *it;
}

const json* opt_member(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double num_at(const Ctx& c, const json& v, const std::string& key) {
  if (!v.is_number())
    fail(c, key, "\"" + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(c, key, "\"" + key + "\" must be finite");
  return x;
}

long int_at(const Ctx& c, const json& v, const std::string& key) {
  if (!v.is_number_integer())
    fail(c, key, "\"" + key + "\" must be an integer");
  return v.get<long>();
}

std::string str_at(const Ctx& c, const json& v, const std::string& key) {
  if (!v.is_string())
    fail(c, key, "\"" + key + "\" must be a string");
  return v.get<std::string>();
}

const json& obj_at(const Ctx& c, const json& v, const std::string& key) {
  if (!v.is_object())
    fail(c, key, "\"" + key + "\" must be an object");
  return v;
}

void parse_lattice(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& lat = obj_at(c, j, "lattice");
  check_keys(c, lat, "lattice", {"d", "L", "c0"});
  const long d = int_at(c, member(c, lat, "lattice", "d"), "d");
  if (d < 1 || d > 4) fail(c, "d", "lattice.d must be in 1..4");
  const long L = int_at(c, member(c, lat, "lattice", "L"), "L");
  if (L < 2) fail(c, "L", "lattice.L must be >= 2");
  double size = 1;
  for (long i = 0; i < d; ++i) size *= double(L);
  if (size > double(1l << 22))
    fail(c, "L", "lattice: L^d exceeds the 2^22 site budget");
  cfg.d = int(d);
  cfg.L = int(L);
  if (const json* c0 = opt_member(lat, "c0")) cfg.c0 = num_at(c, *c0, "c0");
}

void parse_model(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& m = obj_at(c, j, "model");
  check_keys(c, m, "model", {"kind", "lambda", "tau", "beta"});
  cfg.model_kind = str_at(c, member(c, m, "model", "kind"), "kind");
  if (cfg.model_kind != "dnls" && cfg.model_kind != "boson" &&
      cfg.model_kind != "fermion")
    fail(c, "kind", "model.kind must be dnls, boson, or fermion");
  if (const json* lam = opt_member(m, "lambda")) {
    cfg.lambda = num_at(c, *lam, "lambda");
    if (!(cfg.lambda > 0)) fail(c, "lambda", "model.lambda must be > 0");
  }
  if (const json* b = opt_member(m, "beta")) {
    cfg.beta = num_at(c, *b, "beta");
    if (!(cfg.beta > 0 && cfg.beta < 1))
      fail(c, "beta", "model.beta must lie in (0, 1)");
  }
  if (const json* tau = opt_member(m, "tau")) {
    obj_at(c, *tau, "tau");
    check_keys(c, *tau, "model.tau", {"mode", "T0"});
    const std::string mode =
        str_at(c, member(c, *tau, "model.tau", "mode"), "mode");
    if (mode == "memory")
      cfg.tau_mode = TauMode::Memory;
    else if (mode == "constant")
      cfg.tau_mode = TauMode::Constant;
    else
      fail(c, "mode", "model.tau.mode must be memory or constant");
    if (const json* t0 = opt_member(*tau, "T0")) {
      cfg.T0 = num_at(c, *t0, "T0");
      if (!(cfg.T0 > 0)) fail(c, "T0", "model.tau.T0 must be > 0");
    } else if (cfg.tau_mode == TauMode::Constant) {
      fail(c, "tau", "model.tau: constant mode requires T0");
    }
  }
}

void parse_potential(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& p = obj_at(c, j, "potential");
  check_keys(c, p, "potential", {"kind", "params", "path"});
  cfg.pot_kind = str_at(c, member(c, p, "potential", "kind"), "kind");
  const json* params = opt_member(p, "params");
  const json* path = opt_member(p, "path");
  if (params) obj_at(c, *params, "params");
  if (cfg.pot_kind == "onsite" || cfg.pot_kind == "nearest") {
    if (params && !params->empty())
      fail(c, "params", "potential." + cfg.pot_kind + " takes no params");
    if (path) fail(c, "path", "potential." + cfg.pot_kind + " takes no path");
  } else if (cfg.pot_kind == "exp_decay") {
    if (!params) fail(c, "potential", "potential.exp_decay requires params");
    check_keys(c, *params, "potential.params", {"rate"});
    cfg.pot_rate =
        num_at(c, member(c, *params, "potential.params", "rate"), "rate");
    if (!(cfg.pot_rate > 0)) fail(c, "rate", "potential rate must be > 0");
    if (path) fail(c, "path", "potential.exp_decay takes no path");
  } else if (cfg.pot_kind == "values") {
    if (!params) fail(c, "potential", "potential.values requires params");
    check_keys(c, *params, "potential.params", {"values"});
    const json& vals = member(c, *params, "potential.params", "values");
    if (!vals.is_array())
      fail(c, "values", "potential.params.values must be an array");
    for (const json& v : vals)
      cfg.pot_values.push_back(num_at(c, v, "values"));
    if (path) fail(c, "path", "potential.values takes no path");
  } else if (cfg.pot_kind == "file") {
    if (!path) fail(c, "potential", "potential.file requires path");
    cfg.pot_path = str_at(c, *path, "path");
    if (params) fail(c, "params", "potential.file takes no params");
  } else {
    fail(c, "kind", "potential.kind must be one of onsite, nearest, "
                    "exp_decay, values, file");
  }
}

void parse_initial(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& p = obj_at(c, j, "initial_data");
  check_keys(c, p, "initial_data", {"kind", "params", "path"});
  cfg.init_kind = str_at(c, member(c, p, "initial_data", "kind"), "kind");
  const json* params = opt_member(p, "params");
  const json* path = opt_member(p, "path");
  if (params) obj_at(c, *params, "params");
  auto no_path = [&] {
    if (path) fail(c, "path", "initial_data." + cfg.init_kind + " takes no path");
  };
  if (cfg.init_kind == "constant") {
    no_path();
    if (params) {
      check_keys(c, *params, "initial_data.params", {"value"});
      if (const json* v = opt_member(*params, "value"))
        cfg.init_value = num_at(c, *v, "value");
    }
  } else if (cfg.init_kind == "gaussian") {
    no_path();
    if (!params) fail(c, "initial_data", "initial_data.gaussian requires params");
    check_keys(c, *params, "initial_data.params", {"amp", "width"});
    cfg.init_amp =
        num_at(c, member(c, *params, "initial_data.params", "amp"), "amp");
    cfg.init_width =
        num_at(c, member(c, *params, "initial_data.params", "width"), "width");
    if (!(cfg.init_amp > 0)) fail(c, "amp", "initial_data amp must be > 0");
    if (!(cfg.init_width > 0))
      fail(c, "width", "initial_data width must be > 0");
  } else if (cfg.init_kind == "thermal") {
    no_path();
    if (params) {
      check_keys(c, *params, "initial_data.params", {"mu"});
      if (const json* v = opt_member(*params, "mu"))
        cfg.init_mu = num_at(c, *v, "mu");
    }
  } else if (cfg.init_kind == "bandlimited") {
    no_path();
    if (!params)
      fail(c, "initial_data", "initial_data.bandlimited requires params");
    check_keys(c, *params, "initial_data.params", {"seed", "band", "amp"});
    const json& s = member(c, *params, "initial_data.params", "seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0))
      fail(c, "seed", "initial_data seed must be a non-negative integer");
    cfg.init_seed = s.get<std::uint64_t>();
    const long band = int_at(c, member(c, *params, "initial_data.params", "band"), "band");
    if (band < 0) fail(c, "band", "initial_data band must be >= 0");
    cfg.init_band = int(band);
    if (const json* a = opt_member(*params, "amp")) {
      cfg.init_amp = num_at(c, *a, "amp");
      if (!(cfg.init_amp > 0)) fail(c, "amp", "initial_data amp must be > 0");
    }
  } else if (cfg.init_kind == "file") {
    if (!path) fail(c, "initial_data", "initial_data.file requires path");
    cfg.init_path = str_at(c, *path, "path");
    if (params) fail(c, "params", "initial_data.file takes no params");
  } else {
    fail(c, "kind", "initial_data.kind must be one of constant, gaussian, "
                    "thermal, bandlimited, file");
  }
}

void parse_solve(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& s = obj_at(c, j, "solve");
  check_keys(c, s, "solve",
             {"Tstar", "n_steps", "picard_tol", "picard_max_iter"});
  if (const json* v = opt_member(s, "Tstar")) {
    cfg.solve.Tstar = num_at(c, *v, "Tstar");
    if (!(cfg.solve.Tstar > 0)) fail(c, "Tstar", "solve.Tstar must be > 0");
  }
  if (const json* v = opt_member(s, "n_steps")) {
    const long n = int_at(c, *v, "n_steps");
    if (n < 1 || n > 100000) fail(c, "n_steps", "solve.n_steps must be in 1..100000");
    cfg.solve.n_steps = int(n);
  }
  if (const json* v = opt_member(s, "picard_tol")) {
    cfg.solve.picard_tol = num_at(c, *v, "picard_tol");
    if (!(cfg.solve.picard_tol > 0))
      fail(c, "picard_tol", "solve.picard_tol must be > 0");
  }
  if (const json* v = opt_member(s, "picard_max_iter")) {
    const long n = int_at(c, *v, "picard_max_iter");
    if (n < 1) fail(c, "picard_max_iter", "solve.picard_max_iter must be >= 1");
    cfg.solve.picard_max_iter = int(n);
  }
}

void parse_verify(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& v = obj_at(c, j, "verify");
  check_keys(c, v, "verify", {"suites", "samples"});
  if (const json* s = opt_member(v, "suites")) {
    if (!s->is_array()) fail(c, "suites", "verify.suites must be an array");
    for (const json& e : *s) {
      const std::string name = str_at(c, e, "suites");
      if (name != "colG" && name != "fevo" && name != "weights" &&
          name != "propagator" && name != "conservation")
        fail(c, "suites", "verify.suites: unknown suite \"" + name + "\"");
      for (const std::string& seen : cfg.suites)
        if (seen == name)
          fail(c, "suites", "verify.suites: duplicate \"" + name + "\"");
      cfg.suites.push_back(name);
    }
  }
  if (const json* s = opt_member(v, "samples")) {
    const long n = int_at(c, *s, "samples");
    if (n < 1 || n > 1000000) fail(c, "samples", "verify.samples must be in 1..1000000");
    cfg.samples = int(n);
  }
}

void parse_output(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& o = obj_at(c, j, "output");
  check_keys(c, o, "output", {"dir", "formats", "nodes"});
  if (const json* d = opt_member(o, "dir")) {
    cfg.out_dir = str_at(c, *d, "dir");
    if (cfg.out_dir.empty()) fail(c, "dir", "output.dir must be non-empty");
  }
  if (const json* f = opt_member(o, "formats")) {
    if (!f->is_array()) fail(c, "formats", "output.formats must be an array");
    cfg.formats.clear();
    for (const json& e : *f) {
      const std::string name = str_at(c, e, "formats");
      if (name != "csv" && name != "json")
        fail(c, "formats", "output.formats entries must be csv or json");
      for (const std::string& seen : cfg.formats)
        if (seen == name)
          fail(c, "formats", "output.formats: duplicate \"" + name + "\"");
      cfg.formats.push_back(name);
    }
    if (cfg.formats.empty())
      fail(c, "formats", "output.formats must not be empty");
  }
  if (const json* n = opt_member(o, "nodes")) {
    if (!n->is_array()) fail(c, "nodes", "output.nodes must be an array");
    for (const json& e : *n) {
      const long idx = int_at(c, e, "nodes");
      if (idx < 0 || idx > cfg.solve.n_steps)
        fail(c, "nodes", "output.nodes: index outside 0..n_steps");
      cfg.nodes.push_back(int(idx));
    }
  }
}

void parse_compare(const Ctx& c, const json& j, ExperimentConfig& cfg) {
  const json& t = obj_at(c, j, "compare_tau");
  check_keys(c, t, "compare_tau", {"lambdas", "T0"});
  const json& ls = member(c, t, "compare_tau", "lambdas");
  if (!ls.is_array() || ls.empty())
    fail(c, "lambdas", "compare_tau.lambdas must be a non-empty array");
  for (const json& e : ls) {
    const double l = num_at(c, e, "lambdas");
    if (!(l > 0)) fail(c, "lambdas", "compare_tau.lambdas must be > 0");
    cfg.ct_lambdas.push_back(l);
  }
  if (const json* t0 = opt_member(t, "T0")) {
    cfg.ct_T0 = num_at(c, *t0, "T0");
    if (!(cfg.ct_T0 > 0)) fail(c, "T0", "compare_tau.T0 must be > 0");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text,
                              const std::string& name) {
  Ctx c{text, name};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is a 1-based offset into text
    int line = 1, col = 1;
    const size_t stop = e.byte > 0 ? std::min(text.size(), size_t(e.byte - 1))
                                   : 0;
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << name << ":" << line << ":" << col << ": " << e.what();
    throw std::invalid_argument(os.str());
  }
  if (!j.is_object())
    throw std::invalid_argument(name + ":1: top level must be a JSON object");
  check_keys(c, j, "config",
             {"lattice", "model", "potential", "initial_data", "solve",
              "verify", "output", "compare_tau"});
  ExperimentConfig cfg;
  parse_lattice(c, member(c, j, "config", "lattice"), cfg);
  parse_model(c, member(c, j, "config", "model"), cfg);
  parse_potential(c, member(c, j, "config", "potential"), cfg);
  parse_initial(c, member(c, j, "config", "initial_data"), cfg);
  if (const json* s = opt_member(j, "solve")) parse_solve(c, *s, cfg);
  if (const json* v = opt_member(j, "verify")) parse_verify(c, *v, cfg);
  if (const json* o = opt_member(j, "output")) parse_output(c, *o, cfg);
  if (const json* t = opt_member(j, "compare_tau")) parse_compare(c, *t, cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_echo(const ExperimentConfig& cfg) {
  json j;
  j["lattice"] = {{"d", cfg.d}, {"L", cfg.L}, {"c0", cfg.c0}};
  json tau = {{"mode", cfg.tau_mode == TauMode::Memory ? "memory" : "constant"}};
  if (cfg.T0 > 0) tau["T0"] = cfg.T0;
  j["model"] = {{"kind", cfg.model_kind},
                {"lambda", cfg.lambda},
                {"tau", tau},
                {"beta", cfg.beta}};
  json pot = {{"kind", cfg.pot_kind}};
  if (cfg.pot_kind == "exp_decay") pot["params"] = {{"rate", cfg.pot_rate}};
  if (cfg.pot_kind == "values") pot["params"] = {{"values", cfg.pot_values}};
  if (cfg.pot_kind == "file") pot["path"] = cfg.pot_path;
  j["potential"] = pot;
  json init = {{"kind", cfg.init_kind}};
  if (cfg.init_kind == "constant")
    init["params"] = {{"value", cfg.init_value}};
  else if (cfg.init_kind == "gaussian")
    init["params"] = {{"amp", cfg.init_amp}, {"width", cfg.init_width}};
  else if (cfg.init_kind == "thermal")
    init["params"] = {{"mu", cfg.init_mu}};
  else if (cfg.init_kind == "bandlimited")
    init["params"] = {{"seed", cfg.init_seed},
                      {"band", cfg.init_band},
                      {"amp", cfg.init_amp}};
  else if (cfg.init_kind == "file")
    init["path"] = cfg.init_path;
  j["initial_data"] = init;
  j["solve"] = {{"Tstar", cfg.solve.Tstar},
                {"n_steps", cfg.solve.n_steps},
                {"picard_tol", cfg.solve.picard_tol},
                {"picard_max_iter", cfg.solve.picard_max_iter}};
  j["verify"] = {{"suites", cfg.suites}, {"samples", cfg.samples}};
  j["output"] = {{"dir", cfg.out_dir},
                 {"formats", cfg.formats},
                 {"nodes", cfg.nodes}};
  if (!cfg.ct_lambdas.empty()) {
    json ct = {{"lambdas", cfg.ct_lambdas}};
    if (cfg.ct_T0 > 0) ct["T0"] = cfg.ct_T0;
    j["compare_tau"] = ct;
  }
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  // presentation keys (where results go) stay out of the identity
  json j = json::parse(config_echo(cfg));
  j.erase("output");
  const std::string echo = j.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : echo) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return std::string(buf);
}

Lattice build_lattice(const ExperimentConfig& cfg) {
  return Lattice(cfg.d, cfg.L, cfg.c0);
}

Model build_model(const ExperimentConfig& cfg) {
  Model m = make_model(cfg.model_kind);
  m.lambda = cfg.lambda;
  m.tau_mode = cfg.tau_mode;
  m.T0 = cfg.T0;
  m.beta = cfg.beta;
  return m;
}

Potential build_potential(const ExperimentConfig& cfg, const Lattice& lat) {
  if (cfg.pot_kind == "onsite") return make_potential_onsite(lat);
  if (cfg.pot_kind == "nearest") return make_potential_nearest(lat);
  if (cfg.pot_kind == "exp_decay")
    return make_potential_exp_decay(lat, cfg.pot_rate);
  if (cfg.pot_kind == "values") return make_potential_values(lat, cfg.pot_values);
  return make_potential_file(lat, cfg.pot_path);
}

Field build_initial(const ExperimentConfig& cfg, const Lattice& lat) {
  if (cfg.init_kind == "constant") return initial_constant(lat, cfg.init_value);
  if (cfg.init_kind == "gaussian")
    return initial_gaussian(lat, cfg.init_amp, cfg.init_width);
  if (cfg.init_kind == "thermal") return initial_thermal(lat, cfg.init_mu);
  if (cfg.init_kind == "bandlimited")
    return initial_bandlimited(lat, cfg.init_seed, cfg.init_band, cfg.init_amp);
  return initial_file(lat, cfg.init_path);
}

}  // namespace wkin
