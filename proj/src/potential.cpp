#include "wkin/potential.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "wkin/dft.hpp"

namespace wkin {

namespace {

Potential finish(const Lattice& lat, Field V) {
  long n = lat.size();
  for (long y = 0; y < n; ++y)
    if (V[y] != V[lat.neg(y)])
      throw std::invalid_argument("potential: V(y) != V(-y) at flat index " +
                                  std::to_string(y));
  Potential pot;
  pot.V = std::move(V);
  CField vh = dft(lat, pot.V);
  pot.Vhat.resize(n);
  for (long k = 0; k < n; ++k) pot.Vhat[k] = vh[k].real();
  CField vv2(n);
  for (long k = 0; k < n; ++k) vv2[k] = pot.Vhat[k] * pot.Vhat[k];
  pot.VV = real_part(idft(lat, vv2));
  pot.norm16 = sobolev_norm(lat, pot.Vhat, 1.0 / 6.0);
  pot.norm23 = sobolev_norm(lat, pot.Vhat, 2.0 / 3.0);
  return pot;
}

}  // namespace

Potential make_potential_onsite(const Lattice& lat) {
  Field V(lat.size(), 0.0);
  V[lat.zero()] = 1.0;
  return finish(lat, std::move(V));
}

Potential make_potential_nearest(const Lattice& lat) {
  // indicator of |y|_1 = 1; d=1 gives Vhat(k) = 2 cos(2 pi k) for L > 2
  Field V(lat.size(), 0.0);
  std::vector<int> c(lat.dim());
  for (long y = 0; y < lat.size(); ++y) {
    lat.coords(y, c.data());
    long l1 = 0;
    for (int a = 0; a < lat.dim(); ++a) l1 += std::abs(c[a]);
    V[y] = (l1 == 1) ? 1.0 : 0.0;
  }
  return finish(lat, std::move(V));
}

Potential make_potential_exp_decay(const Lattice& lat, double rate) {
  Field V(lat.size());
  std::vector<int> c(lat.dim());
  for (long y = 0; y < lat.size(); ++y) {
    lat.coords(y, c.data());
    double r2 = 0;
    for (int a = 0; a < lat.dim(); ++a) r2 += double(c[a]) * c[a];
    V[y] = std::exp(-rate * std::sqrt(r2));
  }
  // even L: the axis value L/2 is its own negative, |.| makes it symmetric
  return finish(lat, std::move(V));
}

Potential make_potential_values(const Lattice& lat, const Field& values) {
  if (long(values.size()) != lat.size())
    throw std::invalid_argument("potential: values length mismatch");
  return finish(lat, values);
}

Potential make_potential_file(const Lattice& lat, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("potential: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_object() || !j.contains("d") || !j.contains("L") ||
      !j.contains("values"))
    throw std::invalid_argument("potential: file needs {d, L, values}");
  if (j["d"].get<int>() != lat.dim() || j["L"].get<int>() != lat.side())
    throw std::invalid_argument("potential: file lattice mismatch");
  Field vals = j["values"].get<Field>();
  if (long(vals.size()) != lat.size())
    throw std::invalid_argument("potential: values length mismatch");
  return finish(lat, std::move(vals));
}

double sobolev_norm(const Lattice& lat, const Field& spec, double p) {
  CField c(spec.begin(), spec.end());
  CField site = idft(lat, c);
  double s = 0;
  std::vector<int> yc(lat.dim());
  for (long y = 0; y < lat.size(); ++y) {
    lat.coords(y, yc.data());
    double w = 1;
    for (int a = 0; a < lat.dim(); ++a)
      w *= std::pow(1.0 + double(yc[a]) * yc[a], 0.5 * p);
    s += w * std::abs(site[y]);
  }
  return s;
}

double sobolev_norm_sup(const Lattice& lat, const Field& spec, double p) {
  CField c(spec.begin(), spec.end());
  CField site = idft(lat, c);
  double s = 0;
  std::vector<int> yc(lat.dim());
  for (long y = 0; y < lat.size(); ++y) {
    lat.coords(y, yc.data());
    double w = 1;
    for (int a = 0; a < lat.dim(); ++a)
      w *= std::pow(1.0 + double(yc[a]) * yc[a], 0.5 * p);
    s = std::max(s, w * std::abs(site[y]));
  }
  return s;
}

double script_V(const Lattice& lat, const Potential& pot, int theta, long k,
                long y) {
  double v = 2.0 * theta * pot.Vhat[k] * pot.V[y] + pot.VV[y];
  if (y == lat.zero()) v += pot.Vhat[k] * pot.Vhat[k];
  return v;
}

}  // namespace wkin
