#include "wkin/dft.hpp"

#include <stdexcept>

namespace wkin {

CField dft(const Lattice& lat, const CField& site) {
  if (long(site.size()) != lat.size()) throw std::invalid_argument("dft: size");
  long n = lat.size();
  CField out(n);
  for (long k = 0; k < n; ++k) {
    cplx acc = 0;
    for (long y = 0; y < n; ++y) acc += site[y] * lat.root(lat.dot(k, y));
    out[k] = acc;
  }
  return out;
}

CField idft(const Lattice& lat, const CField& spec) {
  if (long(spec.size()) != lat.size()) throw std::invalid_argument("idft: size");
  long n = lat.size();
  CField out(n);
  for (long y = 0; y < n; ++y) {
    cplx acc = 0;
    for (long k = 0; k < n; ++k) acc += spec[k] * std::conj(lat.root(lat.dot(k, y)));
    out[y] = acc / double(n);
  }
  return out;
}

namespace {

// one axis of the separated transform; conj=false forward, true inverse
CField axis_pass(const Lattice& lat, CField f, int axis, bool conj) {
  int L = lat.side(), lo = lat.lo();
  long n = lat.size();
  long str = 1;
  for (int a = lat.dim() - 1; a > axis; --a) str *= L;
  CField out(n);
  for (long base = 0; base < n; ++base) {
    long g = (base / str) % L;
    if (g != 0) continue;  // enumerate lines through axis once
    for (int m = 0; m < L; ++m) {
      cplx acc = 0;
      for (int y = 0; y < L; ++y) {
        cplx w = lat.root(long(m + lo) * (y + lo));
        acc += f[base + y * str] * (conj ? std::conj(w) : w);
      }
      out[base + m * str] = acc;
    }
  }
  return out;
}

}  // namespace

CField dft_fact(const Lattice& lat, const CField& site) {
  CField f = site;
  for (int a = 0; a < lat.dim(); ++a) f = axis_pass(lat, std::move(f), a, false);
  return f;
}

CField idft_fact(const Lattice& lat, const CField& spec) {
  CField f = spec;
  for (int a = 0; a < lat.dim(); ++a) f = axis_pass(lat, std::move(f), a, true);
  double n = double(lat.size());
  for (auto& z : f) z /= n;
  return f;
}

CField dft(const Lattice& lat, const Field& site) {
  CField c(site.begin(), site.end());
  return dft(lat, c);
}

Field real_part(const CField& f) {
  Field r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i].real();
  return r;
}

}  // namespace wkin
