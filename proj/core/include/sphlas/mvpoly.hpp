#pragma once

#include "sphlas/scalars.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sphlas {

// Exponent vector of a monomial. Kept trimmed (no trailing zeros) so that the
// map key is canonical; lexicographic std::vector order gives a deterministic
// term order.
using Mono = std::vector<uint8_t>;

inline Mono mono_trim(Mono m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  return m;
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline unsigned mono_degree(const Mono& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

inline Mono mono_var(size_t i) {
  Mono m(i + 1, 0);
  m[i] = 1;
  return m;
}

// Degree of m restricted to variables [lo, hi).
inline unsigned mono_degree_range(const Mono& m, size_t lo, size_t hi) {
  unsigned d = 0;
  for (size_t i = lo; i < hi && i < m.size(); ++i) d += m[i];
  return d;
}

// Split m into the part supported on [0, cut) and the part on [cut, end),
// re-indexing the second part to start at 0.
inline void mono_split(const Mono& m, size_t cut, Mono& lo, Mono& hi) {
  lo.assign(m.begin(), m.begin() + std::min(cut, m.size()));
  lo = mono_trim(std::move(lo));
  hi.clear();
  if (m.size() > cut) hi.assign(m.begin() + cut, m.end());
  hi = mono_trim(std::move(hi));
}

template <class C>
struct MPoly {
  std::map<Mono, C> terms;

  MPoly() = default;
  MPoly(long v) {
    if (v != 0) terms.emplace(Mono{}, C(v));
  }
  explicit MPoly(const C& c) {
    if (!sphlas::is_zero(c)) terms.emplace(Mono{}, c);
  }
  MPoly(const Mono& m, const C& c) {
    if (!sphlas::is_zero(c)) terms.emplace(mono_trim(m), c);
  }

  static MPoly variable(size_t i) { return MPoly(mono_var(i), C(1)); }

  bool is_zero() const { return terms.empty(); }
  size_t size() const { return terms.size(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, mono_degree(m));
    return d;
  }

  void add_term(const Mono& m, const C& c) {
    if (sphlas::is_zero(c)) return;
    Mono key = mono_trim(m);
    auto it = terms.find(key);
    if (it == terms.end()) {
      terms.emplace(std::move(key), c);
    } else {
      it->second = it->second + c;
      if (sphlas::is_zero(it->second)) terms.erase(it);
    }
  }

  C coeff(const Mono& m) const {
    auto it = terms.find(mono_trim(m));
    return it == terms.end() ? C(0) : it->second;
  }

  friend MPoly operator+(const MPoly& f, const MPoly& g) {
    MPoly r = f;
    for (const auto& [m, c] : g.terms) r.add_term(m, c);
    return r;
  }
  friend MPoly operator-(const MPoly& f) {
    MPoly r = f;
    for (auto& [m, c] : r.terms) c = -c;
    return r;
  }
  friend MPoly operator-(const MPoly& f, const MPoly& g) { return f + (-g); }
  friend MPoly operator*(const MPoly& f, const MPoly& g) {
    MPoly r;
    for (const auto& [mf, cf] : f.terms)
      for (const auto& [mg, cg] : g.terms) r.add_term(mono_mul(mf, mg), cf * cg);
    return r;
  }
  friend MPoly operator*(const MPoly& f, const C& s) {
    MPoly r;
    for (const auto& [m, c] : f.terms) r.add_term(m, c * s);
    return r;
  }
  friend bool operator==(const MPoly& f, const MPoly& g) { return f.terms == g.terms; }
  friend bool operator!=(const MPoly& f, const MPoly& g) { return !(f == g); }

  // Full evaluation at a point.
  template <class V>
  V eval(const std::vector<V>& x) const {
    V acc(0);
    for (const auto& [m, c] : terms) {
      V t(1);
      for (size_t i = 0; i < m.size(); ++i)
        for (unsigned e = 0; e < m[i]; ++e) t = t * x[i];
      if constexpr (std::is_same_v<C, Rat> && std::is_same_v<V, MpFloat>)
        acc = acc + t * to_mpfloat(c);
      else
        acc = acc + t * V(c);
    }
    return acc;
  }

  // Coefficient-wise transformation (e.g. Rat -> RatFuncN lifting).
  template <class D, class F>
  MPoly<D> map_coeffs(F&& f) const {
    MPoly<D> r;
    for (const auto& [m, c] : terms) r.add_term(m, f(c));
    return r;
  }
};

template <class C>
inline bool is_zero(const MPoly<C>& p) {
  return p.is_zero();
}

}  // namespace sphlas
