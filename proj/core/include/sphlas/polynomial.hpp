#pragma once

#include "sphlas/scalars.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

namespace sphlas {

// Univariate polynomial over Q in the ambient dimension variable n.
// Coefficients ascending: c[i] multiplies n^i. Zero polynomial has empty c.
struct PolyN {
  std::vector<Rat> c;

  PolyN() = default;
  PolyN(const Rat& r) { if (r != 0) c = {r}; }
  PolyN(long v) { if (v != 0) c = {Rat(v)}; }
  explicit PolyN(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }

  static PolyN variable() { return PolyN(std::vector<Rat>{Rat(0), Rat(1)}); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Rat& leading() const {
    static const Rat zero(0);
    return c.empty() ? zero : c.back();
  }
  Rat coeff(size_t i) const { return i < c.size() ? c[i] : Rat(0); }

  friend PolyN operator+(const PolyN& f, const PolyN& g) {
    PolyN r;
    r.c.resize(std::max(f.c.size(), g.c.size()), Rat(0));
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] += f.c[i];
    for (size_t i = 0; i < g.c.size(); ++i) r.c[i] += g.c[i];
    r.trim();
    return r;
  }
  friend PolyN operator-(const PolyN& f) {
    PolyN r = f;
    for (auto& x : r.c) x = -x;
    return r;
  }
  friend PolyN operator-(const PolyN& f, const PolyN& g) { return f + (-g); }
  friend PolyN operator*(const PolyN& f, const PolyN& g) {
    if (f.is_zero() || g.is_zero()) return PolyN();
    PolyN r;
    r.c.assign(f.c.size() + g.c.size() - 1, Rat(0));
    for (size_t i = 0; i < f.c.size(); ++i)
      for (size_t j = 0; j < g.c.size(); ++j) r.c[i + j] += f.c[i] * g.c[j];
    r.trim();
    return r;
  }
  friend PolyN operator*(const PolyN& f, const Rat& s) {
    PolyN r = f;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
  }
  friend PolyN operator*(const Rat& s, const PolyN& f) { return f * s; }
  friend bool operator==(const PolyN& f, const PolyN& g) { return f.c == g.c; }
  friend bool operator!=(const PolyN& f, const PolyN& g) { return !(f == g); }

  template <class T>
  T eval(const T& x) const {
    T acc(0);
    for (size_t i = c.size(); i-- > 0;) {
      acc = acc * x;
      if constexpr (std::is_same_v<T, Rat>) acc += c[i];
      else acc += to_mpfloat(c[i]);
    }
    return acc;
  }
  Rat operator()(const Rat& x) const { return eval<Rat>(x); }

  PolyN derivative() const {
    PolyN r;
    for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * Rat(static_cast<long>(i)));
    r.trim();
    return r;
  }

  // f(g(n))
  PolyN compose(const PolyN& g) const {
    PolyN acc;
    for (size_t i = c.size(); i-- > 0;) acc = acc * g + PolyN(c[i]);
    return acc;
  }
  PolyN shift(const Rat& a) const {  // f(n + a)
    return compose(PolyN(std::vector<Rat>{a, Rat(1)}));
  }

  PolyN monic() const {
    if (is_zero()) return *this;
    Rat inv = 1 / c.back();
    return *this * inv;
  }

  static void divmod(const PolyN& f, const PolyN& g, PolyN& q, PolyN& r) {
    if (g.is_zero()) throw std::domain_error("polynomial division by zero");
    q = PolyN();
    r = f;
    while (!r.is_zero() && r.degree() >= g.degree()) {
      size_t shift = static_cast<size_t>(r.degree() - g.degree());
      Rat coef = r.c.back() / g.c.back();
      PolyN term;
      term.c.assign(shift + 1, Rat(0));
      term.c[shift] = coef;
      q = q + term;
      r = r - term * g;
    }
  }

  friend PolyN gcd(const PolyN& f, const PolyN& g) {
    PolyN a = f, b = g;
    while (!b.is_zero()) {
      PolyN q, r;
      divmod(a, b, q, r);
      a = b;
      b = r;
    }
    return a.is_zero() ? a : a.monic();
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c.size(); i-- > 0;) {
      if (c[i] == 0) continue;
      if (!first) os << (sgn(c[i]) >= 0 ? " + " : " - ");
      Rat a = first ? c[i] : Rat(abs(c[i]));
      first = false;
      if (i == 0) { os << a.get_str(); continue; }
      if (a != 1) os << a.get_str() << "*";
      os << "n";
      if (i > 1) os << "^" << i;
    }
    return os.str();
  }
};

inline bool is_zero(const PolyN& f) { return f.is_zero(); }

// Rational function of n in canonical reduced form: gcd(num, den) = 1 and
// den monic nonzero.
struct RatFuncN {
  PolyN num;
  PolyN den;

  RatFuncN() : num(), den(1) {}
  RatFuncN(const Rat& r) : num(r), den(1) {}
  RatFuncN(long v) : num(v), den(1) {}
  RatFuncN(const PolyN& p) : num(p), den(1) {}
  RatFuncN(PolyN n_, PolyN d_) : num(std::move(n_)), den(std::move(d_)) { reduce(); }

  static RatFuncN variable() { return RatFuncN(PolyN::variable()); }

  void reduce() {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num.is_zero()) { den = PolyN(1); return; }
    PolyN g = gcd(num, den);
    if (g.degree() > 0) {
      PolyN q, r;
      PolyN::divmod(num, g, q, r);
      num = q;
      PolyN::divmod(den, g, q, r);
      den = q;
    }
    Rat lead = den.leading();
    if (lead != 1) {
      Rat inv = 1 / lead;
      num = num * inv;
      den = den * inv;
    }
  }

  bool is_zero() const { return num.is_zero(); }
  bool is_polynomial() const { return den.degree() == 0; }

  friend RatFuncN operator+(const RatFuncN& f, const RatFuncN& g) {
    return RatFuncN(f.num * g.den + g.num * f.den, f.den * g.den);
  }
  friend RatFuncN operator-(const RatFuncN& f) { RatFuncN r = f; r.num = -r.num; return r; }
  friend RatFuncN operator-(const RatFuncN& f, const RatFuncN& g) { return f + (-g); }
  friend RatFuncN operator*(const RatFuncN& f, const RatFuncN& g) {
    return RatFuncN(f.num * g.num, f.den * g.den);
  }
  friend RatFuncN operator/(const RatFuncN& f, const RatFuncN& g) {
    if (g.is_zero()) throw std::domain_error("division by zero rational function");
    return RatFuncN(f.num * g.den, f.den * g.num);
  }
  friend RatFuncN operator*(const RatFuncN& f, const Rat& s) { return RatFuncN(f.num * s, f.den); }
  friend bool operator==(const RatFuncN& f, const RatFuncN& g) {
    return f.num == g.num && f.den == g.den;
  }
  friend bool operator!=(const RatFuncN& f, const RatFuncN& g) { return !(f == g); }

  Rat eval(const Rat& n) const {
    Rat d = den(n);
    if (d == 0) throw std::domain_error("rational function pole at n = " + n.get_str());
    return num(n) / d;
  }
  MpFloat eval_float(const MpFloat& n) const {
    return num.eval<MpFloat>(n) / den.eval<MpFloat>(n);
  }

  // Asymptotic order and coefficient: f(n) ~ coeff * n^order as n -> inf.
  void leading(int& order, Rat& coeff) const {
    if (is_zero()) { order = 0; coeff = Rat(0); return; }
    order = num.degree() - den.degree();
    coeff = num.leading() / den.leading();
  }

  RatFuncN shift(const Rat& a) const { return RatFuncN(num.shift(a), den.shift(a)); }

  std::string str() const {
    if (is_polynomial()) return num.str();
    return "(" + num.str() + ") / (" + den.str() + ")";
  }
};

inline bool is_zero(const RatFuncN& f) { return f.is_zero(); }

// Accumulates sum_i c_i * f_i over a running common denominator and reduces
// once at the end; far cheaper than chained reduced additions when many
// terms share denominator factors.
struct RatFuncAccum {
  PolyN num;
  PolyN den{1};

  void add(const RatFuncN& f, const Rat& c) {
    if (f.is_zero() || c == 0) return;
    PolyN g = gcd(den, f.den);
    PolyN fpart, opart, r;
    PolyN::divmod(f.den, g, fpart, r);  // f.den / g
    PolyN::divmod(den, g, opart, r);    // den / g
    num = num * fpart + f.num * c * opart;
    den = den * fpart;
  }
  void add(const RatFuncN& f) { add(f, Rat(1)); }

  bool is_zero() const { return num.is_zero(); }
  RatFuncN result() const { return RatFuncN(num, den); }
};

// Complex-valued rational function tracked as an explicit (re, im) pair.
struct GaussFuncN {
  RatFuncN re;
  RatFuncN im;
  GaussFuncN() = default;
  GaussFuncN(const RatFuncN& r) : re(r) {}
  GaussFuncN(const RatFuncN& r, const RatFuncN& i) : re(r), im(i) {}
  GaussFuncN(const GaussRat& g) : re(Rat(g.re)), im(Rat(g.im)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  friend GaussFuncN operator+(const GaussFuncN& x, const GaussFuncN& y) {
    return GaussFuncN(x.re + y.re, x.im + y.im);
  }
  friend GaussFuncN operator-(const GaussFuncN& x) { return GaussFuncN(-x.re, -x.im); }
  friend GaussFuncN operator-(const GaussFuncN& x, const GaussFuncN& y) { return x + (-y); }
  friend GaussFuncN operator*(const GaussFuncN& x, const GaussFuncN& y) {
    return GaussFuncN(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
  }
};

inline bool is_zero(const GaussFuncN& f) { return f.is_zero(); }

// Recover f = num/den with deg num <= dn, deg den <= dd from exact samples
// f(x_i) = y_i. Returns nullopt if no rational function of that shape fits.
std::optional<RatFuncN> ratfunc_interpolate(const std::vector<std::pair<Rat, Rat>>& samples,
                                            int dn, int dd);

}  // namespace sphlas
