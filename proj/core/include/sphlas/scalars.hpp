#pragma once

#include <gmpxx.h>
#include <mpfr.h>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphlas {

using Int = mpz_class;
using Rat = mpq_class;
using MpFloat = boost::multiprecision::mpfr_float;

inline void set_mpfloat_bits(unsigned bits) {
  MpFloat::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2);
}

inline Rat rat(long num, long den = 1) { Rat r(num, den); r.canonicalize(); return r; }

inline Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline int sgn(const Rat& r) { return sgn(r.get_num()); }

inline MpFloat to_mpfloat(const Rat& r) {
  return MpFloat(r.get_num().get_str()) / MpFloat(r.get_den().get_str());
}

// Exact rational value of an MpFloat (every finite binary float is rational).
inline Rat rat_of_mpfloat(const MpFloat& x) {
  mpz_class z;
  mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x.backend().data());
  Rat r(z);
  if (e >= 0) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
    r *= Rat(p);
  } else {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    r /= Rat(p);
  }
  r.canonicalize();
  return r;
}

// Largest s with s^2 | m, plus the squarefree cofactor d = m / s^2.
inline void squarefree_split(const Int& m, Int& s, Int& d) {
  if (m <= 0) throw std::domain_error("squarefree_split needs a positive integer");
  s = 1;
  d = m;
  for (Int p = 2; p * p <= d; ++p) {
    while (mpz_divisible_p(d.get_mpz_t(), Int(p * p).get_mpz_t())) {
      d /= p * p;
      s *= p;
    }
  }
  return;
}

struct FieldTowerError : std::runtime_error {
  explicit FieldTowerError(const std::string& what) : std::runtime_error(what) {}
};

// Element a + b*sqrt(d) of a real quadratic extension of Q.
// Invariants: d is a squarefree positive integer; d == 1 iff b == 0.
// Arithmetic mixing two distinct radicands throws FieldTowerError unless the
// result happens to stay inside one extension (e.g. sqrt(2)*sqrt(3)).
struct Ext {
  Rat a;
  Rat b;
  Int d;

  Ext() : a(0), b(0), d(1) {}
  Ext(const Rat& a_) : a(a_), b(0), d(1) {}
  Ext(long v) : a(v), b(0), d(1) {}
  Ext(const Rat& a_, const Rat& b_, const Int& d_) : a(a_), b(b_), d(d_) { normalize(); }

  void normalize() {
    if (d <= 0) throw std::domain_error("Ext radicand must be positive");
    if (b == 0) { d = 1; return; }
    Int s, sf;
    squarefree_split(d, s, sf);
    b *= Rat(s);
    d = sf;
    if (d == 1) { a += b; b = 0; }
  }

  bool is_rational() const { return b == 0; }
  bool is_zero() const { return a == 0 && b == 0; }

  friend Ext operator+(const Ext& x, const Ext& y) {
    if (y.b == 0) return Ext(x.a + y.a, x.b, x.d);
    if (x.b == 0) return Ext(x.a + y.a, y.b, y.d);
    if (x.d != y.d)
      throw FieldTowerError("sum of sqrt(" + x.d.get_str() + ") and sqrt(" + y.d.get_str() +
                            ") terms leaves the quadratic extension");
    Ext r(x.a + y.a, x.b + y.b, x.d);
    r.normalize();
    return r;
  }
  friend Ext operator-(const Ext& x) { return Ext(-x.a, -x.b, x.d); }
  friend Ext operator-(const Ext& x, const Ext& y) { return x + (-y); }

  friend Ext operator*(const Ext& x, const Ext& y) {
    if (x.b == 0) return Ext(x.a * y.a, x.a * y.b, y.d);
    if (y.b == 0) return Ext(x.a * y.a, y.a * x.b, x.d);
    if (x.d == y.d) return Ext(x.a * y.a + x.b * y.b * Rat(x.d), x.a * y.b + x.b * y.a, x.d);
    if (x.a == 0 && y.a == 0) return Ext(Rat(0), x.b * y.b, x.d * y.d);
    throw FieldTowerError("product of sqrt(" + x.d.get_str() + ") and sqrt(" + y.d.get_str() +
                          ") elements leaves the quadratic extension");
  }

  Ext conj() const { return Ext(a, -b, d); }

  Ext inv() const {
    if (is_zero()) throw std::domain_error("division by zero Ext");
    if (b == 0) return Ext(1 / a);
    Rat nrm = a * a - b * b * Rat(d);
    if (nrm == 0) throw std::domain_error("non-invertible Ext (zero norm)");
    return Ext(a / nrm, -b / nrm, d);
  }
  friend Ext operator/(const Ext& x, const Ext& y) { return x * y.inv(); }

  friend bool operator==(const Ext& x, const Ext& y) {
    if (x.b == 0 && y.b == 0) return x.a == y.a;
    return x.a == y.a && x.b == y.b && x.d == y.d;
  }
  friend bool operator!=(const Ext& x, const Ext& y) { return !(x == y); }

  int sign() const {
    if (b == 0) return sgn(a);
    if (a == 0) return sgn(b);
    int sa = sgn(a), sb = sgn(b);
    if (sa == sb) return sa;
    Rat lhs = a * a, rhs = b * b * Rat(d);
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? sa : sb;
  }

  MpFloat approx() const {
    MpFloat v = to_mpfloat(a);
    if (b != 0) v += to_mpfloat(b) * sqrt(MpFloat(d.get_str()));
    return v;
  }

  std::string str() const {
    if (b == 0) return a.get_str();
    return a.get_str() + (sgn(b) >= 0 ? "+" : "") + b.get_str() + "*sqrt(" + d.get_str() + ")";
  }
};

inline Ext ext_sqrt(const Rat& p) {
  if (p < 0) throw std::domain_error("ext_sqrt of a negative rational");
  if (p == 0) return Ext();
  // sqrt(u/v) = sqrt(u*v)/v
  Int uv = p.get_num() * p.get_den();
  Int s, d;
  squarefree_split(uv, s, d);
  if (d == 1) return Ext(Rat(s) / Rat(p.get_den()));
  return Ext(Rat(0), Rat(s) / Rat(p.get_den()), d);
}

inline bool is_zero(const Rat& r) { return r == 0; }
inline bool is_zero(const Ext& e) { return e.is_zero(); }
inline bool is_zero(const MpFloat& x) { return x == 0; }

struct GaussRat {
  Rat re;
  Rat im;
  GaussRat() : re(0), im(0) {}
  GaussRat(const Rat& r) : re(r), im(0) {}
  GaussRat(long r) : re(r), im(0) {}
  GaussRat(const Rat& r, const Rat& i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return GaussRat(re, -im); }

  friend GaussRat operator+(const GaussRat& x, const GaussRat& y) {
    return GaussRat(x.re + y.re, x.im + y.im);
  }
  friend GaussRat operator-(const GaussRat& x) { return GaussRat(-x.re, -x.im); }
  friend GaussRat operator-(const GaussRat& x, const GaussRat& y) { return x + (-y); }
  friend GaussRat operator*(const GaussRat& x, const GaussRat& y) {
    return GaussRat(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
  }
  friend bool operator==(const GaussRat& x, const GaussRat& y) {
    return x.re == y.re && x.im == y.im;
  }
  friend bool operator!=(const GaussRat& x, const GaussRat& y) { return !(x == y); }
};

inline bool is_zero(const GaussRat& g) { return g.is_zero(); }

// Best rational approximation to x with denominator <= den_bound, by
// continued-fraction convergents and the boundary semiconvergent.
inline Rat cf_round(const Rat& x, const Int& den_bound) {
  if (den_bound < 1) throw std::domain_error("cf_round needs den_bound >= 1");
  if (x.get_den() <= den_bound) return x;
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rat rem = x;
  Int pk = 0, qk = 1;
  while (true) {
    Int a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num().get_mpz_t(), rem.get_den().get_mpz_t());
    Int p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > den_bound) {
      // largest semiconvergent still within the bound
      Int j = (den_bound - q0) / q1;
      pk = j * p1 + p0;
      qk = j * q1 + q0;
      Rat conv(p1, q1), semi(pk, qk);
      conv.canonicalize();
      semi.canonicalize();
      return (abs(x - semi) < abs(x - conv)) ? semi : conv;
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rat frac = rem - Rat(a);
    if (frac == 0) break;
    rem = Rat(1) / frac;
  }
  Rat r(p1, q1);
  r.canonicalize();
  return r;
}

inline Rat round_float_to_rational(const MpFloat& x, const Int& den_bound) {
  return cf_round(rat_of_mpfloat(x), den_bound);
}

inline Int factorial(unsigned k) {
  Int f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

inline Int double_factorial_odd(unsigned k) {  // (2k-1)!!
  Int f = 1;
  for (unsigned i = 1; i <= k; ++i) f *= 2 * i - 1;
  return f;
}

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

}  // namespace sphlas
