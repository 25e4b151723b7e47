#include "doctest.h"

#include "sphlas/polynomial.hpp"
#include "sphlas/scalars.hpp"

#include <random>

using namespace sphlas;

TEST_CASE("squarefree split") {
  Int s, d;
  squarefree_split(Int(72), s, d);
  CHECK(s == 6);
  CHECK(d == 2);
  squarefree_split(Int(1), s, d);
  CHECK(s == 1);
  CHECK(d == 1);
  squarefree_split(Int(49), s, d);
  CHECK(s == 7);
  CHECK(d == 1);
}

TEST_CASE("Ext arithmetic in one extension") {
  Ext x(rat(1, 2), rat(1, 3), Int(2));  // 1/2 + (1/3) sqrt 2
  Ext y = x * x;
  CHECK(y.a == rat(1, 4) + rat(2, 9));
  CHECK(y.b == rat(1, 3));
  CHECK(y.d == 2);
  CHECK((x * x.inv()) == Ext(Rat(1)));
  CHECK((x - x).is_zero());
  Ext z(Rat(0), Rat(1), Int(8));  // sqrt 8 = 2 sqrt 2
  CHECK(z.b == 2);
  CHECK(z.d == 2);
  CHECK((x + z).d == 2);
}

TEST_CASE("Ext product of distinct pure radicals stays representable") {
  Ext r2 = ext_sqrt(rat(2));
  Ext r3 = ext_sqrt(rat(3));
  Ext p = r2 * r3;
  CHECK(p.a == 0);
  CHECK(p.b == 1);
  CHECK(p.d == 6);
  Ext r8 = ext_sqrt(rat(8));
  CHECK((r2 * r8) == Ext(Rat(4)));
}

TEST_CASE("Ext mixing two extensions additively is rejected") {
  Ext r2 = ext_sqrt(rat(2));
  Ext r3 = ext_sqrt(rat(3));
  CHECK_THROWS_AS(r2 + r3, FieldTowerError);
  Ext m2(rat(1), rat(1), Int(2));
  Ext m3(rat(1), rat(1), Int(3));
  CHECK_THROWS_AS(m2 * m3, FieldTowerError);
}

TEST_CASE("Ext exact sign") {
  // 7/5 - sqrt(2) shares the sign of 49/25 - 2 < 0
  Ext e(rat(7, 5), rat(-1), Int(2));
  CHECK(e.sign() == -1);
  Ext f(rat(3, 2), rat(-1), Int(2));  // 9/4 > 2
  CHECK(f.sign() == 1);
  Ext g(rat(-3), rat(2), Int(2));  // 9 > 8 so negative wins
  CHECK(g.sign() == -1);
  CHECK(Ext(Rat(0)).sign() == 0);
}

TEST_CASE("ext_sqrt exactness") {
  CHECK(ext_sqrt(rat(9, 4)) == Ext(rat(3, 2)));
  Ext h = ext_sqrt(rat(3, 4));  // sqrt(3)/2
  CHECK(h.a == 0);
  CHECK(h.b == rat(1, 2));
  CHECK(h.d == 3);
  CHECK((h * h) == Ext(rat(3, 4)));
}

TEST_CASE("mpfloat round trip is exact") {
  set_mpfloat_bits(128);
  MpFloat x = MpFloat(3) / MpFloat(4) + MpFloat(1) / MpFloat(1024);
  Rat r = rat_of_mpfloat(x);
  CHECK(r == rat(3, 4) + rat(1, 1024));
  Rat big = rat(-123456789, 1 << 20);
  CHECK(rat_of_mpfloat(to_mpfloat(big)) == big);
}

TEST_CASE("continued fraction rounding") {
  // pi to limited denominators: classic convergents
  Rat pi = rat_from_string("3141592653589793/1000000000000000");
  CHECK(cf_round(pi, Int(1)) == 3);
  CHECK(cf_round(pi, Int(10)) == rat(22, 7));
  CHECK(cf_round(pi, Int(150)) == rat(355, 113));
  // values already representable pass through
  CHECK(cf_round(rat(7, 12), Int(100)) == rat(7, 12));
}

TEST_CASE("cf_round recovers noisy rationals") {
  std::mt19937_64 rng(20260816);
  for (int it = 0; it < 200; ++it) {
    long num = static_cast<long>(rng() % 2000) - 1000;
    long den = 1 + static_cast<long>(rng() % 60);
    Rat target = rat(num, den);
    // perturb by ~1e-12
    Rat noisy = target + rat(static_cast<long>(rng() % 1000) - 500, 1) / rat_from_string("1000000000000000");
    CHECK(cf_round(noisy, Int(10000)) == target);
  }
}

TEST_CASE("GaussRat arithmetic") {
  GaussRat i(rat(0), rat(1));
  CHECK((i * i) == GaussRat(rat(-1)));
  GaussRat z(rat(2), rat(-3));
  CHECK((z * z.conj()) == GaussRat(rat(13)));
}

TEST_CASE("combinatorial helpers") {
  CHECK(factorial(6) == 720);
  CHECK(double_factorial_odd(3) == 15);  // 1*3*5
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(4, 7) == 0);
}
