#include "sphlas/gegenbauer.hpp"

namespace sphlas {

std::vector<RatFuncN> gegenbauer_raw(unsigned k) {
  // C_0 = 1, C_1 = 2 a s, k C_k = 2 s (k + a - 1) C_{k-1} - (k + 2a - 2) C_{k-2}
  // with a = (n - 2) / 2.
  RatFuncN a(PolyN(std::vector<Rat>{rat(-1), rat(1, 2)}));
  std::vector<std::vector<RatFuncN>> c(k + 1);
  c[0] = {RatFuncN(rat(1))};
  if (k >= 1) c[1] = {RatFuncN(), a * rat(2)};
  for (unsigned m = 2; m <= k; ++m) {
    RatFuncN f1 = (a + RatFuncN(rat(static_cast<long>(m) - 1))) * rat(2, static_cast<long>(m));
    RatFuncN f2 = (a * rat(2) + RatFuncN(rat(static_cast<long>(m) - 2))) * rat(1, static_cast<long>(m));
    std::vector<RatFuncN> cur(m + 1);
    for (unsigned j = 0; j < c[m - 1].size(); ++j) cur[j + 1] = cur[j + 1] + f1 * c[m - 1][j];
    for (unsigned j = 0; j < c[m - 2].size(); ++j) cur[j] = cur[j] - f2 * c[m - 2][j];
    c[m] = std::move(cur);
  }
  return c[k];
}

std::vector<RatFuncN> gegenbauer_normalized(unsigned k) {
  auto raw = gegenbauer_raw(k);
  RatFuncN at_one;
  for (const auto& f : raw) at_one = at_one + f;
  if (at_one.is_zero()) throw std::logic_error("Gegenbauer vanishes at 1");
  std::vector<RatFuncN> out;
  out.reserve(raw.size());
  for (const auto& f : raw) out.push_back(f / at_one);
  return out;
}

Rat eval_poly_in_s(const std::vector<RatFuncN>& coeffs, const Rat& n, const Rat& s) {
  Rat acc(0), p(1);
  for (const auto& f : coeffs) {
    if (!f.is_zero()) acc += f.eval(n) * p;
    p *= s;
  }
  return acc;
}

}  // namespace sphlas
