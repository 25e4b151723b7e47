#include "sphlas/polynomial.hpp"
#include "sphlas/linalg.hpp"

namespace sphlas {

std::optional<RatFuncN> ratfunc_interpolate(const std::vector<std::pair<Rat, Rat>>& samples,
                                            int dn, int dd) {
  // Unknowns: num coefficients (dn+1) then den coefficients (dd+1).
  // Homogeneous system num(x_i) - y_i * den(x_i) = 0.
  size_t cn = static_cast<size_t>(dn + 1), cd = static_cast<size_t>(dd + 1);
  Matrix<Rat> m(samples.size(), cn + cd);
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& [x, y] = samples[i];
    Rat p(1);
    for (size_t j = 0; j < cn; ++j) {
      m(i, j) = p;
      p *= x;
    }
    p = 1;
    for (size_t j = 0; j < cd; ++j) {
      m(i, cn + j) = -y * p;
      p *= x;
    }
  }
  auto null = nullspace(std::move(m));
  for (const auto& v : null) {
    PolyN num(std::vector<Rat>(v.begin(), v.begin() + cn));
    PolyN den(std::vector<Rat>(v.begin() + cn, v.end()));
    if (den.is_zero()) continue;
    RatFuncN f(num, den);
    bool ok = true;
    for (const auto& [x, y] : samples) {
      if (f.den(x) == 0 || f.num(x) != y * f.den(x)) { ok = false; break; }
    }
    if (ok) return f;
  }
  return std::nullopt;
}

}  // namespace sphlas
