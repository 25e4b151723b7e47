#pragma once

#include "sphlas/polynomial.hpp"
#include "sphlas/scalars.hpp"

#include <vector>

namespace sphlas {

// Exponent matrix of a monomial in the entries of a Haar-distributed
// orthogonal matrix: entry (i, j) is the exponent of x_{ij}. The ambient
// dimension n stays symbolic; only the occupied window matters.
struct MonomialExponent {
  std::vector<std::vector<unsigned>> e;

  MonomialExponent() = default;
  explicit MonomialExponent(std::vector<std::vector<unsigned>> exps) : e(std::move(exps)) {}
  MonomialExponent(size_t rows, size_t cols) : e(rows, std::vector<unsigned>(cols, 0)) {}

  size_t rows() const { return e.size(); }
  size_t cols() const { return e.empty() ? 0 : e[0].size(); }
  unsigned degree() const {
    unsigned d = 0;
    for (const auto& row : e)
      for (unsigned x : row) d += x;
    return d;
  }
  std::string key() const;
};

struct MomentOptions {
  // Total-degree cap for the generic pairing-calculus path. Monomials
  // supported on at most two rows or two columns take a closed-form route
  // and are not subject to the cap.
  unsigned degree_cap = 10;
  // Degree exactly 10 runs a 945x945 pairing system; opt in explicitly.
  bool enable_degree_10 = false;
};

// E[prod x_ij^e_ij] over the orthogonal group O(n) with Haar probability
// measure, as an exact rational function of n. Valid for integer n >= degree.
RatFuncN moment_symbolic(const MonomialExponent& m, const MomentOptions& opts = {});

// Same expectation at a fixed integer dimension n >= degree.
Rat moment_fixed(const MonomialExponent& m, long n, const MomentOptions& opts = {});

// Asymptotic order in n and its coefficient: moment ~ coeff * n^order.
void leading_term(const MonomialExponent& m, int& order, Rat& coeff,
                  const MomentOptions& opts = {});

// The generic pairing-calculus evaluation regardless of support shape,
// subject to the degree cap. Exposed for cross-validation against the
// closed-form two-column route; moment_symbolic dispatches automatically.
RatFuncN moment_symbolic_generic(const MonomialExponent& m, const MomentOptions& opts = {});

// Moments of one uniform point on the sphere S^{n-1}: E[prod u_r^{a_r}],
// exact in n (zero when any exponent is odd).
RatFuncN sphere_moment(const std::vector<unsigned>& a);

// Number of perfect matchings of 2k points: (2k-1)!!, the size of the
// pairing basis used by the generic path.
Int pairing_count(unsigned k);

}  // namespace sphlas
