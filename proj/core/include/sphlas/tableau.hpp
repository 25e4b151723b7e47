#pragma once

#include "sphlas/linalg.hpp"
#include "sphlas/scalars.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace sphlas {

// Partition with weakly decreasing positive parts.
using Partition = std::vector<unsigned>;

inline bool partition_valid(const Partition& p) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) return false;
    if (i > 0 && p[i] > p[i - 1]) return false;
  }
  return true;
}

inline unsigned partition_weight(const Partition& p) {
  unsigned w = 0;
  for (unsigned x : p) w += x;
  return w;
}

Partition conjugate(const Partition& p);

// All partitions of weight <= max_weight with at most max_rows rows,
// in deterministic order (by weight, then lexicographic).
std::vector<Partition> partitions_up_to(unsigned max_weight, unsigned max_rows);

// Dimension of the irreducible GL(t) module with highest weight lambda
// (Weyl dimension formula; zero when lambda has more than t rows).
Int weyl_dim(const Partition& lambda, unsigned t);

// Filling of the diagram of lambda stored column-wise: cols[j] holds the
// entries of column j+1 top to bottom, so cols[j].size() == conjugate(lambda)[j].
struct Tableau {
  std::vector<std::vector<int>> cols;

  Tableau() = default;
  explicit Tableau(std::vector<std::vector<int>> c) : cols(std::move(c)) {}

  Partition shape() const {
    Partition mu;
    for (const auto& c : cols) mu.push_back(static_cast<unsigned>(c.size()));
    return conjugate(mu);
  }

  int max_entry() const {
    int m = 0;
    for (const auto& c : cols)
      for (int e : c) m = std::max(m, e);
    return m;
  }

  bool is_semistandard() const;

  // Key for maps/serialization: entries column-wise, comma separated.
  std::string key() const;

  friend bool operator==(const Tableau& a, const Tableau& b) { return a.cols == b.cols; }
};

// The source ordering on fillings of one shape: compare the flattened column
// encoding at the last position where the fillings differ ("reverse
// lexicographic": larger there means larger tableau).
bool revlex_less(const Tableau& a, const Tableau& b);

// Total order used for bases: first by largest entry used, then revlex.
// Grouping by largest entry makes the basis for entries <= s a prefix of the
// basis for entries <= s' whenever s <= s'.
bool basis_order_less(const Tableau& a, const Tableau& b);

// Ordered semistandard fillings of shape lambda with entries in 1..t.
struct SemistandardBasis {
  Partition lambda;
  unsigned t = 0;
  std::vector<Tableau> tabs;
  std::map<std::string, size_t> index;

  size_t dim() const { return tabs.size(); }
  size_t index_of(const Tableau& tab) const {
    auto it = index.find(tab.key());
    if (it == index.end()) throw std::invalid_argument("tableau not in basis: " + tab.key());
    return it->second;
  }
};

SemistandardBasis enumerate_ssyt(const Partition& lambda, unsigned t);

// Sparse rational vector in a SemistandardBasis (index -> coefficient).
using TableauVector = std::map<size_t, Rat>;

// Straightening of arbitrary fillings into the semistandard basis, with a
// memo shared across calls. Thread-safe; results are immutable once stored.
class Straightener {
 public:
  explicit Straightener(SemistandardBasis basis) : basis_(std::move(basis)) {}

  const SemistandardBasis& basis() const { return basis_; }

  // e_T as a combination of semistandard e_S (Algorithm: kill repeated
  // column entries, sort columns, then exchange moves between adjacent
  // columns until semistandard).
  TableauVector decompose(const Tableau& t) const;

 private:
  TableauVector decompose_sorted(const Tableau& t) const;

  SemistandardBasis basis_;
  mutable std::map<std::string, TableauVector> memo_;
  mutable std::mutex mu_;
};

namespace detail {
template <class S>
S from_rat(const Rat& r) {
  return S(r);
}
template <>
inline MpFloat from_rat<MpFloat>(const Rat& r) {
  return to_mpfloat(r);
}

// det of the square submatrix a[rows, cols] by Laplace expansion; row/col
// index vectors are 0-based.
template <class S>
S submatrix_det(const Matrix<S>& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  size_t n = rows.size();
  if (n == 0) return S(1);
  if (n == 1) return a(rows[0], cols[0]);
  if (n == 2)
    return a(rows[0], cols[0]) * a(rows[1], cols[1]) - a(rows[0], cols[1]) * a(rows[1], cols[0]);
  S acc(0);
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  std::vector<int> sub_cols;
  for (size_t k = 0; k < n; ++k) {
    if (is_zero(a(rows[0], cols[k]))) continue;
    sub_cols.clear();
    for (size_t j = 0; j < n; ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    S minor = submatrix_det(a, sub_rows, sub_cols);
    S term = a(rows[0], cols[k]) * minor;
    if (k % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  }
  return acc;
}

// All strictly increasing r-subsets of {0..m-1}.
std::vector<std::vector<int>> increasing_subsets(int m, int r);
}  // namespace detail

// Image of one basis tableau under the Weyl-module map induced by a scalar
// matrix, as a dense coordinate vector in the target basis. The image of a
// decomposable wedge column is expanded over minors of a, and each resulting
// column-strict filling is straightened in the target.
template <class S>
std::vector<S> rho_column(const Matrix<S>& a, const Tableau& tab, const Straightener& dst) {
  std::vector<S> out(dst.basis().dim(), S(0));
  int rows_avail = static_cast<int>(a.rows);
  std::vector<std::vector<int>> chosen(tab.cols.size());
  std::function<void(size_t, const S&)> walk = [&](size_t col, const S& coeff) {
    if (is_zero(coeff)) return;
    if (col == tab.cols.size()) {
      std::vector<std::vector<int>> img_cols;
      img_cols.reserve(chosen.size());
      for (const auto& k : chosen) {
        std::vector<int> c;
        c.reserve(k.size());
        for (int idx : k) c.push_back(idx + 1);
        img_cols.push_back(std::move(c));
      }
      TableauVector dec = dst.decompose(Tableau(std::move(img_cols)));
      for (const auto& [idx, r] : dec) out[idx] = out[idx] + coeff * detail::from_rat<S>(r);
      return;
    }
    int r = static_cast<int>(tab.cols[col].size());
    std::vector<int> tcols;
    for (int e : tab.cols[col]) tcols.push_back(e - 1);
    for (const auto& k : detail::increasing_subsets(rows_avail, r)) {
      S d = detail::submatrix_det(a, k, tcols);
      if (is_zero(d)) continue;
      chosen[col] = k;
      walk(col + 1, coeff * d);
    }
    chosen[col].clear();
  };
  walk(0, S(1));
  return out;
}

// Matrix of the Weyl-module map induced by a (rows x cols) scalar matrix:
// the source basis uses entries <= a.cols, the target basis entries <= a.rows.
template <class S>
Matrix<S> rho_matrix(const Matrix<S>& a, const SemistandardBasis& src, const Straightener& dst) {
  Matrix<S> out(dst.basis().dim(), src.dim());
  for (size_t jsrc = 0; jsrc < src.dim(); ++jsrc) {
    auto col = rho_column(a, src.tabs[jsrc], dst);
    for (size_t i = 0; i < col.size(); ++i) out(i, jsrc) = col[i];
  }
  return out;
}

// Apply the induced map to a sparse vector over the source basis.
template <class S>
std::vector<S> rho_apply(const Matrix<S>& a, const TableauVector& v,
                         const SemistandardBasis& src, const Straightener& dst) {
  std::vector<S> out(dst.basis().dim(), S(0));
  for (const auto& [j, c] : v) {
    auto col = rho_column(a, src.tabs[j], dst);
    S cs = detail::from_rat<S>(c);
    for (size_t i = 0; i < col.size(); ++i) out[i] = out[i] + col[i] * cs;
  }
  return out;
}

// Matrix of the derived action of the elementary matrix E_{r,s} (1-based):
// e_T maps to the sum over single replacements of an entry s by r, each
// straightened into the basis.
Matrix<Rat> drho_matrix(int r, int s, const SemistandardBasis& basis, const Straightener& str);

}  // namespace sphlas
