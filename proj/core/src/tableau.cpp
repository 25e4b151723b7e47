#include "sphlas/tableau.hpp"

#include <algorithm>
#include <sstream>

namespace sphlas {

Partition conjugate(const Partition& p) {
  Partition q;
  if (p.empty()) return q;
  for (unsigned i = 1; i <= p[0]; ++i) {
    unsigned cnt = 0;
    for (unsigned part : p)
      if (part >= i) ++cnt;
    q.push_back(cnt);
  }
  return q;
}

std::vector<Partition> partitions_up_to(unsigned max_weight, unsigned max_rows) {
  std::vector<Partition> out;
  out.push_back({});  // empty partition
  std::function<void(Partition&, unsigned, unsigned)> rec = [&](Partition& cur, unsigned left,
                                                                unsigned cap) {
    for (unsigned part = std::min(cap, left); part >= 1; --part) {
      if (cur.size() == max_rows) break;
      cur.push_back(part);
      out.push_back(cur);
      rec(cur, left - part, part);
      cur.pop_back();
    }
  };
  for (unsigned w = 1; w <= max_weight; ++w) {
    Partition cur;
    // enumerate partitions of exact weight w: take first part then recurse
    std::function<void(Partition&, unsigned, unsigned)> exact = [&](Partition& c, unsigned left,
                                                                    unsigned cap) {
      if (left == 0) {
        out.push_back(c);
        return;
      }
      if (c.size() == max_rows) return;
      for (unsigned part = std::min(cap, left); part >= 1; --part) {
        c.push_back(part);
        exact(c, left - part, part);
        c.pop_back();
      }
    };
    exact(cur, w, w);
  }
  std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
    unsigned wa = partition_weight(a), wb = partition_weight(b);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Int weyl_dim(const Partition& lambda, unsigned t) {
  if (!partition_valid(lambda)) throw std::invalid_argument("invalid partition");
  if (lambda.size() > t) return 0;
  std::vector<long> l(t, 0);
  for (size_t i = 0; i < lambda.size(); ++i) l[i] = lambda[i];
  Rat d(1);
  for (unsigned i = 0; i < t; ++i)
    for (unsigned j = i + 1; j < t; ++j)
      d *= rat(l[i] - l[j] + static_cast<long>(j - i), static_cast<long>(j - i));
  if (d.get_den() != 1) throw std::logic_error("Weyl dimension not integral");
  return d.get_num();
}

bool Tableau::is_semistandard() const {
  for (size_t j = 0; j < cols.size(); ++j) {
    const auto& c = cols[j];
    for (size_t k = 0; k + 1 < c.size(); ++k)
      if (c[k] >= c[k + 1]) return false;
    if (j + 1 < cols.size()) {
      const auto& d = cols[j + 1];
      for (size_t k = 0; k < d.size(); ++k)
        if (c[k] > d[k]) return false;
    }
  }
  return true;
}

std::string Tableau::key() const {
  std::ostringstream os;
  for (size_t j = 0; j < cols.size(); ++j) {
    if (j) os << "|";
    for (size_t k = 0; k < cols[j].size(); ++k) {
      if (k) os << ",";
      os << cols[j][k];
    }
  }
  return os.str();
}

bool revlex_less(const Tableau& a, const Tableau& b) {
  // compare at the last differing position of the column encoding
  for (size_t j = a.cols.size(); j-- > 0;) {
    const auto& ca = a.cols[j];
    const auto& cb = b.cols[j];
    for (size_t k = ca.size(); k-- > 0;) {
      if (ca[k] != cb[k]) return ca[k] < cb[k];
    }
  }
  return false;
}

bool basis_order_less(const Tableau& a, const Tableau& b) {
  int ma = a.max_entry(), mb = b.max_entry();
  if (ma != mb) return ma < mb;
  return revlex_less(a, b);
}

SemistandardBasis enumerate_ssyt(const Partition& lambda, unsigned t) {
  if (!partition_valid(lambda)) throw std::invalid_argument("invalid partition");
  SemistandardBasis basis;
  basis.lambda = lambda;
  basis.t = t;
  if (lambda.size() > t) return basis;
  Partition mu = conjugate(lambda);

  std::vector<std::vector<int>> cols(mu.size());
  std::function<void(size_t)> fill_col = [&](size_t j) {
    if (j == mu.size()) {
      basis.tabs.emplace_back(cols);
      return;
    }
    size_t len = mu[j];
    std::vector<int> col(len);
    std::function<void(size_t, int)> fill_entry = [&](size_t k, int lo) {
      if (k == len) {
        cols[j] = col;
        fill_col(j + 1);
        return;
      }
      int row_lo = (j > 0) ? cols[j - 1][k] : 1;  // weakly increasing rows
      for (int e = std::max(lo, row_lo); e <= static_cast<int>(t); ++e) {
        col[k] = e;
        fill_entry(k + 1, e + 1);  // strictly increasing columns
      }
    };
    fill_entry(0, 1);
  };
  fill_col(0);

  std::sort(basis.tabs.begin(), basis.tabs.end(), basis_order_less);
  for (size_t i = 0; i < basis.tabs.size(); ++i) basis.index[basis.tabs[i].key()] = i;
  if (Int(static_cast<long>(basis.tabs.size())) != weyl_dim(lambda, t))
    throw std::logic_error("semistandard count disagrees with the dimension formula");
  return basis;
}

TableauVector Straightener::decompose(const Tableau& tab) const {
  // fillings with a repeated entry in some column vanish; otherwise sort
  // each column and track the sign of the sorting permutations
  Tableau sorted = tab;
  Rat sign(1);
  for (auto& col : sorted.cols) {
    for (size_t i = 0; i < col.size(); ++i)
      for (size_t j = i + 1; j < col.size(); ++j) {
        if (col[i] == col[j]) return {};
        if (col[i] > col[j]) {
          std::swap(col[i], col[j]);
          sign = -sign;
        }
      }
  }
  TableauVector v = decompose_sorted(sorted);
  if (sign < 0)
    for (auto& [idx, c] : v) c = -c;
  return v;
}

TableauVector Straightener::decompose_sorted(const Tableau& tab) const {
  std::string k = tab.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
  }

  TableauVector result;
  if (tab.is_semistandard()) {
    result[basis_.index_of(tab)] = 1;
  } else {
    // first violation T(r,s) > T(r,s+1), scanning columns then rows
    size_t vs = 0, vr = 0;
    bool found = false;
    for (size_t s = 0; s + 1 < tab.cols.size() && !found; ++s)
      for (size_t r = 0; r < tab.cols[s + 1].size() && !found; ++r)
        if (tab.cols[s][r] > tab.cols[s + 1][r]) {
          vs = s;
          vr = r;
          found = true;
        }
    if (!found) throw std::logic_error("sorted filling neither semistandard nor violating");

    const std::vector<int>& a = tab.cols[vs];
    const std::vector<int>& b = tab.cols[vs + 1];
    size_t p = a.size(), r1 = vr + 1;  // exchange the first r1 entries of column vs+1
    // all increasing index tuples i_1 < ... < i_{r1} in column vs
    for (const auto& pick : detail::increasing_subsets(static_cast<int>(p), static_cast<int>(r1))) {
      Tableau next = tab;
      for (size_t m = 0; m < r1; ++m) {
        next.cols[vs][pick[m]] = b[m];
        next.cols[vs + 1][m] = a[pick[m]];
      }
      TableauVector dec = decompose(next);
      for (const auto& [idx, c] : dec) {
        Rat& slot = result[idx];
        slot += c;
        if (slot == 0) result.erase(idx);
      }
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = memo_.emplace(std::move(k), std::move(result));
  return it->second;
}

namespace detail {
std::vector<std::vector<int>> increasing_subsets(int m, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > m) return out;
  std::vector<int> cur(r);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == r) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v <= m - (r - pos); ++v) {
      cur[pos] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
  return out;
}
}  // namespace detail

Matrix<Rat> drho_matrix(int r, int s, const SemistandardBasis& basis, const Straightener& str) {
  size_t d = basis.dim();
  Matrix<Rat> out(d, d);
  for (size_t j = 0; j < d; ++j) {
    const Tableau& tab = basis.tabs[j];
    for (size_t cj = 0; cj < tab.cols.size(); ++cj)
      for (size_t ck = 0; ck < tab.cols[cj].size(); ++ck) {
        if (tab.cols[cj][ck] != s) continue;
        Tableau moved = tab;
        moved.cols[cj][ck] = r;
        for (const auto& [idx, c] : str.decompose(moved)) out(idx, j) += c;
      }
  }
  return out;
}

}  // namespace sphlas
