#include "sphlas/moments.hpp"

#include "sphlas/linalg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace sphlas {

namespace {

struct PairingTable {
  unsigned k = 0;
  // each pairing: k pairs (a, b) with a < b over positions 0..2k-1
  std::vector<std::vector<std::pair<int, int>>> pairings;
  // loops[i][j]: number of cycles in the union of pairings i and j
  std::vector<std::vector<int8_t>> loops;
};

void enumerate_pairings(int m2, std::vector<int>& partner,
                        std::vector<std::vector<std::pair<int, int>>>& out) {
  int first = -1;
  for (int i = 0; i < m2; ++i)
    if (partner[i] < 0) {
      first = i;
      break;
    }
  if (first < 0) {
    std::vector<std::pair<int, int>> p;
    for (int i = 0; i < m2; ++i)
      if (partner[i] > i) p.push_back({i, partner[i]});
    out.push_back(std::move(p));
    return;
  }
  for (int j = first + 1; j < m2; ++j) {
    if (partner[j] >= 0) continue;
    partner[first] = j;
    partner[j] = first;
    enumerate_pairings(m2, partner, out);
    partner[first] = -1;
    partner[j] = -1;
  }
}

int cycle_count(const std::vector<std::pair<int, int>>& p, const std::vector<std::pair<int, int>>& q,
                int m2) {
  std::vector<int> pn(m2), qn(m2);
  for (auto [a, b] : p) {
    pn[a] = b;
    pn[b] = a;
  }
  for (auto [a, b] : q) {
    qn[a] = b;
    qn[b] = a;
  }
  std::vector<bool> seen(m2, false);
  int cycles = 0;
  for (int s = 0; s < m2; ++s) {
    if (seen[s]) continue;
    ++cycles;
    int v = s;
    bool use_p = true;
    while (!seen[v]) {
      seen[v] = true;
      v = use_p ? pn[v] : qn[v];
      use_p = !use_p;
    }
  }
  return cycles;
}

const PairingTable& pairing_table(unsigned k) {
  static std::map<unsigned, std::unique_ptr<PairingTable>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return *it->second;
  auto tab = std::make_unique<PairingTable>();
  tab->k = k;
  int m2 = static_cast<int>(2 * k);
  std::vector<int> partner(m2, -1);
  enumerate_pairings(m2, partner, tab->pairings);
  size_t np = tab->pairings.size();
  tab->loops.assign(np, std::vector<int8_t>(np, 0));
  for (size_t i = 0; i < np; ++i)
    for (size_t j = i; j < np; ++j) {
      int c = cycle_count(tab->pairings[i], tab->pairings[j], m2);
      tab->loops[i][j] = static_cast<int8_t>(c);
      tab->loops[j][i] = static_cast<int8_t>(c);
    }
  auto& ref = *tab;
  cache.emplace(k, std::move(tab));
  return ref;
}

// delta vector of a label sequence: 1 on pairings that only match equal labels
std::vector<char> delta_vector(const PairingTable& tab, const std::vector<int>& labels) {
  std::vector<char> d(tab.pairings.size(), 0);
  for (size_t i = 0; i < tab.pairings.size(); ++i) {
    bool ok = true;
    for (auto [a, b] : tab.pairings[i])
      if (labels[a] != labels[b]) {
        ok = false;
        break;
      }
    d[i] = ok ? 1 : 0;
  }
  return d;
}

// canonical key of the set partition induced by a label sequence
std::string rgs_key(const std::vector<int>& labels) {
  std::map<int, int> first;
  std::ostringstream os;
  for (int l : labels) {
    auto [it, ins] = first.emplace(l, static_cast<int>(first.size()));
    os << it->second << ".";
  }
  return os.str();
}

Matrix<Rat> gram_at(const PairingTable& tab, long n) {
  size_t np = tab.pairings.size();
  Matrix<Rat> g(np, np);
  // powers n^c for c <= k+? cycles <= k
  std::vector<Rat> pw(tab.k + 2, Rat(1));
  for (size_t c = 1; c < pw.size(); ++c) pw[c] = pw[c - 1] * Rat(n);
  for (size_t i = 0; i < np; ++i)
    for (size_t j = 0; j < np; ++j) g(i, j) = pw[tab.loops[i][j]];
  return g;
}

std::shared_ptr<LuFactor<Rat>> gram_lu(unsigned k, long n) {
  static std::map<std::pair<unsigned, long>, std::shared_ptr<LuFactor<Rat>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto lu = std::make_shared<LuFactor<Rat>>(gram_at(pairing_table(k), n));
  cache.emplace(key, lu);
  return lu;
}

// Solve G(n) y = delta symbolically by exact sampling + rational function
// reconstruction, then verify the identity at enough fresh points to prove it.
std::vector<RatFuncN> wg_solve_symbolic(unsigned k, const std::vector<int>& col_labels) {
  static std::map<std::string, std::shared_ptr<std::vector<RatFuncN>>> cache;
  static std::mutex mu;
  std::ostringstream os;
  os << k << "|" << rgs_key(col_labels);
  std::string key = os.str();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }

  const PairingTable& tab = pairing_table(k);
  auto delta = delta_vector(tab, col_labels);
  size_t np = tab.pairings.size();
  std::vector<Rat> rhs(np);
  for (size_t i = 0; i < np; ++i) rhs[i] = Rat(delta[i] ? 1 : 0);

  long base = static_cast<long>(2 * k + 1);
  std::vector<std::pair<Rat, std::vector<Rat>>> samples;  // (n, y(n))
  auto take_samples = [&](size_t want) {
    long n0 = base + static_cast<long>(samples.size());
    while (samples.size() < want) {
      auto lu = gram_lu(k, n0);
      if (!lu->singular) samples.push_back({Rat(n0), lu->solve(rhs)});
      ++n0;
    }
  };

  for (int dmax = static_cast<int>(k) + 2;; dmax *= 2) {
    if (dmax > 80) throw std::logic_error("pairing system reconstruction degree blew up");
    take_samples(static_cast<size_t>(2 * dmax + 2));
    std::vector<RatFuncN> y(np);
    bool ok = true;
    for (size_t c = 0; c < np && ok; ++c) {
      std::vector<std::pair<Rat, Rat>> pts;
      pts.reserve(samples.size());
      for (const auto& [x, v] : samples) pts.push_back({x, v[c]});
      auto rec = ratfunc_interpolate(pts, dmax, dmax);
      if (!rec) {
        ok = false;
        break;
      }
      y[c] = *rec;
    }
    if (!ok) continue;

    // degree bound of the residual numerators over lcm(denominators)
    PolyN lcm_den(1);
    int max_num = 0;
    for (const auto& f : y) {
      PolyN g = gcd(lcm_den, f.den);
      PolyN q, r;
      PolyN::divmod(f.den, g, q, r);
      lcm_den = lcm_den * q;
      max_num = std::max(max_num, f.num.degree());
    }
    int bound = static_cast<int>(k) + lcm_den.degree() + std::max(max_num, 0);

    // verify G(n) y(n) = delta at bound+1 fresh points
    long n0 = base + static_cast<long>(samples.size());
    int verified = 0;
    bool valid = true;
    while (verified <= bound && valid) {
      Rat x(n0++);
      if (lcm_den(x) == 0) continue;
      std::vector<Rat> yv(np);
      for (size_t c = 0; c < np; ++c) yv[c] = y[c].eval(x);
      std::vector<Rat> pw(tab.k + 2, Rat(1));
      for (size_t c = 1; c < pw.size(); ++c) pw[c] = pw[c - 1] * x;
      for (size_t i = 0; i < np && valid; ++i) {
        Rat acc(0);
        for (size_t j = 0; j < np; ++j) acc += pw[tab.loops[i][j]] * yv[j];
        if (acc != rhs[i]) valid = false;
      }
      ++verified;
    }
    if (!valid) continue;

    auto stored = std::make_shared<std::vector<RatFuncN>>(std::move(y));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, stored);
    return *stored;
  }
}

void expand_positions(const MonomialExponent& m, std::vector<int>& row_labels,
                      std::vector<int>& col_labels) {
  row_labels.clear();
  col_labels.clear();
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      for (unsigned c = 0; c < m.e[i][j]; ++c) {
        row_labels.push_back(static_cast<int>(i));
        col_labels.push_back(static_cast<int>(j));
      }
}

bool parity_zero(const MonomialExponent& m) {
  for (size_t i = 0; i < m.rows(); ++i) {
    unsigned s = 0;
    for (size_t j = 0; j < m.cols(); ++j) s += m.e[i][j];
    if (s % 2) return true;
  }
  for (size_t j = 0; j < m.cols(); ++j) {
    unsigned s = 0;
    for (size_t i = 0; i < m.rows(); ++i) s += m.e[i][j];
    if (s % 2) return true;
  }
  return false;
}

// columns (or rows, after transposing) carrying a nonzero exponent
std::vector<size_t> support_cols(const MonomialExponent& m) {
  std::vector<size_t> out;
  for (size_t j = 0; j < m.cols(); ++j)
    for (size_t i = 0; i < m.rows(); ++i)
      if (m.e[i][j]) {
        out.push_back(j);
        break;
      }
  return out;
}

MonomialExponent transpose(const MonomialExponent& m) {
  MonomialExponent t(m.cols(), m.rows());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) t.e[j][i] = m.e[i][j];
  return t;
}

// E[ prod_r u_r^{a_r} * prod_r w_r^{b_r} ] where u is uniform on S^{n-1} and
// w uniform on the unit sphere of the hyperplane orthogonal to u. Uses the
// projector identity <w_r w_s> ~ (delta_rs - u_r u_s)/(n-1) expanded over
// pairings, then closed-form sphere moments in u.
RatFuncN two_column_moment(std::vector<unsigned> a, std::vector<unsigned> b) {
  unsigned db = 0;
  for (unsigned x : b) db += x;
  if (db % 2) return RatFuncN();
  unsigned s = db / 2;
  if (s > 8) throw std::domain_error("two-column moment degree out of range");

  std::vector<int> rb;
  for (size_t r = 0; r < b.size(); ++r)
    for (unsigned c = 0; c < b[r]; ++c) rb.push_back(static_cast<int>(r));

  std::vector<std::vector<std::pair<int, int>>> pairings;
  std::vector<int> partner(rb.size(), -1);
  enumerate_pairings(static_cast<int>(rb.size()), partner, pairings);

  size_t nrows = a.size();
  RatFuncN total;
  std::vector<unsigned> extra(nrows, 0);
  for (const auto& pairing : pairings) {
    // expand prod_over_pairs (delta - u u) into sphere-moment terms
    std::function<void(size_t, long)> walk = [&](size_t idx, long sign) {
      if (idx == pairing.size()) {
        std::vector<unsigned> ex(nrows);
        for (size_t r = 0; r < nrows; ++r) ex[r] = a[r] + extra[r];
        RatFuncN sm = sphere_moment(ex);
        if (!sm.is_zero()) total = total + sm * rat(sign);
        return;
      }
      auto [p, q] = pairing[idx];
      int rp = rb[p], rq = rb[q];
      if (rp == rq) walk(idx + 1, sign);  // delta branch
      extra[rp] += 1;
      extra[rq] += 1;
      walk(idx + 1, -sign);  // -u_r u_s branch
      extra[rp] -= 1;
      extra[rq] -= 1;
    };
    walk(0, 1);
  }

  // conditional-sphere normalization: prod_{j=1..s} (n - 1 + 2(j-1))
  PolyN den(1);
  PolyN n = PolyN::variable();
  for (unsigned j = 1; j <= s; ++j) den = den * (n + PolyN(rat(2 * static_cast<long>(j) - 3)));
  return total / RatFuncN(den);
}

RatFuncN generic_moment(const MonomialExponent& m, const MomentOptions& opts) {
  unsigned deg = m.degree();
  if (deg > opts.degree_cap)
    throw std::domain_error("moment degree " + std::to_string(deg) +
                            " exceeds the configured cap " + std::to_string(opts.degree_cap));
  if (deg >= 10 && !opts.enable_degree_10)
    throw std::domain_error("degree-10 moments require MomentOptions::enable_degree_10");
  std::vector<int> row_labels, col_labels;
  expand_positions(m, row_labels, col_labels);
  unsigned k = deg / 2;
  if (k == 0) return RatFuncN(rat(1));

  // the value depends only on the equality patterns of the two label lists
  static std::map<std::string, RatFuncN> cache;
  static std::mutex mu;
  std::string key =
      std::to_string(k) + "|" + rgs_key(row_labels) + "|" + rgs_key(col_labels);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const PairingTable& tab = pairing_table(k);
  auto y = wg_solve_symbolic(k, col_labels);
  auto drow = delta_vector(tab, row_labels);
  RatFuncAccum acc;
  for (size_t p = 0; p < y.size(); ++p)
    if (drow[p]) acc.add(y[p]);
  RatFuncN out = acc.result();
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, out);
  return out;
}

}  // namespace

std::string MonomialExponent::key() const {
  std::ostringstream os;
  for (const auto& row : e) {
    for (unsigned x : row) os << x << ",";
    os << ";";
  }
  return os.str();
}

Int pairing_count(unsigned k) { return double_factorial_odd(k); }

RatFuncN moment_symbolic_generic(const MonomialExponent& m, const MomentOptions& opts) {
  if (parity_zero(m)) return RatFuncN();
  if (m.degree() == 0) return RatFuncN(rat(1));
  return generic_moment(m, opts);
}

RatFuncN sphere_moment(const std::vector<unsigned>& a) {
  unsigned total = 0;
  for (unsigned x : a) {
    if (x % 2) return RatFuncN();
    total += x;
  }
  Int num(1);
  for (unsigned x : a) num *= double_factorial_odd(x / 2);
  PolyN den(1);
  PolyN n = PolyN::variable();
  for (unsigned j = 0; 2 * j < total; ++j) den = den * (n + PolyN(rat(2 * static_cast<long>(j))));
  return RatFuncN(PolyN(Rat(num)), den);
}

RatFuncN moment_symbolic(const MonomialExponent& m, const MomentOptions& opts) {
  if (parity_zero(m)) return RatFuncN();
  if (m.degree() == 0) return RatFuncN(rat(1));

  MonomialExponent work = m;
  auto cols = support_cols(work);
  if (cols.size() > 2) {
    MonomialExponent tr = transpose(work);
    auto rows_as_cols = support_cols(tr);
    if (rows_as_cols.size() <= 2) {
      work = tr;
      cols = rows_as_cols;
    }
  }
  if (cols.size() <= 2) {
    std::vector<unsigned> a, b;
    for (size_t i = 0; i < work.rows(); ++i) {
      a.push_back(work.e[i][cols[0]]);
      b.push_back(cols.size() == 2 ? work.e[i][cols[1]] : 0);
    }
    // run the Wick expansion over the lighter column
    unsigned da = 0, db = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      da += a[i];
      db += b[i];
    }
    if (db > da) std::swap(a, b);
    return two_column_moment(a, b);
  }
  return generic_moment(m, opts);
}

Rat moment_fixed(const MonomialExponent& m, long n, const MomentOptions& opts) {
  if (n < static_cast<long>(m.degree()))
    throw std::domain_error("moment_fixed requires n >= monomial degree");
  if (parity_zero(m)) return Rat(0);
  if (m.degree() == 0) return Rat(1);

  auto cols = support_cols(m);
  auto rows = support_cols(transpose(m));
  if (cols.size() <= 2 || rows.size() <= 2) return moment_symbolic(m, opts).eval(rat(n));

  unsigned deg = m.degree();
  if (deg > opts.degree_cap)
    throw std::domain_error("moment degree exceeds the configured cap");
  if (deg >= 10 && !opts.enable_degree_10)
    throw std::domain_error("degree-10 moments require MomentOptions::enable_degree_10");
  unsigned k = deg / 2;
  std::vector<int> row_labels, col_labels;
  expand_positions(m, row_labels, col_labels);
  const PairingTable& tab = pairing_table(k);
  auto lu = gram_lu(k, n);
  if (lu->singular)
    throw std::domain_error("pairing system singular at n = " + std::to_string(n));
  auto delta = delta_vector(tab, col_labels);
  std::vector<Rat> rhs(delta.size());
  for (size_t i = 0; i < delta.size(); ++i) rhs[i] = Rat(delta[i] ? 1 : 0);
  auto y = lu->solve(rhs);
  auto drow = delta_vector(tab, row_labels);
  Rat acc(0);
  for (size_t p = 0; p < y.size(); ++p)
    if (drow[p]) acc += y[p];
  return acc;
}

void leading_term(const MonomialExponent& m, int& order, Rat& coeff, const MomentOptions& opts) {
  moment_symbolic(m, opts).leading(order, coeff);
}

}  // namespace sphlas
