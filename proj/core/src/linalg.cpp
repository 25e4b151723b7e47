#include "sphlas/linalg.hpp"
#include "sphlas/polynomial.hpp"

namespace sphlas {

PsdReport psd_check(Matrix<Rat> a) {
  if (a.rows != a.cols) throw std::invalid_argument("psd_check needs a square matrix");
  PsdReport rep;
  size_t n = a.rows;
  std::vector<size_t> active(n);
  for (size_t i = 0; i < n; ++i) active[i] = i;

  struct Step {
    size_t pivot_global;
    Rat d;
    std::vector<size_t> rest_global;
    std::vector<Rat> col;  // A[rest, pivot] before elimination
  };
  std::vector<Step> steps;

  auto lift_witness = [&](std::vector<Rat> w, const std::vector<size_t>& w_idx, const Rat& value) {
    // w is indexed by w_idx (global indices); pull back through recorded steps.
    std::vector<Rat> full(n, Rat(0));
    for (size_t i = 0; i < w.size(); ++i) full[w_idx[i]] = w[i];
    for (size_t s = steps.size(); s-- > 0;) {
      const Step& st = steps[s];
      Rat dot(0);
      for (size_t i = 0; i < st.rest_global.size(); ++i) dot += st.col[i] * full[st.rest_global[i]];
      full[st.pivot_global] = -dot / st.d;
    }
    rep.is_psd = false;
    rep.witness = std::move(full);
    rep.witness_value = value;
  };

  while (!active.empty()) {
    size_t m = active.size();
    // pick a strictly positive diagonal pivot if one exists
    size_t piv = m;
    for (size_t i = 0; i < m; ++i)
      if (sgn(a(active[i], active[i])) > 0) { piv = i; break; }

    if (piv == m) {
      for (size_t i = 0; i < m; ++i) {
        if (sgn(a(active[i], active[i])) < 0) {
          std::vector<Rat> w(m, Rat(0));
          w[i] = 1;
          lift_witness(w, active, a(active[i], active[i]));
          return rep;
        }
      }
      // remaining diagonal all zero: PSD iff the whole block is zero
      for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
          const Rat& off = a(active[i], active[j]);
          if (off != 0) {
            std::vector<Rat> w(m, Rat(0));
            w[i] = 1;
            w[j] = (sgn(off) > 0) ? Rat(-1) : Rat(1);
            Rat val = a(active[i], active[i]) + a(active[j], active[j]) - 2 * abs(off);
            lift_witness(w, active, val);
            return rep;
          }
        }
      break;  // zero block, PSD
    }

    Step st;
    st.pivot_global = active[piv];
    st.d = a(st.pivot_global, st.pivot_global);
    rep.pivots.push_back(st.d);
    ++rep.rank;
    for (size_t i = 0; i < m; ++i)
      if (i != piv) st.rest_global.push_back(active[i]);
    st.col.reserve(st.rest_global.size());
    for (size_t g : st.rest_global) st.col.push_back(a(g, st.pivot_global));

    for (size_t i = 0; i < st.rest_global.size(); ++i)
      for (size_t j = 0; j < st.rest_global.size(); ++j)
        a(st.rest_global[i], st.rest_global[j]) -= st.col[i] * st.col[j] / st.d;

    active = st.rest_global;
    steps.push_back(std::move(st));
  }

  rep.is_psd = true;
  return rep;
}

std::vector<Rat> charpoly(const Matrix<Rat>& a) {
  size_t n = a.rows;
  std::vector<Rat> c(n + 1, Rat(0));
  c[n] = 1;
  Matrix<Rat> m = Matrix<Rat>::identity(n);
  for (size_t k = 1; k <= n; ++k) {
    Matrix<Rat> am = a * m;
    Rat tr(0);
    for (size_t i = 0; i < n; ++i) tr += am(i, i);
    Rat ck = -tr / Rat(static_cast<long>(k));
    c[n - k] = ck;
    m = am;
    for (size_t i = 0; i < n; ++i) m(i, i) += ck;
  }
  return c;
}

bool cholesky(const Matrix<MpFloat>& a, Matrix<MpFloat>& l) {
  size_t n = a.rows;
  l = Matrix<MpFloat>(n, n);
  for (size_t j = 0; j < n; ++j) {
    MpFloat d = a(j, j);
    for (size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0) return false;
    l(j, j) = sqrt(d);
    for (size_t i = j + 1; i < n; ++i) {
      MpFloat s = a(i, j);
      for (size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

std::vector<MpFloat> cholesky_solve(const Matrix<MpFloat>& l, const std::vector<MpFloat>& b) {
  size_t n = l.rows;
  std::vector<MpFloat> y(n);
  for (size_t i = 0; i < n; ++i) {
    MpFloat s = b[i];
    for (size_t j = 0; j < i; ++j) s -= l(i, j) * y[j];
    y[i] = s / l(i, i);
  }
  for (size_t i = n; i-- > 0;) {
    MpFloat s = y[i];
    for (size_t j = i + 1; j < n; ++j) s -= l(j, i) * y[j];
    y[i] = s / l(i, i);
  }
  return y;
}

}  // namespace sphlas
