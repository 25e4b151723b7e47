#include "sphlas/invariants.hpp"

#include "sphlas/cache.hpp"

#include "serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace sphlas {

namespace {

using Json = nlohmann::json;
using namespace ser;

constexpr const char* kFormatVersion = "1";

std::string partition_str(const Partition& p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// Variable layouts.
//
// The raw integrand lives in the entries of the top-left 2t x 2t window of a
// Haar-distributed orthogonal matrix together with two formal point matrices
// Y1 (2t x t1) and Y2 (2t x t2) whose columns are the positioned points.
// After integrating out the window, monomials are split: the Y part is
// re-indexed to start at 0 (Y1 block first, then Y2).

struct RawVars {
    unsigned t, t1, t2;
    size_t nx() const { return size_t(2 * t) * (2 * t); }
    size_t xv(size_t r, size_t c) const { return r * (2 * t) + c; }
    // indices in the re-indexed Y space
    size_t y1v(size_t r, size_t q) const { return r * t1 + q; }
    size_t y2v(size_t r, size_t q) const { return size_t(2 * t) * t1 + r * t2 + q; }
};

// Invariant pairing variables: the two within-set Gram blocks (upper
// triangles) followed by the cross block.
struct PairVars {
    unsigned t1 = 0, t2 = 0;
    std::vector<std::pair<unsigned, unsigned>> g1pairs, g2pairs, spairs;

    PairVars() = default;
    PairVars(unsigned a, unsigned b) : t1(a), t2(b) {
        for (unsigned i = 0; i < t1; ++i)
            for (unsigned j = i; j < t1; ++j) g1pairs.emplace_back(i, j);
        for (unsigned i = 0; i < t2; ++i)
            for (unsigned j = i; j < t2; ++j) g2pairs.emplace_back(i, j);
        for (unsigned p = 0; p < t1; ++p)
            for (unsigned q = 0; q < t2; ++q) spairs.emplace_back(p, q);
    }

    size_t ng1() const { return g1pairs.size(); }
    size_t ng2() const { return g2pairs.size(); }
    size_t ns() const { return spairs.size(); }
    size_t nvars() const { return ng1() + ng2() + ns(); }
};

void monos_of_degree_rec(size_t nvars, unsigned deg, size_t pos, Mono& cur,
                         std::vector<Mono>& out) {
    if (pos == nvars) {
        if (deg == 0) out.push_back(mono_trim(cur));
        return;
    }
    for (unsigned e = 0; e <= deg; ++e) {
        cur[pos] = uint8_t(e);
        monos_of_degree_rec(nvars, deg - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

std::vector<Mono> monos_of_degree(size_t nvars, unsigned deg) {
    std::vector<Mono> out;
    if (nvars == 0) {
        if (deg == 0) out.push_back(Mono{});
        return out;
    }
    Mono cur(nvars, 0);
    monos_of_degree_rec(nvars, deg, 0, cur, out);
    return out;
}

// ---------------------------------------------------------------------------
// Rewrite of a polynomial in the Y entries into the pairing variables.
//
// The integrated pairing is invariant under the simultaneous rotation of both
// point matrices, so it is a polynomial in the pairings Y1^T Y1, Y2^T Y2 and
// Y1^T Y2. Since Y has 2t >= t1 + t2 rows there are no relations between the
// pairings in the degrees that occur, and the candidate monomials are fixed
// by bi-homogeneity: degree |lambda| in Y1 and in Y2 separately forces equal
// numbers of within-set factors on both sides. The linear system mapping
// pairing monomials to Y monomials has integer entries; we select a pivot
// subsystem once, solve every entry through it, and then verify the full
// identity exactly through evaluations at more points than the degree bound.

struct Rewrite {
    PairVars pv;
    unsigned weight = 0;
    std::vector<Mono> qmono;      // pairing monomials
    std::vector<Mono> all_rows;   // sorted Y monomials spanned by the expansions
    std::vector<std::vector<std::pair<size_t, Rat>>> expansion;  // per qmono: (row index, coeff)
    std::vector<char> row_is_pivot;
    std::vector<size_t> pivot_rows;  // indices into all_rows, one per pivot
    std::vector<size_t> pivot_cols;  // the qmono chosen for each pivot
    Matrix<Rat> inv;                 // inverse of the pivot subsystem

    size_t row_index(const Mono& m) const {
        auto it = std::lower_bound(all_rows.begin(), all_rows.end(), m);
        if (it == all_rows.end() || *it != m) return all_rows.size();
        return size_t(it - all_rows.begin());
    }
};

MPoly<Rat> pairing_form(const RawVars& rv, const PairVars& pv, size_t var) {
    MPoly<Rat> f;
    if (var < pv.ng1()) {
        auto [a, b] = pv.g1pairs[var];
        for (size_t r = 0; r < 2 * rv.t; ++r) {
            Mono m;
            m.resize(std::max(rv.y1v(r, a), rv.y1v(r, b)) + 1, 0);
            m[rv.y1v(r, a)] += 1;
            m[rv.y1v(r, b)] += 1;
            f.add_term(m, Rat(1));
        }
        return f;
    }
    var -= pv.ng1();
    if (var < pv.ng2()) {
        auto [a, b] = pv.g2pairs[var];
        for (size_t r = 0; r < 2 * rv.t; ++r) {
            Mono m;
            m.resize(std::max(rv.y2v(r, a), rv.y2v(r, b)) + 1, 0);
            m[rv.y2v(r, a)] += 1;
            m[rv.y2v(r, b)] += 1;
            f.add_term(m, Rat(1));
        }
        return f;
    }
    var -= pv.ng2();
    auto [p, q] = pv.spairs[var];
    for (size_t r = 0; r < 2 * rv.t; ++r) {
        Mono m;
        m.resize(std::max(rv.y1v(r, p), rv.y2v(r, q)) + 1, 0);
        m[rv.y1v(r, p)] += 1;
        m[rv.y2v(r, q)] += 1;
        f.add_term(m, Rat(1));
    }
    return f;
}

Rewrite build_rewrite(unsigned t, unsigned t1, unsigned t2, unsigned weight) {
    Rewrite rw;
    rw.pv = PairVars(t1, t2);
    rw.weight = weight;
    RawVars rv{t, t1, t2};
    const PairVars& pv = rw.pv;

    for (unsigned k = 0; 2 * k <= weight; ++k) {
        unsigned s = weight - 2 * k;
        auto m1s = monos_of_degree(pv.ng1(), k);
        auto m2s = monos_of_degree(pv.ng2(), k);
        auto mss = monos_of_degree(pv.ns(), s);
        for (const Mono& m1 : m1s)
            for (const Mono& m2 : m2s)
                for (const Mono& ms : mss) {
                    Mono full(pv.nvars(), 0);
                    for (size_t i = 0; i < m1.size(); ++i) full[i] = m1[i];
                    for (size_t i = 0; i < m2.size(); ++i) full[pv.ng1() + i] = m2[i];
                    for (size_t i = 0; i < ms.size(); ++i) full[pv.ng1() + pv.ng2() + i] = ms[i];
                    rw.qmono.push_back(mono_trim(full));
                }
    }

    std::vector<MPoly<Rat>> expanded(rw.qmono.size());
    std::map<Mono, std::vector<std::pair<size_t, Rat>>> by_row;
    for (size_t j = 0; j < rw.qmono.size(); ++j) {
        MPoly<Rat> prod(1);
        const Mono& qm = rw.qmono[j];
        for (size_t v = 0; v < qm.size(); ++v)
            for (unsigned e = 0; e < qm[v]; ++e) prod = prod * pairing_form(rv, pv, v);
        for (const auto& [m, c] : prod.terms) by_row[m].emplace_back(j, c);
        expanded[j] = std::move(prod);
    }
    for (const auto& [m, cols] : by_row) rw.all_rows.push_back(m);
    rw.expansion.resize(rw.qmono.size());
    for (size_t j = 0; j < rw.qmono.size(); ++j)
        for (const auto& [m, c] : expanded[j].terms)
            rw.expansion[j].emplace_back(rw.row_index(m), c);

    // Select a pivot subsystem greedily over rows in their natural order.
    const size_t m = rw.qmono.size();
    rw.row_is_pivot.assign(rw.all_rows.size(), 0);
    std::vector<std::vector<Rat>> ech;
    std::vector<size_t> echpiv;
    for (size_t ridx = 0; ridx < rw.all_rows.size() && ech.size() < m; ++ridx) {
        const auto& cols = by_row.at(rw.all_rows[ridx]);
        std::vector<Rat> v(m, Rat(0));
        for (const auto& [j, c] : cols) v[j] = c;
        for (size_t i = 0; i < ech.size(); ++i) {
            if (v[echpiv[i]] == 0) continue;
            Rat f = v[echpiv[i]];
            for (size_t j = 0; j < m; ++j) v[j] -= f * ech[i][j];
        }
        size_t p = 0;
        while (p < m && v[p] == 0) ++p;
        if (p == m) continue;
        Rat scale = 1 / v[p];
        for (size_t j = 0; j < m; ++j) v[j] *= scale;
        ech.push_back(std::move(v));
        echpiv.push_back(p);
        rw.pivot_rows.push_back(ridx);
        rw.row_is_pivot[ridx] = 1;
    }
    rw.pivot_cols = echpiv;

    const size_t r = rw.pivot_rows.size();
    Matrix<Rat> a(r, r);
    for (size_t i = 0; i < r; ++i) {
        const auto& cols = by_row.at(rw.all_rows[rw.pivot_rows[i]]);
        for (size_t j = 0; j < r; ++j)
            for (const auto& [col, c] : cols)
                if (col == rw.pivot_cols[j]) a(i, j) = c;
    }
    auto ainv = inverse(a);
    if (!ainv) throw std::logic_error("pairing rewrite: pivot subsystem is singular");
    rw.inv = std::move(*ainv);
    return rw;
}

PolyN poly_lcm(const PolyN& a, const PolyN& b) {
    if (a.is_zero() || b.is_zero()) return PolyN();
    PolyN g = gcd(a, b);
    PolyN q, r;
    PolyN::divmod(a * b, g, q, r);
    return q.monic();
}

// Check sum_j expansion_j * q_j == P exactly. Pivot rows match by
// construction (the solve is exact rational arithmetic), so only the
// remaining rows need proof: every residual shares the common denominator L,
// and residual * L is a polynomial of degree at most deg L + max numerator
// degree, so agreement on more points than that bound forces identity.
void verify_rewrite(const Rewrite& rw, const std::map<Mono, RatFuncN>& p,
                    const std::vector<RatFuncN>& q) {
    PolyN lcm(1);
    int maxnum = 0;
    for (const RatFuncN& f : q) {
        if (f.is_zero()) continue;
        lcm = poly_lcm(lcm, f.den);
        maxnum = std::max(maxnum, f.num.degree());
    }
    for (const auto& [m, f] : p) {
        if (f.is_zero()) continue;
        lcm = poly_lcm(lcm, f.den);
        maxnum = std::max(maxnum, f.num.degree());
    }
    const int points_needed = lcm.degree() + maxnum + 1;
    const size_t nrows = rw.all_rows.size();

    std::vector<const RatFuncN*> rhs(nrows, nullptr);
    for (const auto& [m, f] : p) {
        size_t idx = rw.row_index(m);
        if (idx < nrows) rhs[idx] = &f;
    }

    std::vector<Rat> acc(nrows);
    long n = 2;
    for (int done = 0; done < points_needed; ++n) {
        Rat nr(n);
        if (lcm(nr) == 0) continue;
        ++done;
        std::fill(acc.begin(), acc.end(), Rat(0));
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i].is_zero()) continue;
            Rat qval = q[i].eval(nr);
            for (const auto& [ridx, c] : rw.expansion[rw.pivot_cols[i]])
                acc[ridx] += c * qval;
        }
        for (size_t idx = 0; idx < nrows; ++idx) {
            if (rw.row_is_pivot[idx]) continue;
            Rat want(0);
            if (rhs[idx]) want = rhs[idx]->eval(nr);
            if (acc[idx] != want)
                throw std::logic_error(
                    "pairing rewrite fails to reproduce the integrand exactly");
        }
    }
}

MPoly<RatFuncN> rewrite_to_pairings(const Rewrite& rw, const std::map<Mono, RatFuncN>& p) {
    for (const auto& [m, f] : p)
        if (!f.is_zero() && rw.row_index(m) == rw.all_rows.size())
            throw std::logic_error("integrand contains a monomial outside the pairing span");

    const size_t r = rw.pivot_rows.size();
    std::vector<const RatFuncN*> rhs(r, nullptr);
    PolyN den(1);
    for (size_t i = 0; i < r; ++i) {
        auto it = p.find(rw.all_rows[rw.pivot_rows[i]]);
        if (it == p.end() || it->second.is_zero()) continue;
        rhs[i] = &it->second;
        den = poly_lcm(den, it->second.den);
    }
    // numerators over the common denominator, then one exact solve pass
    std::vector<PolyN> scaled(r);
    for (size_t i = 0; i < r; ++i) {
        if (!rhs[i]) continue;
        PolyN f, rem;
        PolyN::divmod(den, rhs[i]->den, f, rem);
        scaled[i] = rhs[i]->num * f;
    }
    std::vector<RatFuncN> q(r);
    for (size_t i = 0; i < r; ++i) {
        PolyN acc;
        for (size_t j = 0; j < r; ++j) {
            if (scaled[j].is_zero() || rw.inv(i, j) == 0) continue;
            acc = acc + scaled[j] * rw.inv(i, j);
        }
        if (!acc.is_zero()) q[i] = RatFuncN(acc, den);
    }
    verify_rewrite(rw, p, q);
    MPoly<RatFuncN> out;
    for (size_t i = 0; i < r; ++i)
        if (!q[i].is_zero()) out.add_term(rw.qmono[rw.pivot_cols[i]], q[i]);
    return out;
}

// ---------------------------------------------------------------------------
// The symbolic integration.

// One column entry of a Weyl-module image, grouped by the window part of each
// monomial; masks carry the parity of each window row and column sum for fast
// pairing rejection (an odd row or column integrates to zero).
struct XGroup {
    Mono xm;
    uint32_t rowmask = 0, colmask = 0;
    std::vector<std::pair<Mono, GaussRat>> yp;
};
using GroupedEntry = std::vector<XGroup>;

GroupedEntry group_by_window(const MPoly<GaussRat>& poly, const RawVars& rv) {
    std::map<Mono, std::vector<std::pair<Mono, GaussRat>>> groups;
    Mono xm, ym;
    for (const auto& [m, c] : poly.terms) {
        mono_split(m, rv.nx(), xm, ym);
        groups[xm].emplace_back(ym, c);
    }
    GroupedEntry out;
    out.reserve(groups.size());
    for (auto& [m, yp] : groups) {
        XGroup g;
        g.xm = m;
        for (size_t i = 0; i < g.xm.size(); ++i) {
            if (g.xm[i] % 2 == 0) continue;
            g.rowmask ^= 1u << (i / (2 * rv.t));
            g.colmask ^= 1u << (i % (2 * rv.t));
        }
        g.yp = std::move(yp);
        out.push_back(std::move(g));
    }
    return out;
}

struct MomentRegistry {
    unsigned window;
    MomentOptions opts;
    std::mutex mu;
    std::map<Mono, uint32_t> ids;
    std::vector<RatFuncN> vals;

    // id plus a zero flag so the hot accumulation loop never touches vals
    std::pair<uint32_t, bool> get(const Mono& xm) {
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = ids.find(xm);
            if (it != ids.end()) return {it->second, vals[it->second].is_zero()};
        }
        MonomialExponent me(window, window);
        for (size_t i = 0; i < xm.size(); ++i)
            me.e[i / window][i % window] = xm[i];
        RatFuncN v = moment_symbolic(me, opts);
        std::lock_guard<std::mutex> lock(mu);
        auto it = ids.find(xm);
        if (it == ids.end()) {
            it = ids.emplace(xm, uint32_t(vals.size())).first;
            vals.push_back(std::move(v));
        }
        return {it->second, vals[it->second].is_zero()};
    }

    std::vector<RatFuncN> snapshot(const std::vector<uint32_t>& wanted) {
        std::lock_guard<std::mutex> lock(mu);
        std::vector<RatFuncN> out;
        out.reserve(wanted.size());
        for (uint32_t id : wanted) out.push_back(vals[id]);
        return out;
    }
};

// Integrate the window variables out of the pairing of two grouped column
// entries. The result is a polynomial in the Y variables with coefficients
// rational in n; every imaginary part must cancel here and a surviving one
// throws immediately.
std::map<Mono, RatFuncN> integrate_pair(const GroupedEntry* col1, const GroupedEntry* col2,
                                        size_t d, MomentRegistry& mom) {
    std::map<Mono, std::map<uint32_t, GaussRat>> acc;
    for (size_t tt = 0; tt < d; ++tt) {
        const GroupedEntry& g1 = col1[tt];
        const GroupedEntry& g2 = col2[tt];
        if (g1.empty() || g2.empty()) continue;
        std::map<std::pair<uint32_t, uint32_t>, std::vector<size_t>> buckets;
        for (size_t i = 0; i < g2.size(); ++i)
            buckets[{g2[i].rowmask, g2[i].colmask}].push_back(i);
        for (const XGroup& x1 : g1) {
            auto bit = buckets.find({x1.rowmask, x1.colmask});
            if (bit == buckets.end()) continue;
            for (size_t i2 : bit->second) {
                const XGroup& x2 = g2[i2];
                auto [id, zero] = mom.get(mono_mul(x1.xm, x2.xm));
                if (zero) continue;
                for (const auto& [m1, c1] : x1.yp)
                    for (const auto& [m2, c2] : x2.yp) {
                        GaussRat& slot = acc[mono_mul(m1, m2)][id];
                        slot = slot + c1 * c2;
                    }
            }
        }
    }
    std::vector<uint32_t> wanted;
    for (const auto& [ym, parts] : acc)
        for (const auto& [id, g] : parts) wanted.push_back(id);
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    std::vector<RatFuncN> vals = mom.snapshot(wanted);
    auto val_of = [&](uint32_t id) -> const RatFuncN& {
        size_t k = std::lower_bound(wanted.begin(), wanted.end(), id) - wanted.begin();
        return vals[k];
    };
    std::map<Mono, RatFuncN> out;
    for (const auto& [ym, parts] : acc) {
        RatFuncAccum re, im;
        for (const auto& [id, g] : parts) {
            const RatFuncN& m = val_of(id);
            if (g.re != 0) re.add(m, g.re);
            if (g.im != 0) im.add(m, g.im);
        }
        if (!im.is_zero())
            throw std::logic_error("imaginary part fails to cancel in the zonal integrand");
        if (!re.is_zero()) {
            RatFuncN v = re.result();
            if (!v.is_zero()) out.emplace(ym, std::move(v));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The pairing-form inner-product matrix: entry (a, b) is the integrated
// pairing of the images of basis tableau a (entries <= t1) and basis tableau
// b (entries <= t2), expressed in the pairing variables. Independent of any
// concrete orbit, so cached per (t, lambda, t1, t2).

struct PairingMatrix {
    unsigned t = 0, t1 = 0, t2 = 0;
    Partition lambda;
    std::vector<std::vector<MPoly<RatFuncN>>> entries;  // dim(t1) x dim(t2)
};

std::string pairing_key(unsigned t, const Partition& lam, unsigned t1, unsigned t2) {
    return std::string("pairing|v") + kFormatVersion + "|t=" + std::to_string(t) +
           "|lambda=" + partition_str(lam) + "|t1=" + std::to_string(t1) +
           "|t2=" + std::to_string(t2);
}

std::mutex g_pairing_mu;
std::map<std::string, std::shared_ptr<const PairingMatrix>> g_pairing_memo;

unsigned effective_threads(const ZonalOptions& opt, size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned n = opt.threads ? opt.threads : std::min(hw ? hw : 1u, 8u);
    return unsigned(std::min<size_t>(n, jobs ? jobs : 1));
}

PairingMatrix compute_pairing_fresh(unsigned t, const Partition& lam, unsigned t1, unsigned t2,
                                    const ZonalOptions& opt) {
    PairingMatrix pm;
    pm.t = t;
    pm.t1 = t1;
    pm.t2 = t2;
    pm.lambda = lam;

    SemistandardBasis b1 = enumerate_ssyt(lam, t1);
    SemistandardBasis b2 = enumerate_ssyt(lam, t2);
    const size_t d1 = b1.dim(), d2 = b2.dim();
    pm.entries.assign(d1, std::vector<MPoly<RatFuncN>>(d2));
    if (d1 == 0 || d2 == 0) return pm;

    if (partition_weight(lam) == 0) {
        pm.entries[0][0] = MPoly<RatFuncN>(RatFuncN(1));
        return pm;
    }

    RawVars rv{t, t1, t2};
    SemistandardBasis bt = enumerate_ssyt(lam, t);
    Straightener st(bt);
    const size_t d = bt.dim();

    // conjugated image for the left factor, plain for the right
    Matrix<MPoly<GaussRat>> a1(t, t1), a2(t, t2);
    for (unsigned p = 0; p < t; ++p)
        for (unsigned c = 0; c < 2 * t; ++c) {
            Mono top = mono_var(rv.xv(p, c));
            Mono bot = mono_var(rv.xv(t + p, c));
            for (unsigned q = 0; q < t1; ++q) {
                Mono yv = mono_var(rv.nx() + rv.y1v(c, q));
                a1(p, q).add_term(mono_mul(top, yv), GaussRat(rat(1)));
                a1(p, q).add_term(mono_mul(bot, yv), GaussRat(rat(0), rat(-1)));
            }
            for (unsigned q = 0; q < t2; ++q) {
                Mono yv = mono_var(rv.nx() + rv.y2v(c, q));
                a2(p, q).add_term(mono_mul(top, yv), GaussRat(rat(1)));
                a2(p, q).add_term(mono_mul(bot, yv), GaussRat(rat(0), rat(1)));
            }
        }

    Matrix<MPoly<GaussRat>> r1 = rho_matrix(a1, b1, st);
    Matrix<MPoly<GaussRat>> r2 = rho_matrix(a2, b2, st);

    std::vector<std::vector<GroupedEntry>> g1(d1, std::vector<GroupedEntry>(d));
    std::vector<std::vector<GroupedEntry>> g2(d2, std::vector<GroupedEntry>(d));
    for (size_t a = 0; a < d1; ++a)
        for (size_t tt = 0; tt < d; ++tt) g1[a][tt] = group_by_window(r1(tt, a), rv);
    for (size_t b = 0; b < d2; ++b)
        for (size_t tt = 0; tt < d; ++tt) g2[b][tt] = group_by_window(r2(tt, b), rv);

    Rewrite rw = build_rewrite(t, t1, t2, partition_weight(lam));
    MomentRegistry mom;
    mom.window = 2 * t;
    mom.opts = opt.moments;

    std::vector<std::pair<size_t, size_t>> jobs;
    for (size_t a = 0; a < d1; ++a)
        for (size_t b = 0; b < d2; ++b) jobs.emplace_back(a, b);

    std::atomic<size_t> next{0};
    std::mutex errmu;
    std::exception_ptr error;
    auto worker = [&]() {
        try {
            while (true) {
                size_t j = next.fetch_add(1);
                if (j >= jobs.size()) break;
                auto [a, b] = jobs[j];
                auto p = integrate_pair(g1[a].data(), g2[b].data(), d, mom);
                pm.entries[a][b] = rewrite_to_pairings(rw, p);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(errmu);
            if (!error) error = std::current_exception();
        }
    };
    unsigned nthreads = effective_threads(opt, jobs.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return pm;
}

// Swapping the two point sets conjugates the integrand, and the result is
// real, so the transposed pairing matrix is the original with the two Gram
// blocks exchanged and the cross block transposed.
MPoly<RatFuncN> swap_pairing_vars(const MPoly<RatFuncN>& p, const PairVars& from) {
    PairVars to(from.t2, from.t1);
    MPoly<RatFuncN> out;
    for (const auto& [m, c] : p.terms) {
        Mono nm(to.nvars(), 0);
        for (size_t v = 0; v < m.size(); ++v) {
            if (m[v] == 0) continue;
            size_t w;
            if (v < from.ng1()) {
                w = to.ng1() + v;  // first set's pairs become the second set's
            } else if (v < from.ng1() + from.ng2()) {
                w = v - from.ng1();
            } else {
                auto [pp, qq] = from.spairs[v - from.ng1() - from.ng2()];
                w = to.ng1() + to.ng2() + size_t(qq) * to.t2 + pp;
            }
            nm[w] += m[v];
        }
        out.add_term(nm, c);
    }
    return out;
}

PairingMatrix transpose_pairing(const PairingMatrix& pm) {
    PairingMatrix out;
    out.t = pm.t;
    out.t1 = pm.t2;
    out.t2 = pm.t1;
    out.lambda = pm.lambda;
    const size_t d1 = pm.entries.size();
    const size_t d2 = d1 ? pm.entries[0].size() : 0;
    PairVars from(pm.t1, pm.t2);
    out.entries.assign(d2, std::vector<MPoly<RatFuncN>>(d1));
    for (size_t a = 0; a < d1; ++a)
        for (size_t b = 0; b < d2; ++b) out.entries[b][a] = swap_pairing_vars(pm.entries[a][b], from);
    return out;
}

std::string pairing_to_json(const PairingMatrix& pm, const std::string& key) {
    Json doc;
    doc["format"] = std::string("sphlas-cache-v") + kFormatVersion;
    doc["kind"] = "pairing";
    doc["key"] = key;
    doc["level"] = pm.t;
    doc["lambda"] = partition_to_json(pm.lambda);
    doc["t1"] = pm.t1;
    doc["t2"] = pm.t2;
    doc["entries"] = entries_to_json(pm.entries);
    return doc.dump();
}

PairingMatrix pairing_from_json(const std::string& s) {
    Json doc = Json::parse(s);
    PairingMatrix pm;
    pm.t = doc.at("level").get<unsigned>();
    pm.lambda = partition_from_json(doc.at("lambda"));
    pm.t1 = doc.at("t1").get<unsigned>();
    pm.t2 = doc.at("t2").get<unsigned>();
    pm.entries = entries_from_json(doc.at("entries"));
    return pm;
}

std::shared_ptr<const PairingMatrix> pairing_matrix(unsigned t, const Partition& lam, unsigned t1,
                                                    unsigned t2, const ZonalOptions& opt) {
    const std::string key = pairing_key(t, lam, t1, t2);
    DiskCache cache{opt.cache_dir};
    {
        std::lock_guard<std::mutex> lock(g_pairing_mu);
        auto it = g_pairing_memo.find(key);
        if (it != g_pairing_memo.end()) {
            if (cache.enabled() && !cache.contains("pairing", key))
                cache.store("pairing", key, pairing_to_json(*it->second, key));
            return it->second;
        }
    }
    if (auto doc = cache.load("pairing", key)) {
        auto pm = std::make_shared<PairingMatrix>(pairing_from_json(*doc));
        std::lock_guard<std::mutex> lock(g_pairing_mu);
        return g_pairing_memo.emplace(key, pm).first->second;
    }

    std::shared_ptr<const PairingMatrix> result;
    if (opt.derive_transposed && t1 != t2) {
        const std::string swapped = pairing_key(t, lam, t2, t1);
        std::shared_ptr<const PairingMatrix> other;
        {
            std::lock_guard<std::mutex> lock(g_pairing_mu);
            auto it = g_pairing_memo.find(swapped);
            if (it != g_pairing_memo.end()) other = it->second;
        }
        if (!other) {
            if (auto doc = cache.load("pairing", swapped))
                other = std::make_shared<PairingMatrix>(pairing_from_json(*doc));
        }
        if (other) result = std::make_shared<PairingMatrix>(transpose_pairing(*other));
    }
    if (!result)
        result = std::make_shared<PairingMatrix>(compute_pairing_fresh(t, lam, t1, t2, opt));

    cache.store("pairing", key, pairing_to_json(*result, key));
    std::lock_guard<std::mutex> lock(g_pairing_mu);
    return g_pairing_memo.emplace(key, result).first->second;
}

// Specialize the within-set pairing variables to the two orbit Grams,
// leaving a polynomial over the cross variables S alone (index p * t2 + q).
MPoly<RatFuncN> substitute_grams(const MPoly<RatFuncN>& p, const PairVars& pv,
                                 const Matrix<Rat>& gram1, const Matrix<Rat>& gram2) {
    MPoly<RatFuncN> out;
    for (const auto& [m, c] : p.terms) {
        Rat scale(1);
        Mono sm(pv.ns(), 0);
        for (size_t v = 0; v < m.size(); ++v) {
            if (m[v] == 0) continue;
            if (v < pv.ng1()) {
                auto [a, b] = pv.g1pairs[v];
                for (unsigned e = 0; e < m[v]; ++e) scale *= gram1(a, b);
            } else if (v < pv.ng1() + pv.ng2()) {
                auto [a, b] = pv.g2pairs[v - pv.ng1()];
                for (unsigned e = 0; e < m[v]; ++e) scale *= gram2(a, b);
            } else {
                sm[v - pv.ng1() - pv.ng2()] += m[v];
            }
        }
        if (scale == 0) continue;
        out.add_term(sm, c * scale);
    }
    return out;
}

std::string zonal_key(const Partition& lam, unsigned t, const OrbitRep& rep1,
                      const OrbitRep& rep2) {
    return std::string("zonal|v") + kFormatVersion + "|t=" + std::to_string(t) +
           "|lambda=" + partition_str(lam) + "|proj=" + (rep1.projective ? "1" : "0") +
           "|k1=" + rep1.key + "|k2=" + rep2.key;
}

}  // namespace

InvariantBasis invariant_basis(const Partition& lambda, const OrbitRep& rep) {
    if (!partition_valid(lambda)) throw std::invalid_argument("invalid partition");
    InvariantBasis out;
    out.lambda = lambda;
    out.orbit_key = rep.key;
    out.orbit_size = rep.size;

    SemistandardBasis basis = enumerate_ssyt(lambda, unsigned(rep.size));
    const size_t d = basis.dim();
    if (d == 0) return out;

    if (partition_weight(lambda) == 0) {
        out.vectors.push_back({Rat(1)});
        return out;
    }

    auto perms = stabilizer_perms(rep);
    if (perms.empty()) {
        for (size_t i = 0; i < d; ++i) {
            std::vector<Rat> v(d, Rat(0));
            v[i] = 1;
            out.vectors.push_back(std::move(v));
        }
        return out;
    }

    Straightener st(basis);
    Matrix<Rat> stack(perms.size() * d, d);
    for (size_t g = 0; g < perms.size(); ++g) {
        Matrix<Rat> p(rep.size, rep.size);
        for (size_t a = 0; a < rep.size; ++a)
            p(size_t(perms[g].perm[a]), a) = Rat(perms[g].sign[a]);
        Matrix<Rat> rp = rho_matrix(p, basis, st);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                stack(g * d + i, j) = rp(i, j) - (i == j ? Rat(1) : Rat(0));
    }
    out.vectors = nullspace(std::move(stack));
    return out;
}

ZonalBlock zonal_block(const Partition& lambda, const OrbitRep& rep1, const OrbitRep& rep2,
                       const InvariantBasis& basis1, const InvariantBasis& basis2, unsigned t,
                       const ZonalOptions& opt) {
    if (!partition_valid(lambda)) throw std::invalid_argument("invalid partition");
    if (rep1.size > t || rep2.size > t)
        throw std::invalid_argument("orbit larger than the level");
    if (rep1.projective != rep2.projective)
        throw std::invalid_argument("orbits from different modes");
    if (basis1.lambda != lambda || basis2.lambda != lambda)
        throw std::invalid_argument("invariant basis for a different partition");
    if (basis1.orbit_key != rep1.key || basis2.orbit_key != rep2.key)
        throw std::invalid_argument("invariant basis for a different orbit");

    ZonalBlock blk;
    blk.lambda = lambda;
    blk.level = t;
    blk.key1 = rep1.key;
    blk.key2 = rep2.key;
    blk.size1 = rep1.size;
    blk.size2 = rep2.size;
    const size_t d1 = basis1.dim(), d2 = basis2.dim();
    blk.entries.assign(d1, std::vector<MPoly<RatFuncN>>(d2));
    if (d1 == 0 || d2 == 0) return blk;

    const std::string key = zonal_key(lambda, t, rep1, rep2);
    DiskCache cache{opt.cache_dir};
    if (auto doc = cache.load("zonal", key)) {
        ZonalBlock cached = zonal_block_from_json(*doc);
        if (cached.lambda == lambda && cached.level == t && cached.key1 == rep1.key &&
            cached.key2 == rep2.key && cached.dim1() == d1 && cached.dim2() == d2)
            return cached;
    }

    auto pm = pairing_matrix(t, lambda, unsigned(rep1.size), unsigned(rep2.size), opt);
    PairVars pv(unsigned(rep1.size), unsigned(rep2.size));

    const size_t w1 = pm->entries.size();
    const size_t w2 = w1 ? pm->entries[0].size() : 0;
    std::vector<std::vector<MPoly<RatFuncN>>> sub(w1, std::vector<MPoly<RatFuncN>>(w2));
    for (size_t a = 0; a < w1; ++a)
        for (size_t b = 0; b < w2; ++b)
            sub[a][b] = substitute_grams(pm->entries[a][b], pv, rep1.gram, rep2.gram);

    const unsigned w = partition_weight(lambda);
    for (size_t j1 = 0; j1 < d1; ++j1)
        for (size_t j2 = 0; j2 < d2; ++j2) {
            MPoly<RatFuncN> acc;
            for (size_t a = 0; a < w1; ++a) {
                if (basis1.vectors[j1][a] == 0) continue;
                for (size_t b = 0; b < w2; ++b) {
                    if (basis2.vectors[j2][b] == 0) continue;
                    Rat u = basis1.vectors[j1][a] * basis2.vectors[j2][b];
                    acc = acc + sub[a][b] * RatFuncN(u);
                }
            }
            for (const auto& [m, c] : acc.terms) {
                unsigned deg = mono_degree(m);
                if (deg > w || (w - deg) % 2 != 0)
                    throw std::logic_error("zonal entry violates the degree invariant");
            }
            blk.entries[j1][j2] = std::move(acc);
        }

    cache.store("zonal", key, zonal_block_to_json(blk, key, opt.context, rep1.gram, rep2.gram));
    return blk;
}

Matrix<RatFuncN> zonal_eval(const ZonalBlock& blk, const Matrix<Rat>& cross) {
    if (cross.rows != blk.size1 || cross.cols != blk.size2)
        throw std::invalid_argument("cross Gram has the wrong shape for this block");
    Matrix<RatFuncN> out(blk.dim1(), blk.dim2());
    for (size_t i = 0; i < blk.dim1(); ++i)
        for (size_t j = 0; j < blk.dim2(); ++j) {
            RatFuncAccum acc;
            for (const auto& [m, c] : blk.entries[i][j].terms) {
                Rat v(1);
                for (size_t s = 0; s < m.size(); ++s)
                    for (unsigned e = 0; e < m[s]; ++e) v *= cross(s / blk.size2, s % blk.size2);
                if (v != 0) acc.add(c, v);
            }
            out(i, j) = acc.result();
        }
    return out;
}

Matrix<Rat> zonal_eval(const ZonalBlock& blk, const Matrix<Rat>& cross, const Rat& n) {
    if (n.get_den() != 1 || n < Rat(long(2 * blk.level)))
        throw std::domain_error("ambient dimension below the validity threshold of the block");
    Matrix<RatFuncN> sym = zonal_eval(blk, cross);
    Matrix<Rat> out(sym.rows, sym.cols);
    for (size_t i = 0; i < sym.rows; ++i)
        for (size_t j = 0; j < sym.cols; ++j) out(i, j) = sym(i, j).eval(n);
    return out;
}

std::vector<Partition> zonal_lambda_list(unsigned t, unsigned d, bool projective) {
    std::vector<Partition> out;
    for (const Partition& p : partitions_up_to(d, t))
        if (!projective || partition_weight(p) % 2 == 0) out.push_back(p);
    return out;
}

std::string zonal_block_to_json(const ZonalBlock& blk, const std::string& key,
                                const std::string& context, const Matrix<Rat>& gram1,
                                const Matrix<Rat>& gram2) {
    Json doc;
    doc["format"] = std::string("sphlas-cache-v") + kFormatVersion;
    doc["kind"] = "zonal";
    doc["key"] = key;
    doc["level"] = blk.level;
    doc["lambda"] = partition_to_json(blk.lambda);
    doc["key1"] = blk.key1;
    doc["key2"] = blk.key2;
    doc["size1"] = blk.size1;
    doc["size2"] = blk.size2;
    doc["gram1"] = rat_matrix_to_json(gram1);
    doc["gram2"] = rat_matrix_to_json(gram2);
    if (!context.empty()) doc["context"] = context;
    doc["entries"] = entries_to_json(blk.entries);
    return doc.dump();
}

ZonalBlock zonal_block_from_json(const std::string& s) {
    Json doc = Json::parse(s);
    if (doc.at("kind").get<std::string>() != "zonal")
        throw std::invalid_argument("not a zonal block document");
    ZonalBlock blk;
    blk.level = doc.at("level").get<unsigned>();
    blk.lambda = partition_from_json(doc.at("lambda"));
    blk.key1 = doc.at("key1").get<std::string>();
    blk.key2 = doc.at("key2").get<std::string>();
    blk.size1 = doc.at("size1").get<size_t>();
    blk.size2 = doc.at("size2").get<size_t>();
    blk.entries = entries_from_json(doc.at("entries"));
    return blk;
}

}  // namespace sphlas
