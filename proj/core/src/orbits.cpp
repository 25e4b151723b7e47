#include "sphlas/orbits.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace sphlas {

DistanceSet::DistanceSet(std::vector<Rat> vals, bool projective_mode)
    : values(std::move(vals)), projective(projective_mode) {
    if (values.empty()) throw std::invalid_argument("DistanceSet: empty value set");
    std::sort(values.begin(), values.end());
    for (size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i] == values[i + 1]) throw std::invalid_argument("DistanceSet: duplicate value");
    for (const Rat& v : values)
        if (v < -1 || v >= 1)
            throw std::invalid_argument("DistanceSet: inner products must lie in [-1, 1)");
    if (projective) {
        for (const Rat& v : values) {
            Rat w = -v;
            if (!std::binary_search(values.begin(), values.end(), w))
                throw std::invalid_argument(
                    "DistanceSet: projective mode requires a negation-closed value set");
        }
    }
}

DistanceSet DistanceSet::equiangular(const Rat& alpha, bool with_zero, bool projective_mode) {
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("DistanceSet::equiangular: alpha must lie in (0, 1)");
    std::vector<Rat> vals{-alpha, alpha};
    if (with_zero) vals.push_back(Rat(0));
    return DistanceSet(std::move(vals), projective_mode);
}

size_t DistanceSet::index_of(const Rat& v) const {
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end() || *it != v)
        throw std::invalid_argument("DistanceSet: value not in set: " + rat_to_string(v));
    return size_t(it - values.begin());
}

std::vector<int> DistanceSet::negation_table() const {
    std::vector<int> neg(values.size(), -1);
    for (size_t i = 0; i < values.size(); ++i) {
        Rat w = -values[i];
        auto it = std::lower_bound(values.begin(), values.end(), w);
        if (it != values.end() && *it == w) neg[i] = int(it - values.begin());
    }
    return neg;
}

std::string gram_key(const Matrix<Rat>& gram) {
    std::string key = std::to_string(gram.rows) + ":";
    for (size_t i = 0; i < gram.rows; ++i)
        for (size_t j = i + 1; j < gram.cols; ++j) {
            key += rat_to_string(gram(i, j));
            key += ',';
        }
    return key;
}

CanonicalMap canonical_gram(const Matrix<Rat>& gram, bool projective) {
    const size_t k = gram.rows;
    if (gram.cols != k || !gram.is_symmetric())
        throw std::invalid_argument("canonical_gram: matrix must be symmetric");
    for (size_t i = 0; i < k; ++i)
        if (gram(i, i) != 1) throw std::invalid_argument("canonical_gram: diagonal must be all ones");

    CanonicalMap best;
    best.map.perm.resize(k);
    best.map.sign.assign(k, 1);
    std::iota(best.map.perm.begin(), best.map.perm.end(), 0);
    if (k < 2) {
        best.gram = gram;
        return best;
    }

    const size_t ue = k * (k - 1) / 2;
    std::vector<Rat> bu;
    std::vector<Rat> cu(ue);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    const unsigned smax = projective ? (1u << (k - 1)) : 1u;
    std::vector<int> bestperm, bestsign;
    do {
        for (unsigned mask = 0; mask < smax; ++mask) {
            bool smaller = bu.empty();
            bool dead = false;
            size_t pos = 0;
            for (size_t i = 0; i < k && !dead; ++i) {
                const int si = (i > 0 && ((mask >> (i - 1)) & 1u)) ? -1 : 1;
                for (size_t j = i + 1; j < k; ++j, ++pos) {
                    const int sj = (j > 0 && ((mask >> (j - 1)) & 1u)) ? -1 : 1;
                    cu[pos] = gram(size_t(perm[i]), size_t(perm[j]));
                    if (si != sj) cu[pos] = -cu[pos];
                    if (!smaller) {
                        int c = cmp(cu[pos], bu[pos]);
                        if (c > 0) {
                            dead = true;
                            break;
                        }
                        if (c < 0) smaller = true;
                    }
                }
            }
            if (!dead && smaller) {
                bu = cu;
                bestperm = perm;
                bestsign.assign(k, 1);
                for (size_t i = 1; i < k; ++i)
                    if ((mask >> (i - 1)) & 1u) bestsign[i] = -1;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    best.map.perm = bestperm;
    best.map.sign = bestsign;
    best.gram = Matrix<Rat>(k, k);
    size_t pos = 0;
    for (size_t i = 0; i < k; ++i) {
        best.gram(i, i) = 1;
        for (size_t j = i + 1; j < k; ++j, ++pos) {
            best.gram(i, j) = bu[pos];
            best.gram(j, i) = bu[pos];
        }
    }
    return best;
}

namespace {

// Symbol-level Gram matrix: entries are indices into DistanceSet::values,
// diagonal holds the sentinel -1. Value order equals index order, so
// lexicographic minimization over symbols and over values agree.
struct Sym {
    int k = 0;
    std::vector<int8_t> m;
};

const std::vector<std::vector<int8_t>>& perms_of(int k) {
    static const auto all = [] {
        std::vector<std::vector<std::vector<int8_t>>> a(7);
        for (int kk = 0; kk <= 6; ++kk) {
            std::vector<int8_t> p(static_cast<size_t>(kk));
            std::iota(p.begin(), p.end(), int8_t(0));
            do a[size_t(kk)].push_back(p);
            while (std::next_permutation(p.begin(), p.end()));
        }
        return a;
    }();
    return all[size_t(k)];
}

void canon_upper(const Sym& s, bool projective, const std::vector<int8_t>& neg,
                 std::vector<int8_t>& out) {
    const int k = s.k;
    const size_t ue = size_t(k) * size_t(k - 1) / 2;
    out.assign(ue, int8_t(127));
    if (k < 2) return;
    const auto& ps = perms_of(k);
    const unsigned smax = projective ? (1u << (k - 1)) : 1u;
    std::vector<int8_t> cur(ue);
    for (const auto& p : ps) {
        for (unsigned mask = 0; mask < smax; ++mask) {
            bool smaller = false;
            bool dead = false;
            size_t pos = 0;
            for (int i = 0; i < k && !dead; ++i) {
                const unsigned si = i > 0 ? ((mask >> (i - 1)) & 1u) : 0u;
                const size_t row = size_t(p[size_t(i)]) * size_t(k);
                for (int j = i + 1; j < k; ++j, ++pos) {
                    const unsigned sj = (mask >> (j - 1)) & 1u;
                    int8_t v = s.m[row + size_t(p[size_t(j)])];
                    if (si != sj) v = neg[size_t(v)];
                    cur[pos] = v;
                    if (!smaller) {
                        if (v > out[pos]) {
                            dead = true;
                            break;
                        }
                        if (v < out[pos]) smaller = true;
                    }
                }
            }
            if (!dead && smaller) out = cur;
        }
    }
}

Sym sym_from_upper(int k, const std::vector<int8_t>& upper) {
    Sym s{k, std::vector<int8_t>(size_t(k) * size_t(k), int8_t(-1))};
    size_t pos = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++pos) {
            s.m[size_t(i) * size_t(k) + size_t(j)] = upper[pos];
            s.m[size_t(j) * size_t(k) + size_t(i)] = upper[pos];
        }
    return s;
}

Matrix<Rat> gram_of(const Sym& s, const DistanceSet& d) {
    Matrix<Rat> g(size_t(s.k), size_t(s.k));
    for (int i = 0; i < s.k; ++i) {
        g(size_t(i), size_t(i)) = 1;
        for (int j = i + 1; j < s.k; ++j) {
            const Rat& v = d.values[size_t(s.m[size_t(i) * size_t(s.k) + size_t(j)])];
            g(size_t(i), size_t(j)) = v;
            g(size_t(j), size_t(i)) = v;
        }
    }
    return g;
}

using CanonMap = std::map<std::vector<int8_t>, Sym>;

CanonMap canonicalize_all(const std::vector<Sym>& cands, bool projective,
                          const std::vector<int8_t>& neg) {
    if (cands.empty()) return {};
    perms_of(cands.front().k);
    unsigned nt = std::thread::hardware_concurrency();
    nt = std::min(nt == 0 ? 1u : nt, 8u);
    if (cands.size() < 8192 || nt == 1) {
        CanonMap out;
        std::vector<int8_t> up;
        for (const Sym& s : cands) {
            canon_upper(s, projective, neg, up);
            out.emplace(up, sym_from_upper(s.k, up));
        }
        return out;
    }
    std::vector<CanonMap> parts(nt);
    std::vector<std::thread> pool;
    const size_t chunk = (cands.size() + nt - 1) / nt;
    for (unsigned w = 0; w < nt; ++w) {
        const size_t lo = w * chunk;
        const size_t hi = std::min(cands.size(), lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, w] {
            std::vector<int8_t> up;
            for (size_t c = lo; c < hi; ++c) {
                canon_upper(cands[c], projective, neg, up);
                parts[w].emplace(up, sym_from_upper(cands[c].k, up));
            }
        });
    }
    for (auto& t : pool) t.join();
    CanonMap out = std::move(parts[0]);
    for (unsigned w = 1; w < nt; ++w) out.merge(parts[w]);
    return out;
}

Matrix<Rat> subgram(const Matrix<Rat>& g, const std::vector<size_t>& idx) {
    Matrix<Rat> s(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b) s(a, b) = g(idx[a], idx[b]);
    return s;
}

const Embedding& embedding_of(const OrbitRep& rep, std::optional<Embedding>& local) {
    if (rep.emb) return *rep.emb;
    local = embed(rep.gram);
    return *local;
}

}  // namespace

std::vector<OrbitRep> enumerate_orbits(const DistanceSet& d, unsigned max_size,
                                       std::optional<long> n) {
    if (max_size > 6)
        throw std::invalid_argument("enumerate_orbits: max_size above desk scale (at most 6)");
    if (d.values.size() > 120) throw std::invalid_argument("enumerate_orbits: distance set too large");

    std::vector<int8_t> neg(d.values.size(), 0);
    {
        auto nt = d.negation_table();
        for (size_t i = 0; i < nt.size(); ++i) neg[i] = nt[i] < 0 ? int8_t(i) : int8_t(nt[i]);
    }

    std::vector<OrbitRep> out;
    OrbitRep empty;
    empty.projective = d.projective;
    empty.gram = Matrix<Rat>(0, 0);
    empty.key = gram_key(empty.gram);
    empty.emb = Embedding{Matrix<Rat>(0, 0), {}, Matrix<Ext>(0, 0), "Q"};
    out.push_back(std::move(empty));
    if (max_size == 0) return out;

    std::vector<Sym> level;
    {
        Sym one{1, std::vector<int8_t>(1, int8_t(-1))};
        Matrix<Rat> g = gram_of(one, d);
        PsdReport rep = psd_check(g);
        if (!n || long(rep.rank) <= *n) {
            OrbitRep r;
            r.size = 1;
            r.projective = d.projective;
            r.gram = g;
            r.key = gram_key(g);
            r.rank = rep.rank;
            r.emb = embed(g);
            out.push_back(std::move(r));
            level.push_back(std::move(one));
        }
    }

    const int nv = int(d.values.size());
    for (unsigned k = 1; k < max_size && !level.empty(); ++k) {
        std::vector<Sym> cands;
        std::vector<int> row(k, 0);
        for (const Sym& s : level) {
            std::fill(row.begin(), row.end(), 0);
            for (;;) {
                Sym c{int(k) + 1, std::vector<int8_t>(size_t(k + 1) * size_t(k + 1), int8_t(-1))};
                for (unsigned i = 0; i < k; ++i)
                    for (unsigned j = 0; j < k; ++j)
                        c.m[size_t(i) * size_t(k + 1) + j] = s.m[size_t(i) * size_t(k) + j];
                for (unsigned i = 0; i < k; ++i) {
                    c.m[size_t(i) * size_t(k + 1) + k] = int8_t(row[i]);
                    c.m[size_t(k) * size_t(k + 1) + i] = int8_t(row[i]);
                }
                cands.push_back(std::move(c));
                unsigned digit = 0;
                while (digit < k && ++row[digit] == nv) row[digit++] = 0;
                if (digit == k) break;
            }
        }

        CanonMap canon = canonicalize_all(cands, d.projective, neg);
        level.clear();
        for (auto& entry : canon) {
            Matrix<Rat> g = gram_of(entry.second, d);
            PsdReport rep = psd_check(g);
            if (!rep.is_psd) continue;
            if (n && long(rep.rank) > *n) continue;
            OrbitRep r;
            r.size = k + 1;
            r.projective = d.projective;
            r.gram = std::move(g);
            r.key = gram_key(r.gram);
            r.rank = rep.rank;
            if (r.rank == r.size && r.size <= 3) r.emb = embed(r.gram);
            out.push_back(std::move(r));
            level.push_back(std::move(entry.second));
        }
    }
    return out;
}

std::vector<size_t> orbit_counts_by_size(const std::vector<OrbitRep>& reps, unsigned max_size) {
    std::vector<size_t> counts(size_t(max_size) + 1, 0);
    for (const OrbitRep& r : reps)
        if (r.size <= max_size) ++counts[r.size];
    return counts;
}

Embedding embed(const Matrix<Rat>& gram) {
    const size_t k = gram.rows;
    if (gram.cols != k || !gram.is_symmetric())
        throw std::invalid_argument("embed: Gram matrix must be symmetric");
    Embedding e{Matrix<Rat>::identity(k), std::vector<Rat>(k), Matrix<Ext>(k, k), "Q"};
    for (size_t j = 0; j < k; ++j) {
        Rat piv = gram(j, j);
        for (size_t c = 0; c < j; ++c) piv -= e.unit_lower(j, c) * e.unit_lower(j, c) * e.pivots[c];
        if (sgn(piv) < 0)
            throw std::domain_error("embed: Gram matrix is not positive semidefinite (pivot " +
                                    std::to_string(j + 1) + " is negative)");
        if (sgn(piv) == 0) {
            for (size_t i = j + 1; i < k; ++i) {
                Rat s = gram(i, j);
                for (size_t c = 0; c < j; ++c) s -= e.unit_lower(i, c) * e.unit_lower(j, c) * e.pivots[c];
                if (sgn(s) != 0)
                    throw std::domain_error("embed: Gram matrix is not positive semidefinite (pivot " +
                                            std::to_string(j + 1) + " vanishes on a nonzero column)");
            }
            throw std::domain_error("embed: Gram matrix is singular (pivot " + std::to_string(j + 1) +
                                    " vanishes); linearly dependent point sets are not embedded");
        }
        e.pivots[j] = piv;
        for (size_t i = j + 1; i < k; ++i) {
            Rat s = gram(i, j);
            for (size_t c = 0; c < j; ++c) s -= e.unit_lower(i, c) * e.unit_lower(j, c) * e.pivots[c];
            e.unit_lower(i, j) = s / piv;
        }
    }
    std::vector<Ext> roots(k);
    std::set<Int> rads;
    for (size_t c = 0; c < k; ++c) {
        roots[c] = ext_sqrt(e.pivots[c]);
        if (roots[c].d != 1) rads.insert(roots[c].d);
    }
    for (size_t j = 0; j < k; ++j)
        for (size_t c = 0; c <= j; ++c) e.coords(c, j) = Ext(e.unit_lower(j, c)) * roots[c];
    if (!rads.empty()) {
        e.field = "Q(";
        bool first = true;
        for (const Int& r : rads) {
            if (!first) e.field += ", ";
            e.field += "sqrt(" + r.get_str() + ")";
            first = false;
        }
        e.field += ")";
    }
    return e;
}

const Embedding& ensure_embedding(OrbitRep& rep) {
    if (!rep.emb) rep.emb = embed(rep.gram);
    return *rep.emb;
}

std::vector<SignedPerm> stabilizer_perms(const OrbitRep& rep) {
    std::vector<SignedPerm> out;
    const size_t k = rep.size;
    if (k < 1) return out;
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    // in projective mode individually reversed points give the same line set,
    // so the full sign space applies (the global flip acts as -I on the span)
    const unsigned smax = rep.projective ? (1u << k) : 1u;
    std::vector<int> sign(k, 1);
    do {
        for (unsigned mask = 0; mask < smax; ++mask) {
            bool identity = mask == 0;
            for (size_t i = 0; identity && i < k; ++i)
                if (perm[i] != int(i)) identity = false;
            if (identity) continue;
            sign.assign(k, 1);
            for (size_t i = 0; i < k; ++i)
                if ((mask >> i) & 1u) sign[i] = -1;
            bool ok = true;
            for (size_t i = 0; ok && i < k; ++i)
                for (size_t j = i + 1; j < k; ++j) {
                    Rat v = rep.gram(size_t(perm[i]), size_t(perm[j]));
                    if (sign[i] != sign[j]) v = -v;
                    if (v != rep.gram(i, j)) {
                        ok = false;
                        break;
                    }
                }
            if (!ok) continue;
            SignedPerm sp;
            sp.perm = perm;
            sp.sign = sign;
            out.push_back(std::move(sp));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<StabilizerElement> stabilizer_generators(const OrbitRep& rep) {
    std::vector<StabilizerElement> out;
    const size_t k = rep.size;
    if (k < 1) return out;
    std::optional<Embedding> local;
    const Embedding& e = embedding_of(rep, local);

    Matrix<Rat> lt = e.unit_lower.transpose();
    auto lti = inverse(lt);
    if (!lti) throw std::logic_error("stabilizer_generators: triangular factor not invertible");

    for (SignedPerm& sp : stabilizer_perms(rep)) {
        Matrix<Rat> ptil(k, k);
        for (size_t a = 0; a < k; ++a) ptil(size_t(sp.perm[a]), a) = sp.sign[a];
        Matrix<Rat> m = lt * ptil * (*lti);
        Matrix<Ext> r(k, k);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j)
                if (sgn(m(i, j)) != 0)
                    r(i, j) = Ext(m(i, j) / e.pivots[j]) * ext_sqrt(e.pivots[i] * e.pivots[j]);
        StabilizerElement el;
        el.sp = std::move(sp);
        el.r = std::move(r);
        out.push_back(std::move(el));
    }
    return out;
}

TransporterBlock transporter(const OrbitRep& union_rep, const std::vector<size_t>& j1,
                             const std::vector<size_t>& j2, const std::vector<OrbitRep>& reps,
                             const OrbitIndex& idx) {
    const size_t m = union_rep.size;
    std::vector<bool> covered(m, false);
    for (const auto* js : {&j1, &j2}) {
        for (size_t a = 0; a < js->size(); ++a) {
            if ((*js)[a] >= m) throw std::invalid_argument("transporter: point index out of range");
            if (a > 0 && (*js)[a] <= (*js)[a - 1])
                throw std::invalid_argument("transporter: subsets must be strictly increasing");
            covered[(*js)[a]] = true;
        }
    }
    for (size_t i = 0; i < m; ++i)
        if (!covered[i]) throw std::invalid_argument("transporter: subsets must cover the union");

    TransporterBlock tb;
    size_t ids[2];
    SignedPerm maps[2];
    const std::vector<size_t>* sides[2] = {&j1, &j2};
    for (int s = 0; s < 2; ++s) {
        const std::vector<size_t>& js = *sides[s];
        CanonicalMap cm = canonical_gram(subgram(union_rep.gram, js), union_rep.projective);
        auto it = idx.by_key.find(gram_key(cm.gram));
        if (it == idx.by_key.end())
            throw std::runtime_error("transporter: subset Gram does not match any enumerated orbit");
        ids[s] = it->second;
        maps[s].perm.resize(js.size());
        maps[s].sign = cm.map.sign;
        for (size_t a = 0; a < js.size(); ++a) maps[s].perm[a] = int(js[size_t(cm.map.perm[a])]);
    }

    std::optional<Embedding> l1, l2;
    const Embedding& e1 = embedding_of(reps[ids[0]], l1);
    const Embedding& e2 = embedding_of(reps[ids[1]], l2);
    const size_t t1 = j1.size(), t2 = j2.size();

    Matrix<Rat> gc(t1, t2);
    for (size_t a = 0; a < t1; ++a)
        for (size_t b = 0; b < t2; ++b) {
            Rat v = union_rep.gram(size_t(maps[0].perm[a]), size_t(maps[1].perm[b]));
            if (maps[0].sign[a] * maps[1].sign[b] < 0) v = -v;
            gc(a, b) = v;
        }

    auto li1 = inverse(e1.unit_lower);
    auto li2 = inverse(e2.unit_lower);
    if (!li1 || !li2) throw std::logic_error("transporter: triangular factor not invertible");
    Matrix<Rat> mid = (*li1) * gc * li2->transpose();

    tb.block = Matrix<Ext>(t1, t2);
    for (size_t a = 0; a < t1; ++a)
        for (size_t b = 0; b < t2; ++b)
            if (sgn(mid(a, b)) != 0)
                tb.block(a, b) = Ext(mid(a, b) / (e1.pivots[a] * e2.pivots[b])) *
                                 ext_sqrt(e1.pivots[a] * e2.pivots[b]);
    tb.src_orbit = ids[0];
    tb.dst_orbit = ids[1];
    tb.src_map = std::move(maps[0]);
    tb.dst_map = std::move(maps[1]);
    return tb;
}

TransporterBlock transporter(const OrbitRep& union_rep, const std::vector<size_t>& j1,
                             const std::vector<size_t>& j2, const std::vector<OrbitRep>& reps) {
    return transporter(union_rep, j1, j2, reps, OrbitIndex::build(reps));
}

OrbitIndex OrbitIndex::build(const std::vector<OrbitRep>& reps) {
    OrbitIndex idx;
    for (size_t i = 0; i < reps.size(); ++i) idx.by_key.emplace(reps[i].key, i);
    return idx;
}

Matrix<Rat> transporter_cross_gram(const TransporterBlock& tb, const std::vector<OrbitRep>& reps) {
    std::optional<Embedding> l1, l2;
    const Embedding& e1 = embedding_of(reps[tb.src_orbit], l1);
    const Embedding& e2 = embedding_of(reps[tb.dst_orbit], l2);
    Matrix<Ext> s = e1.coords.transpose() * tb.block * e2.coords;
    Matrix<Rat> out(s.rows, s.cols);
    for (size_t i = 0; i < s.rows; ++i)
        for (size_t j = 0; j < s.cols; ++j) {
            if (s(i, j).b != 0)
                throw std::logic_error("transporter_cross_gram: contraction is not rational");
            out(i, j) = s(i, j).a;
        }
    return out;
}

std::string orbit_table_json(const DistanceSet& d, const std::vector<OrbitRep>& reps) {
    nlohmann::json doc;
    doc["mode"] = d.projective ? "projective" : "spherical";
    doc["values"] = nlohmann::json::array();
    for (const Rat& v : d.values) doc["values"].push_back(rat_to_string(v));
    doc["orbits"] = nlohmann::json::array();
    for (const OrbitRep& r : reps) {
        nlohmann::json o;
        o["size"] = r.size;
        o["key"] = r.key;
        o["rank"] = r.rank;
        auto rows = nlohmann::json::array();
        for (size_t i = 0; i < r.gram.rows; ++i) {
            auto row = nlohmann::json::array();
            for (size_t j = 0; j < r.gram.cols; ++j) row.push_back(rat_to_string(r.gram(i, j)));
            rows.push_back(std::move(row));
        }
        o["gram"] = std::move(rows);
        o["embedded"] = bool(r.emb);
        if (r.emb) {
            o["field"] = r.emb->field;
            auto piv = nlohmann::json::array();
            for (const Rat& p : r.emb->pivots) piv.push_back(rat_to_string(p));
            o["pivots"] = std::move(piv);
            auto crows = nlohmann::json::array();
            for (size_t i = 0; i < r.emb->coords.rows; ++i) {
                auto row = nlohmann::json::array();
                for (size_t j = 0; j < r.emb->coords.cols; ++j)
                    row.push_back(r.emb->coords(i, j).str());
                crows.push_back(std::move(row));
            }
            o["coords"] = std::move(crows);
        }
        doc["orbits"].push_back(std::move(o));
    }
    return doc.dump(1);
}

}  // namespace sphlas
