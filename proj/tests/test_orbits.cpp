#include <random>

#include "doctest.h"
#include "json.hpp"
#include "sphlas/orbits.hpp"
#include "support/brute_orbits.hpp"
#include "support/edge_colorings.hpp"

using namespace sphlas;

namespace {

Matrix<Rat> gram_from(const std::vector<std::vector<long>>& num, long den) {
    Matrix<Rat> g(num.size(), num.size());
    for (size_t i = 0; i < num.size(); ++i)
        for (size_t j = 0; j < num.size(); ++j) g(i, j) = i == j ? Rat(1) : rat(num[i][j], den);
    return g;
}

template <class F>
bool throws_domain_error_containing(F&& fn, const std::string& needle) {
    try {
        fn();
    } catch (const std::domain_error& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

Matrix<Rat> apply_signed_perm(const Matrix<Rat>& g, const std::vector<int>& perm,
                              const std::vector<int>& sign) {
    const size_t k = g.rows;
    Matrix<Rat> h(k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            Rat v = g(size_t(perm[i]), size_t(perm[j]));
            if (sign[i] * sign[j] < 0) v = -v;
            h(i, j) = v;
        }
    return h;
}

}  // namespace

TEST_CASE("distance set validation") {
    CHECK_THROWS_AS(DistanceSet({rat(1, 3), rat(1, 3)}, false), std::invalid_argument);
    CHECK_THROWS_AS(DistanceSet({Rat(1)}, false), std::invalid_argument);
    CHECK_THROWS_AS(DistanceSet({rat(-3, 2)}, false), std::invalid_argument);
    CHECK_THROWS_AS(DistanceSet({rat(1, 3)}, true), std::invalid_argument);
    CHECK_NOTHROW(DistanceSet({rat(1, 3)}, false));
    CHECK_NOTHROW(DistanceSet({rat(-1, 3), Rat(0), rat(1, 3)}, true));

    DistanceSet d = DistanceSet::equiangular(rat(1, 7), true, true);
    REQUIRE(d.values.size() == 3);
    CHECK(d.values[0] == rat(-1, 7));
    CHECK(d.values[1] == 0);
    CHECK(d.values[2] == rat(1, 7));
    CHECK(d.index_of(rat(1, 7)) == 2);
    CHECK_THROWS_AS(d.index_of(rat(1, 5)), std::invalid_argument);
    auto neg = d.negation_table();
    CHECK(neg == std::vector<int>{2, 1, 0});
}

TEST_CASE("canonical form is a class function and idempotent") {
    std::mt19937 rng(2024);
    std::vector<Rat> vals{rat(-1, 3), rat(1, 3)};
    for (bool projective : {false, true}) {
        for (int trial = 0; trial < 60; ++trial) {
            const size_t k = 2 + rng() % 3;
            Matrix<Rat> g(k, k);
            for (size_t i = 0; i < k; ++i) {
                g(i, i) = 1;
                for (size_t j = i + 1; j < k; ++j) {
                    g(i, j) = vals[rng() % 2];
                    g(j, i) = g(i, j);
                }
            }
            CanonicalMap cm = canonical_gram(g, projective);
            CHECK(canonical_gram(cm.gram, projective).gram == cm.gram);
            CHECK(apply_signed_perm(g, cm.map.perm, cm.map.sign) == cm.gram);

            std::vector<int> perm(k), sign(k, 1);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            if (projective)
                for (size_t i = 0; i < k; ++i) sign[i] = rng() % 2 ? 1 : -1;
            Matrix<Rat> h = apply_signed_perm(g, perm, sign);
            CHECK(canonical_gram(h, projective).gram == cm.gram);
        }
    }
}

TEST_CASE("two-point orbits: direct case analysis") {
    DistanceSet sph = DistanceSet::equiangular(rat(1, 3), false, false);
    auto reps = enumerate_orbits(sph, 2);
    auto counts = orbit_counts_by_size(reps, 2);
    CHECK(counts == std::vector<size_t>{1, 1, 2});
    CHECK(reps[0].size == 0);
    CHECK(reps[1].gram(0, 0) == 1);
    CHECK(reps[2].gram(0, 1) == rat(-1, 3));
    CHECK(reps[3].gram(0, 1) == rat(1, 3));

    DistanceSet prj = DistanceSet::equiangular(rat(1, 3), false, true);
    auto preps = enumerate_orbits(prj, 2);
    CHECK(orbit_counts_by_size(preps, 2) == std::vector<size_t>{1, 1, 1});
    CHECK(preps[2].gram(0, 1) == rat(-1, 3));
}

TEST_CASE("orbit counts match the brute-force reference") {
    for (bool projective : {false, true}) {
        DistanceSet d = DistanceSet::equiangular(rat(1, 3), false, projective);
        auto counts = orbit_counts_by_size(enumerate_orbits(d, 4), 4);
        CHECK(counts == brute::orbit_counts(d.values, projective, 4));
    }
    // with a large value the PSD filter rejects candidates
    DistanceSet wide({rat(-9, 10), rat(9, 10)}, false);
    auto counts = orbit_counts_by_size(enumerate_orbits(wide, 3), 3);
    auto ref = brute::orbit_counts(wide.values, false, 3);
    CHECK(counts == ref);
    CHECK(counts[3] < 4);  // the all-negative triangle is not PSD

    // three-value set with zero
    DistanceSet z = DistanceSet::equiangular(rat(1, 3), true, true);
    CHECK(orbit_counts_by_size(enumerate_orbits(z, 3), 3) == brute::orbit_counts(z.values, true, 3));
}

TEST_CASE("rank filter at fixed small n") {
    DistanceSet d = DistanceSet::equiangular(rat(1, 3), false, false);
    auto counts2 = orbit_counts_by_size(enumerate_orbits(d, 4, 2), 4);
    CHECK(counts2 == brute::orbit_counts(d.values, false, 4, 2));
    auto counts3 = orbit_counts_by_size(enumerate_orbits(d, 4, 3), 4);
    CHECK(counts3 == brute::orbit_counts(d.values, false, 4, 3));
    // n at least max_size: the filter is vacuous
    CHECK(orbit_counts_by_size(enumerate_orbits(d, 4, 4), 4) ==
          orbit_counts_by_size(enumerate_orbits(d, 4), 4));
    // the regular simplex Gram (rank 3) survives exactly when n >= 3
    bool found3 = false, found2 = false;
    for (const auto& r : enumerate_orbits(d, 4, 3))
        if (r.size == 4 && r.rank == 3) found3 = true;
    for (const auto& r : enumerate_orbits(d, 4, 2))
        if (r.size == 4 && r.rank == 3) found2 = true;
    CHECK(found3);
    CHECK(!found2);
}

TEST_CASE("enumerated representatives are canonical, PSD, and deterministic") {
    DistanceSet d = DistanceSet::equiangular(rat(1, 3), false, true);
    auto reps = enumerate_orbits(d, 4);
    auto again = enumerate_orbits(d, 4);
    REQUIRE(reps.size() == again.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        CHECK(reps[i].key == again[i].key);
        CHECK(canonical_gram(reps[i].gram, true).gram == reps[i].gram);
        PsdReport rep = psd_check(reps[i].gram);
        CHECK(rep.is_psd);
        CHECK(rep.rank == reps[i].rank);
        // leading principal minors are nonnegative
        for (size_t kk = 1; kk <= reps[i].size; ++kk) {
            Matrix<Rat> lead(kk, kk);
            for (size_t a = 0; a < kk; ++a)
                for (size_t b = 0; b < kk; ++b) lead(a, b) = reps[i].gram(a, b);
            CHECK(sgn(determinant(lead)) >= 0);
        }
    }
}

TEST_CASE("size-6 universes: 156 two-value and 25506 three-value orbits") {
    DistanceSet two = DistanceSet::equiangular(rat(1, 7), false, false);
    auto counts2 = orbit_counts_by_size(enumerate_orbits(two, 6), 6);
    CHECK(counts2[6] == 156);
    DistanceSet three = DistanceSet::equiangular(rat(1, 7), true, false);
    auto counts3 = orbit_counts_by_size(enumerate_orbits(three, 6), 6);
    CHECK(counts3[6] == 25506);
    // at 1/7 every candidate Gram is diagonally dominant, so the PSD filter
    // never rejects and the counts must equal the Burnside edge-coloring
    // numbers at every size
    for (unsigned k = 1; k <= 6; ++k) {
        CHECK(Int(counts2[k]) == edge_coloring_count(int(k), 2));
        CHECK(Int(counts3[k]) == edge_coloring_count(int(k), 3));
    }
}

TEST_CASE("embedding: identity, pair, simplex, and rejection") {
    Embedding id2 = embed(Matrix<Rat>::identity(2));
    CHECK(id2.coords == Matrix<Ext>::identity(2));
    CHECK(id2.field == "Q");

    Rat alpha = rat(1, 3);
    Matrix<Rat> pair(2, 2);
    pair(0, 0) = pair(1, 1) = 1;
    pair(0, 1) = pair(1, 0) = alpha;
    Embedding ep = embed(pair);
    CHECK(ep.coords(0, 0) == Ext(Rat(1)));
    CHECK(ep.coords(1, 0) == Ext());
    CHECK(ep.coords(0, 1) == Ext(alpha));
    CHECK(ep.coords(1, 1) == ext_sqrt(1 - alpha * alpha));
    CHECK(ep.field == "Q(sqrt(2))");

    Matrix<Rat> simplex = gram_from({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 3);
    Embedding es = embed(simplex);
    Matrix<Ext> want(3, 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) want(i, j) = Ext(simplex(i, j));
    CHECK(es.coords.transpose() * es.coords == want);

    Matrix<Rat> dependent = gram_from({{0, -1, -1, -1}, {-1, 0, -1, -1}, {-1, -1, 0, -1}, {-1, -1, -1, 0}}, 3);
    CHECK(psd_check(dependent).is_psd);
    CHECK(throws_domain_error_containing([&] { embed(dependent); }, "linearly dependent"));

    Matrix<Rat> indefinite(2, 2);
    indefinite(0, 0) = indefinite(1, 1) = 1;
    indefinite(0, 1) = indefinite(1, 0) = 2;
    CHECK(throws_domain_error_containing([&] { embed(indefinite); }, "not positive semidefinite"));
}

TEST_CASE("embeddings reproduce the Gram matrix over the whole small universe") {
    DistanceSet d = DistanceSet::equiangular(rat(1, 3), false, false);
    for (auto& r : enumerate_orbits(d, 4)) {
        if (r.rank < r.size) continue;
        const Embedding& e = ensure_embedding(r);
        Matrix<Ext> g = e.coords.transpose() * e.coords;
        for (size_t i = 0; i < r.size; ++i)
            for (size_t j = 0; j < r.size; ++j) {
                CHECK(g(i, j).b == 0);
                CHECK(g(i, j).a == r.gram(i, j));
            }
        if (r.size <= 3) CHECK(bool(r.emb));
    }
}

TEST_CASE("stabilizers: sizes, orthogonality, and the defining relation") {
    DistanceSet d = DistanceSet::equiangular(rat(1, 3), false, false);
    auto reps = enumerate_orbits(d, 3);

    for (auto& r : reps) {
        if (r.rank < r.size) continue;
        auto gens = stabilizer_generators(r);
        if (r.size <= 1) CHECK(gens.empty());
        const Embedding& e = ensure_embedding(r);
        for (const auto& g : gens) {
            CHECK(g.r.transpose() * g.r == Matrix<Ext>::identity(r.size));
            Matrix<Ext> ptil(r.size, r.size);
            for (size_t a = 0; a < r.size; ++a)
                ptil(size_t(g.sp.perm[a]), a) = Ext(Rat(g.sp.sign[a]));
            CHECK(g.r * e.coords == e.coords * ptil);
        }
    }

    // the regular simplex realizes all of S_3
    Matrix<Rat> simplex = gram_from({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 3);
    OrbitRep sr;
    sr.size = 3;
    sr.gram = simplex;
    sr.rank = 3;
    CHECK(stabilizer_generators(sr).size() == 5);

    // a pair has exactly the swap
    OrbitRep pr;
    pr.size = 2;
    pr.gram = gram_from({{0, 1}, {1, 0}}, 3);
    pr.rank = 2;
    auto pg = stabilizer_generators(pr);
    REQUIRE(pg.size() == 1);
    CHECK(pg[0].sp.perm == std::vector<int>{1, 0});

    // projective: orthogonal pair picks up all sign flips including the
    // global reversal, which acts as -I on the span
    OrbitRep zr;
    zr.size = 2;
    zr.projective = true;
    zr.gram = Matrix<Rat>::identity(2);
    zr.rank = 2;
    auto zg = stabilizer_generators(zr);
    CHECK(zg.size() == 7);

    // a projective singleton is reversible
    OrbitRep lr;
    lr.size = 1;
    lr.projective = true;
    lr.gram = Matrix<Rat>::identity(1);
    lr.rank = 1;
    auto lg = stabilizer_perms(lr);
    REQUIRE(lg.size() == 1);
    CHECK(lg[0].sign == std::vector<int>{-1});

    // a generic projective pair keeps the swap and the global reversal
    OrbitRep gr;
    gr.size = 2;
    gr.projective = true;
    gr.gram = gram_from({{3, -1}, {-1, 3}}, 3);
    gr.rank = 2;
    CHECK(stabilizer_perms(gr).size() == 3);
}

TEST_CASE("transporter blocks: identity, singletons, and cross-Gram recovery") {
    DistanceSet d = DistanceSet::equiangular(rat(1, 3), false, true);
    auto reps = enumerate_orbits(d, 4);
    OrbitIndex idx = OrbitIndex::build(reps);

    // J = J' = the whole pair: the block is the identity
    const OrbitRep* pairrep = nullptr;
    for (const auto& r : reps)
        if (r.size == 2 && r.gram(0, 1) == rat(-1, 3)) pairrep = &r;
    REQUIRE(pairrep);
    TransporterBlock full = transporter(*pairrep, {0, 1}, {0, 1}, reps, idx);
    CHECK(full.block == Matrix<Ext>::identity(2));
    CHECK(full.src_orbit == full.dst_orbit);

    // singleton against singleton: the block is the inner product
    TransporterBlock s12 = transporter(*pairrep, {0}, {1}, reps, idx);
    REQUIRE(s12.block.rows == 1);
    Rat want = pairrep->gram(0, 1);
    if (s12.src_map.sign[0] * s12.dst_map.sign[0] < 0) want = -want;
    CHECK(s12.block(0, 0) == Ext(want));

    // empty side
    TransporterBlock es = transporter(*pairrep, {}, {0, 1}, reps, idx);
    CHECK(es.block.rows == 0);
    CHECK(es.block.cols == 2);
    CHECK(reps[es.src_orbit].size == 0);

    // cross-Gram recovery on every decomposition of every union of size <= 4,
    // including unions with singular Gram matrices
    size_t checked = 0;
    for (const auto& u : reps) {
        if (u.size < 1) continue;
        const size_t m = u.size;
        for (unsigned m1 = 0; m1 < (1u << m); ++m1)
            for (unsigned m2 = 0; m2 < (1u << m); ++m2) {
                if ((m1 | m2) + 1 != (1u << m)) continue;
                std::vector<size_t> j1, j2;
                for (size_t i = 0; i < m; ++i) {
                    if ((m1 >> i) & 1u) j1.push_back(i);
                    if ((m2 >> i) & 1u) j2.push_back(i);
                }
                if (j1.size() > 2 || j2.size() > 2) continue;
                TransporterBlock tb = transporter(u, j1, j2, reps, idx);
                Matrix<Rat> cross = transporter_cross_gram(tb, reps);
                for (size_t a = 0; a < j1.size(); ++a)
                    for (size_t b = 0; b < j2.size(); ++b) {
                        Rat v = u.gram(size_t(tb.src_map.perm[a]), size_t(tb.dst_map.perm[b]));
                        if (tb.src_map.sign[a] * tb.dst_map.sign[b] < 0) v = -v;
                        CHECK(cross(a, b) == v);
                    }
                ++checked;
            }
    }
    CHECK(checked > 50);

    // swapping the roles transposes the block
    const OrbitRep* triple = nullptr;
    for (const auto& r : reps)
        if (r.size == 3 && r.rank == 3) triple = &r;
    REQUIRE(triple);
    TransporterBlock ab = transporter(*triple, {0, 1}, {1, 2}, reps, idx);
    TransporterBlock ba = transporter(*triple, {1, 2}, {0, 1}, reps, idx);
    CHECK(ab.block.transpose() == ba.block);

    // operator norm contract: I - T^T T is PSD, via its minors
    Matrix<Ext> gram_t = ab.block.transpose() * ab.block;
    Matrix<Ext> slack = Matrix<Ext>::identity(2) - gram_t;
    CHECK(slack(0, 0).sign() >= 0);
    CHECK(slack(1, 1).sign() >= 0);
    Ext det = slack(0, 0) * slack(1, 1) - slack(0, 1) * slack(1, 0);
    CHECK(det.sign() >= 0);

    // malformed subsets are rejected
    CHECK_THROWS_AS(transporter(*triple, {0, 1}, {1}, reps, idx), std::invalid_argument);
    CHECK_THROWS_AS(transporter(*triple, {0, 0}, {0, 1, 2}, reps, idx), std::invalid_argument);
}

TEST_CASE("orbit table JSON uses exact strings") {
    DistanceSet d = DistanceSet::equiangular(rat(1, 7), false, false);
    auto reps = enumerate_orbits(d, 2);
    auto doc = nlohmann::json::parse(orbit_table_json(d, reps));
    CHECK(doc["mode"] == "spherical");
    CHECK(doc["values"][0] == "-1/7");
    CHECK(doc["values"][1] == "1/7");
    REQUIRE(doc["orbits"].size() == 4);
    CHECK(doc["orbits"][2]["gram"][0][1] == "-1/7");
    CHECK(doc["orbits"][3]["gram"][0][1] == "1/7");
    CHECK(doc["orbits"][3]["embedded"] == true);
    CHECK(doc["orbits"][3]["coords"][0][0] == "1");
}
