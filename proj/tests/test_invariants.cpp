#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sphlas/gegenbauer.hpp"
#include "sphlas/invariants.hpp"

using namespace sphlas;

namespace {

OrbitRep make_rep(size_t size, bool projective, const Matrix<Rat>& gram, std::string key) {
    OrbitRep rep;
    rep.size = size;
    rep.projective = projective;
    rep.gram = gram;
    rep.key = std::move(key);
    rep.rank = size;
    return rep;
}

OrbitRep empty_rep(bool projective) {
    return make_rep(0, projective, Matrix<Rat>(0, 0), projective ? "e-p" : "e-s");
}

OrbitRep singleton_rep(bool projective) {
    Matrix<Rat> g(1, 1);
    g(0, 0) = 1;
    return make_rep(1, projective, g, projective ? "u-p" : "u-s");
}

OrbitRep pair_rep(const Rat& c, bool projective) {
    Matrix<Rat> g(2, 2);
    g(0, 0) = g(1, 1) = 1;
    g(0, 1) = g(1, 0) = c;
    std::string key = (projective ? "p-" : "s-") + c.get_str();
    return make_rep(2, projective, g, key);
}

size_t count_twos(const Tableau& tab) {
    size_t n = 0;
    for (const auto& col : tab.cols)
        for (int e : col) n += (e == 2);
    return n;
}

size_t even_twos(const Partition& lam) {
    SemistandardBasis b = enumerate_ssyt(lam, 2);
    size_t n = 0;
    for (const auto& tab : b.tabs) n += (count_twos(tab) % 2 == 0);
    return n;
}

// n in the denominator: f = c / n
RatFuncN over_n(long c) { return RatFuncN(PolyN(c), PolyN::variable()); }

Matrix<Rat> simplex_gram(size_t k) {
    Matrix<Rat> g(k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) g(i, j) = i == j ? Rat(1) : rat(-1, 3);
    return g;
}

bool throws_domain_error(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::domain_error&) {
        return true;
    }
    return false;
}

}  // namespace

TEST_CASE("invariant fixed spaces: basics") {
    Partition zero;

    CHECK(invariant_basis(zero, empty_rep(false)).dim() == 1);
    CHECK(invariant_basis(zero, singleton_rep(true)).dim() == 1);
    CHECK(invariant_basis(zero, pair_rep(rat(1, 3), true)).dim() == 1);

    // nothing above the trivial module fits on zero points
    CHECK(invariant_basis({1}, empty_rep(false)).dim() == 0);
    CHECK(invariant_basis({2}, empty_rep(true)).dim() == 0);

    // a spherical singleton has no symmetries: the whole module is fixed
    for (unsigned k = 1; k <= 4; ++k) {
        auto basis = invariant_basis({k}, singleton_rep(false));
        CHECK(basis.dim() == 1);
        CHECK(basis.vectors[0] == std::vector<Rat>{Rat(1)});
    }

    // a projective singleton is fixed by the antipodal flip, which acts by
    // (-1)^|lambda|
    CHECK(invariant_basis({1}, singleton_rep(true)).dim() == 0);
    CHECK(invariant_basis({3}, singleton_rep(true)).dim() == 0);
    CHECK(invariant_basis({2}, singleton_rep(true)).dim() == 1);
    CHECK(invariant_basis({4}, singleton_rep(true)).dim() == 1);

    // determinism
    auto a = invariant_basis({2, 1}, pair_rep(rat(-1, 3), false));
    auto b = invariant_basis({2, 1}, pair_rep(rat(-1, 3), false));
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("invariant fixed spaces: pair symmetry in the mirror frame") {
    // A two-point set symmetric about its bisector is swapped by the
    // reflection diag(1, -1), which acts diagonally on each basis tableau
    // with sign (-1)^(number of entries equal to 2). The fixed space of the
    // swap therefore has one dimension per tableau with evenly many 2s.
    for (const Partition& lam : partitions_up_to(4, 2)) {
        if (partition_weight(lam) == 0) continue;
        SemistandardBasis b = enumerate_ssyt(lam, 2);
        Straightener st(b);
        Matrix<Rat> mirror(2, 2);
        mirror(0, 0) = 1;
        mirror(1, 1) = -1;
        Matrix<Rat> r = rho_matrix(mirror, b, st);
        for (size_t i = 0; i < b.dim(); ++i)
            for (size_t j = 0; j < b.dim(); ++j) {
                Rat expect(0);
                if (i == j) expect = count_twos(b.tabs[i]) % 2 == 0 ? Rat(1) : Rat(-1);
                CHECK(r(i, j) == expect);
            }

        auto basis = invariant_basis(lam, pair_rep(rat(1, 3), false));
        CHECK(basis.dim() == even_twos(lam));
    }
}

TEST_CASE("invariant fixed spaces: projective orbit dimension table") {
    auto d = DistanceSet::equiangular(rat(1, 3), false, true);
    auto reps = enumerate_orbits(d, 2, std::nullopt);
    REQUIRE(reps.size() == 3);

    auto total = [&](const Partition& lam) {
        size_t n = 0;
        for (const auto& rep : reps) n += invariant_basis(lam, rep).dim();
        return n;
    };

    CHECK(total({}) == 3);
    CHECK(total({2}) == 3);
    CHECK(total({1, 1}) == 0);
    CHECK(total({2, 2}) == 1);
    CHECK(total({3, 1}) == 1);
    CHECK(total({4}) == 4);

    // odd weights are killed by the antipodal flip on every orbit
    CHECK(total({1}) == 0);
    CHECK(total({3}) == 0);
    CHECK(total({2, 1}) == 0);
}

TEST_CASE("zonal: identity representation blocks") {
    ZonalOptions opt;
    OrbitRep u = singleton_rep(false);
    auto ub = invariant_basis({1}, u);

    // level 1: the block pairs two embedded unit vectors through a 2 x 2
    // window, giving 2/n per matched coordinate
    ZonalBlock b1 = zonal_block({1}, u, u, ub, ub, 1, opt);
    REQUIRE(b1.dim1() == 1);
    REQUIRE(b1.dim2() == 1);
    MPoly<RatFuncN> expect1(mono_var(0), over_n(2));
    CHECK(b1.entries[0][0] == expect1);

    // level 2: a 4 x 4 window doubles the matched coordinates
    ZonalBlock b2 = zonal_block({1}, u, u, ub, ub, 2, opt);
    MPoly<RatFuncN> expect2(mono_var(0), over_n(4));
    CHECK(b2.entries[0][0] == expect2);

    Matrix<Rat> cross(1, 1);
    cross(0, 0) = 1;
    CHECK(zonal_eval(b1, cross, Rat(7))(0, 0) == rat(2, 7));

    // the trivial partition gives the constant kernel on any orbit pair
    OrbitRep e = empty_rep(false);
    auto eb = invariant_basis({}, e);
    auto ub0 = invariant_basis({}, u);
    ZonalBlock b0 = zonal_block({}, e, u, eb, ub0, 2, opt);
    REQUIRE(b0.dim1() == 1);
    REQUIRE(b0.dim2() == 1);
    CHECK(b0.entries[0][0] == MPoly<RatFuncN>(RatFuncN(1)));
}

TEST_CASE("zonal: level-1 blocks are Gegenbauer kernels") {
    ZonalOptions opt;
    OrbitRep u = singleton_rep(false);

    for (unsigned k = 1; k <= 6; ++k) {
        auto ub = invariant_basis({k}, u);
        ZonalBlock blk = zonal_block({k}, u, u, ub, ub, 1, opt);
        REQUIRE(blk.dim1() == 1);

        std::vector<RatFuncN> got(k + 1);
        for (const auto& [m, c] : blk.entries[0][0].terms) got[mono_degree(m)] = c;

        auto geg = gegenbauer_raw(k);
        REQUIRE(geg.size() == k + 1);
        RatFuncN factor = got[k] / geg[k];
        for (unsigned j = 0; j <= k; ++j) CHECK(got[j] == geg[j] * factor);

        // the factor is positive throughout the valid range
        int order = 0;
        Rat lead;
        factor.leading(order, lead);
        CHECK(lead > 0);
        for (long n = 3; n <= 24; ++n) CHECK(factor.eval(Rat(n)) > 0);
    }
}

TEST_CASE("zonal: transpose symmetry holds without the derivation shortcut") {
    ZonalOptions opt;
    opt.derive_transposed = false;

    OrbitRep u = singleton_rep(false);
    OrbitRep p = pair_rep(rat(-1, 3), false);
    OrbitRep q = pair_rep(rat(1, 3), false);
    Partition lam{2};
    auto ubasis = invariant_basis(lam, u);
    auto pbasis = invariant_basis(lam, p);
    auto qbasis = invariant_basis(lam, q);

    // singleton vs pair: the cross variables coincide after transposition
    ZonalBlock up = zonal_block(lam, u, p, ubasis, pbasis, 2, opt);
    ZonalBlock pu = zonal_block(lam, p, u, pbasis, ubasis, 2, opt);
    REQUIRE(up.dim1() == pu.dim2());
    REQUIRE(up.dim2() == pu.dim1());
    for (size_t i = 0; i < up.dim1(); ++i)
        for (size_t j = 0; j < up.dim2(); ++j)
            CHECK(up.entries[i][j] == pu.entries[j][i]);

    // two different pairs: S_pq goes to S_qp, i.e. variable 2p+q to 2q+p
    ZonalBlock pq = zonal_block(lam, p, q, pbasis, qbasis, 2, opt);
    ZonalBlock qp = zonal_block(lam, q, p, qbasis, pbasis, 2, opt);
    REQUIRE(pq.dim1() == qp.dim2());
    REQUIRE(pq.dim2() == qp.dim1());
    for (size_t i = 0; i < pq.dim1(); ++i)
        for (size_t j = 0; j < pq.dim2(); ++j) {
            MPoly<RatFuncN> swapped;
            for (const auto& [m, c] : qp.entries[j][i].terms) {
                Mono nm(4, 0);
                for (size_t v = 0; v < m.size(); ++v) {
                    if (m[v] == 0) continue;
                    size_t pp = v / 2, qq = v % 2;
                    nm[qq * 2 + pp] = m[v];
                }
                swapped.add_term(nm, c);
            }
            CHECK(pq.entries[i][j] == swapped);
        }
}

TEST_CASE("zonal: entries respect the degree and parity of the partition") {
    ZonalOptions opt;
    OrbitRep u = singleton_rep(false);
    OrbitRep p = pair_rep(rat(-1, 3), false);

    for (const Partition& lam : partitions_up_to(3, 2)) {
        unsigned w = partition_weight(lam);
        for (const OrbitRep* r1 : {&u, &p})
            for (const OrbitRep* r2 : {&u, &p}) {
                auto b1 = invariant_basis(lam, *r1);
                auto b2 = invariant_basis(lam, *r2);
                ZonalBlock blk = zonal_block(lam, *r1, *r2, b1, b2, 2, opt);
                for (size_t i = 0; i < blk.dim1(); ++i)
                    for (size_t j = 0; j < blk.dim2(); ++j)
                        for (const auto& [m, c] : blk.entries[i][j].terms) {
                            unsigned deg = mono_degree(m);
                            CHECK(deg <= w);
                            CHECK((w - deg) % 2 == 0);
                        }
            }
    }
}

TEST_CASE("zonal: relabeling a set by one of its symmetries fixes the block") {
    ZonalOptions opt;

    auto signed_perm_matrix = [](const SignedPerm& sp) {
        Matrix<Rat> p(sp.perm.size(), sp.perm.size());
        for (size_t a = 0; a < sp.perm.size(); ++a)
            p(size_t(sp.perm[a]), a) = Rat(sp.sign[a]);
        return p;
    };

    auto check_invariance = [&](const OrbitRep& rep, const Partition& lam,
                                const Matrix<Rat>& cross) {
        auto basis = invariant_basis(lam, rep);
        if (basis.dim() == 0) return;
        ZonalBlock blk = zonal_block(lam, rep, rep, basis, basis, 2, opt);
        Matrix<RatFuncN> base = zonal_eval(blk, cross);
        for (const SignedPerm& sp : stabilizer_perms(rep)) {
            Matrix<Rat> p = signed_perm_matrix(sp);
            Matrix<Rat> left = p.transpose() * cross;
            Matrix<Rat> right = cross * p;
            Matrix<Rat> both = p.transpose() * cross * p;
            for (const Matrix<Rat>* c2 : {&left, &right, &both}) {
                Matrix<RatFuncN> relabeled = zonal_eval(blk, *c2);
                REQUIRE(relabeled.rows == base.rows);
                for (size_t i = 0; i < base.rows; ++i)
                    for (size_t j = 0; j < base.cols; ++j)
                        CHECK(relabeled(i, j) == base(i, j));
            }
        }
    };

    Matrix<Rat> cross(2, 2);
    cross(0, 0) = rat(1, 7);
    cross(0, 1) = rat(2, 7);
    cross(1, 0) = rat(3, 7);
    cross(1, 1) = rat(-1, 5);

    check_invariance(pair_rep(rat(-1, 3), false), {2}, cross);
    check_invariance(pair_rep(rat(-1, 3), false), {3}, cross);
    check_invariance(pair_rep(rat(1, 3), true), {2}, cross);
}

namespace {

// One positive-semidefinite kernel matrix per partition: rows and columns
// run over the subsets of a realized point configuration (sizes 1 and 2,
// plus the empty set for the trivial partition), each subset contributing
// its invariant dimensions. Positive semidefiniteness is what makes these
// blocks usable as constraint coefficients.
void check_simplex_kernel(unsigned max_weight) {
    ZonalOptions opt;
    const unsigned t = 2;
    const Rat n(50);
    Matrix<Rat> g = simplex_gram(4);

    std::vector<std::vector<size_t>> subsets;
    for (size_t i = 0; i < 4; ++i) subsets.push_back({i});
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j) subsets.push_back({i, j});

    OrbitRep reps[3] = {empty_rep(false), singleton_rep(false), pair_rep(rat(-1, 3), false)};

    for (const Partition& lam : partitions_up_to(max_weight, t)) {
        std::vector<std::vector<size_t>> subs = subsets;
        if (partition_weight(lam) == 0) subs.insert(subs.begin(), std::vector<size_t>{});

        InvariantBasis bases[3];
        for (size_t k = 0; k < 3; ++k) bases[k] = invariant_basis(lam, reps[k]);

        ZonalBlock blocks[3][3];
        for (size_t a = 0; a < 3; ++a)
            for (size_t b = 0; b < 3; ++b)
                blocks[a][b] = zonal_block(lam, reps[a], reps[b], bases[a], bases[b], t, opt);

        std::vector<size_t> offset(subs.size() + 1, 0);
        for (size_t i = 0; i < subs.size(); ++i)
            offset[i + 1] = offset[i] + bases[subs[i].size()].dim();
        const size_t total = offset[subs.size()];
        if (total == 0) continue;

        Matrix<Rat> big(total, total);
        for (size_t i = 0; i < subs.size(); ++i)
            for (size_t j = 0; j < subs.size(); ++j) {
                const auto& J1 = subs[i];
                const auto& J2 = subs[j];
                Matrix<Rat> cross(J1.size(), J2.size());
                for (size_t a = 0; a < J1.size(); ++a)
                    for (size_t b = 0; b < J2.size(); ++b) cross(a, b) = g(J1[a], J2[b]);
                Matrix<Rat> val = zonal_eval(blocks[J1.size()][J2.size()], cross, n);
                for (size_t a = 0; a < val.rows; ++a)
                    for (size_t b = 0; b < val.cols; ++b)
                        big(offset[i] + a, offset[j] + b) = val(a, b);
            }

        CHECK(big.is_symmetric());
        PsdReport psd = psd_check(big);
        CHECK(psd.is_psd);
        if (partition_weight(lam) == 0) CHECK(psd.rank == 1);
    }
}

}  // namespace

TEST_CASE("zonal: kernel over subsets of a simplex is positive semidefinite") {
    check_simplex_kernel(3);
}

TEST_CASE("zonal: simplex kernel at weight 4") {
    if (!std::getenv("SPHLAS_SLOW_TESTS")) return;
    check_simplex_kernel(4);
}

TEST_CASE("zonal_eval: rejects dimensions below validity") {
    ZonalOptions opt;
    OrbitRep u = singleton_rep(false);
    auto ub2 = invariant_basis({2}, u);
    ZonalBlock b2 = zonal_block({2}, u, u, ub2, ub2, 2, opt);
    Matrix<Rat> cross(1, 1);
    cross(0, 0) = rat(1, 3);

    CHECK(throws_domain_error([&] { zonal_eval(b2, cross, Rat(3)); }));
    CHECK(throws_domain_error([&] { zonal_eval(b2, cross, rat(7, 2)); }));
    CHECK(throws_domain_error([&] { zonal_eval(b2, cross, Rat(-4)); }));
    CHECK_NOTHROW(zonal_eval(b2, cross, Rat(4)));

    // level 1 stays valid down to n = 2, even at weight 6
    auto ub6 = invariant_basis({6}, u);
    ZonalBlock b6 = zonal_block({6}, u, u, ub6, ub6, 1, opt);
    CHECK_NOTHROW(zonal_eval(b6, cross, Rat(7)));
    CHECK_NOTHROW(zonal_eval(b6, cross, Rat(2)));
    CHECK(throws_domain_error([&] { zonal_eval(b6, cross, Rat(1)); }));
}

TEST_CASE("zonal: lambda lists per level and degree") {
    auto eq = [](const std::vector<Partition>& got, const std::vector<Partition>& want) {
        return got == want;
    };
    CHECK(eq(zonal_lambda_list(2, 4, true),
             {{}, {1, 1}, {2}, {2, 2}, {3, 1}, {4}}));
    CHECK(eq(zonal_lambda_list(2, 3, false),
             {{}, {1}, {1, 1}, {2}, {2, 1}, {3}}));
    CHECK(eq(zonal_lambda_list(1, 3, true), {{}, {2}}));
    CHECK(eq(zonal_lambda_list(1, 3, false), {{}, {1}, {2}, {3}}));
}

TEST_CASE("zonal: disk cache round trip") {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(std::random_device{}());
    fs::path dir = fs::temp_directory_path() / ("sphlas-test-" + std::to_string(rng()));
    fs::create_directories(dir);

    ZonalOptions opt;
    opt.cache_dir = dir.string();
    opt.context = "test";

    OrbitRep u = singleton_rep(false);
    OrbitRep p = pair_rep(rat(-1, 3), false);
    Partition lam{2};
    auto ub = invariant_basis(lam, u);
    auto pb = invariant_basis(lam, p);

    ZonalBlock cold = zonal_block(lam, u, p, ub, pb, 2, opt);
    ZonalBlock warm = zonal_block(lam, u, p, ub, pb, 2, opt);
    CHECK(cold == warm);

    size_t zonal_files = 0, pairing_files = 0, temp_files = 0;
    fs::path zonal_path;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.find(".tmp.") != std::string::npos) ++temp_files;
        if (name.rfind("zonal-", 0) == 0) {
            ++zonal_files;
            zonal_path = entry.path();
        }
        if (name.rfind("pairing-", 0) == 0) ++pairing_files;
    }
    CHECK(zonal_files >= 1);
    CHECK(pairing_files >= 1);
    CHECK(temp_files == 0);

    // serialization is faithful
    std::string doc = zonal_block_to_json(cold, "k", "ctx", u.gram, p.gram);
    CHECK(zonal_block_from_json(doc) == cold);

    // a damaged cache entry is recomputed, not trusted
    {
        std::ofstream out(zonal_path, std::ios::trunc);
        out << "not json";
    }
    ZonalBlock repaired = zonal_block(lam, u, p, ub, pb, 2, opt);
    CHECK(repaired == cold);

    fs::remove_all(dir);
}
