#pragma once

#include "sphlas/linalg.hpp"
#include "sphlas/moments.hpp"
#include "sphlas/mvpoly.hpp"
#include "sphlas/orbits.hpp"
#include "sphlas/polynomial.hpp"
#include "sphlas/tableau.hpp"

#include <string>
#include <vector>

namespace sphlas {

// Basis of the subspace of the Weyl module W_lambda(GL(k)), k = rep.size,
// fixed by every symmetry of the representative point set (acting through
// its signed permutation in the point frame). Vectors are coordinates over
// enumerate_ssyt(lambda, k) and form the reduced-echelon basis of the fixed
// space, so repeated calls produce identical output.
struct InvariantBasis {
    Partition lambda;
    std::string orbit_key;
    size_t orbit_size = 0;
    std::vector<std::vector<Rat>> vectors;

    size_t dim() const { return vectors.size(); }
};

InvariantBasis invariant_basis(const Partition& lambda, const OrbitRep& rep);

// Matrix of inner products between the positioned invariant functions of two
// orbits: entry (j1, j2) pairs vector j1 of the first basis with vector j2 of
// the second, as a polynomial in the formal cross-Gram variables
//   S_pq = <point p of the first set, point q of the second>,
// 0 <= p < size1, 0 <= q < size2, variable index p * size2 + q. Coefficients
// are exact rational functions of the ambient dimension n. Total S-degree of
// every term is at most |lambda| and has the parity of |lambda|.
struct ZonalBlock {
    Partition lambda;
    unsigned level = 0;  // t
    std::string key1, key2;
    size_t size1 = 0, size2 = 0;
    std::vector<std::vector<MPoly<RatFuncN>>> entries;

    size_t dim1() const { return entries.size(); }
    size_t dim2() const { return entries.empty() ? 0 : entries[0].size(); }

    friend bool operator==(const ZonalBlock& a, const ZonalBlock& b) {
        return a.lambda == b.lambda && a.level == b.level && a.key1 == b.key1 &&
               a.key2 == b.key2 && a.size1 == b.size1 && a.size2 == b.size2 &&
               a.entries == b.entries;
    }
};

struct ZonalOptions {
    std::string cache_dir;  // empty: in-memory only
    unsigned threads = 0;   // 0: one per hardware thread, capped at 8
    MomentOptions moments;
    // Derive the block for (rep2, rep1) from a cached (rep1, rep2) via the
    // transpose symmetry instead of recomputing. Tests disable this to check
    // the symmetry honestly.
    bool derive_transposed = true;
    // Free-form description of the enclosing problem (e.g. its distance set),
    // stored in cache headers.
    std::string context;
};

// Exact construction of the block: the pairing of two Weyl-module images is
// integrated over the orthogonal group symbolically in n, rewritten into
// invariant pairing variables, and specialized to the two orbit Grams. The
// construction verifies en route that every imaginary part cancels and that
// the rewrite reproduces the integrand identically; violations throw
// std::logic_error. Results are cached in opt.cache_dir when set.
ZonalBlock zonal_block(const Partition& lambda, const OrbitRep& rep1, const OrbitRep& rep2,
                       const InvariantBasis& basis1, const InvariantBasis& basis2, unsigned t,
                       const ZonalOptions& opt = {});

// Evaluate every entry at a concrete cross Gram, keeping n symbolic.
Matrix<RatFuncN> zonal_eval(const ZonalBlock& blk, const Matrix<Rat>& cross);

// Evaluate at a fixed dimension. Throws std::domain_error when n is below
// the validity threshold of the underlying orthogonal-group moments (i.e. at
// a pole of some coefficient) or not a positive integer.
Matrix<Rat> zonal_eval(const ZonalBlock& blk, const Matrix<Rat>& cross, const Rat& n);

// The partitions contributing blocks at level t with polynomial degree cap d:
// weight <= d, at most t rows, even weight when projective.
std::vector<Partition> zonal_lambda_list(unsigned t, unsigned d, bool projective);

// Cache-document form of a block (also the on-disk format, format-versioned).
std::string zonal_block_to_json(const ZonalBlock& blk, const std::string& key,
                                const std::string& context, const Matrix<Rat>& gram1,
                                const Matrix<Rat>& gram2);
ZonalBlock zonal_block_from_json(const std::string& doc);

}  // namespace sphlas
