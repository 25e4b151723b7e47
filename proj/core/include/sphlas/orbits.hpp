#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sphlas/linalg.hpp"
#include "sphlas/scalars.hpp"

namespace sphlas {

// Finite set of admissible inner products. In projective mode point sets are
// taken up to sign flips of individual points, so the set must be closed
// under negation.
struct DistanceSet {
    std::vector<Rat> values;  // sorted ascending, distinct, all in [-1, 1)
    bool projective = false;

    DistanceSet(std::vector<Rat> vals, bool projective_mode);

    // {-alpha, alpha} plus optionally 0, with 0 < alpha < 1
    static DistanceSet equiangular(const Rat& alpha, bool with_zero, bool projective_mode);

    size_t index_of(const Rat& v) const;
    std::vector<int> negation_table() const;  // -1 where the negation is absent
};

// Position a holds sign[a] * point perm[a] of the original tuple.
struct SignedPerm {
    std::vector<int> perm;
    std::vector<int> sign;
};

struct Embedding {
    Matrix<Rat> unit_lower;   // L in gram = L diag(pivots) L^T
    std::vector<Rat> pivots;  // all positive
    Matrix<Ext> coords;       // columns are the points; coords^T coords = gram
    std::string field;        // e.g. "Q" or "Q(sqrt(2))"
};

struct OrbitRep {
    size_t size = 0;
    bool projective = false;
    Matrix<Rat> gram;  // canonical form
    std::string key;
    size_t rank = 0;
    std::optional<Embedding> emb;  // present for full-rank reps of size <= 3
};

// r maps point a to sign[a] * point perm[a]; r is orthogonal on the span.
struct StabilizerElement {
    SignedPerm sp;
    Matrix<Ext> r;
};

struct CanonicalMap {
    Matrix<Rat> gram;
    SignedPerm map;  // canonical position a holds map.sign[a] * original point map.perm[a]
};

// Top-left block of s(J)^{-1} s(J'), where s(J) moves the canonical
// representative of J's orbit onto the actual points of J inside the union.
struct TransporterBlock {
    Matrix<Ext> block;
    size_t src_orbit = 0, dst_orbit = 0;
    SignedPerm src_map, dst_map;  // canonical position -> point index in the union
};

struct OrbitIndex {
    std::unordered_map<std::string, size_t> by_key;
    static OrbitIndex build(const std::vector<OrbitRep>& reps);
};

CanonicalMap canonical_gram(const Matrix<Rat>& gram, bool projective);
std::string gram_key(const Matrix<Rat>& gram);

// All orbits of point sets of size <= max_size with pairwise inner products
// in d, as canonical Gram matrices: PSD exactly, one representative per
// simultaneous-permutation (and sign, in projective mode) class, including
// the empty set and the singleton. When n is given, orbits whose Gram rank
// exceeds n are dropped (only possible when n < max_size).
std::vector<OrbitRep> enumerate_orbits(const DistanceSet& d, unsigned max_size,
                                       std::optional<long> n = std::nullopt);
std::vector<size_t> orbit_counts_by_size(const std::vector<OrbitRep>& reps, unsigned max_size);

// Exact Cholesky-style factorization over a real quadratic tower. Rejects
// singular Gram matrices: linearly dependent point sets are outside the
// supported regime.
Embedding embed(const Matrix<Rat>& gram);
const Embedding& ensure_embedding(OrbitRep& rep);

// All nontrivial symmetries of the representative point set as signed
// permutations of its points (in projective mode, of its lines). Needs no
// embedding.
std::vector<SignedPerm> stabilizer_perms(const OrbitRep& rep);

// All nontrivial symmetries of the representative point set, each with its
// orthogonal matrix r satisfying r * coords = coords * P_sigma.
std::vector<StabilizerElement> stabilizer_generators(const OrbitRep& rep);

// j1 and j2 index points of union_rep and must cover all of them. Identifies
// the orbits of both sub-point-sets in reps and returns the transporter
// block between their canonical representatives.
TransporterBlock transporter(const OrbitRep& union_rep, const std::vector<size_t>& j1,
                             const std::vector<size_t>& j2, const std::vector<OrbitRep>& reps,
                             const OrbitIndex& idx);
TransporterBlock transporter(const OrbitRep& union_rep, const std::vector<size_t>& j1,
                             const std::vector<size_t>& j2, const std::vector<OrbitRep>& reps);

// coords1^T * block * coords2: the cross Gram matrix between the two
// sub-point-sets in canonical order. Always rational.
Matrix<Rat> transporter_cross_gram(const TransporterBlock& tb, const std::vector<OrbitRep>& reps);

std::string orbit_table_json(const DistanceSet& d, const std::vector<OrbitRep>& reps);

}  // namespace sphlas
