#pragma once

#include "sphlas/invariants.hpp"
#include "sphlas/orbits.hpp"
#include "sphlas/polynomial.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sphlas {

// Row layout of one positive-semidefinite block. Rows are indexed by pairs
// (orbit, invariant): orbit[p] lists the var_orbits index of the p-th orbit
// with a nonzero invariant space, dim[p] its dimension, offset[p] the row of
// its first invariant.
struct SdpBlockLayout {
    Partition lambda;
    std::vector<size_t> orbit;
    std::vector<size_t> dim;
    std::vector<size_t> offset;
    size_t size = 0;

    size_t row(size_t pos, size_t j) const { return offset[pos] + j; }
};

// One linear inequality sum_b <coeff[b], F_b> <= rhs. Coefficient matrices
// are symmetric; entries are rational functions of the ambient dimension,
// constants when the instance is fixed-n.
struct SdpConstraint {
    std::string orbit_key;
    size_t orbit_index = 0;  // into con_orbits
    size_t orbit_size = 0;
    std::vector<Matrix<RatFuncN>> coeff;
    Rat rhs;
};

// The level-t relaxation over a finite distance set: minimize the top-left
// entry of the trivial-partition block subject to one inequality per orbit
// of nonempty point sets of size at most 2t, with every block positive
// semidefinite. Assembled symbolically in n or at a fixed dimension.
struct SdpInstance {
    std::vector<Rat> dist_values;
    bool projective = false;
    unsigned t = 0;
    unsigned degree = 0;
    bool symbolic = true;
    Rat n = 0;  // set when !symbolic

    // Added to the objective entry when reporting a bound; nonzero only for
    // reparametrized perturbed programs.
    Rat objective_offset = 0;

    std::vector<OrbitRep> var_orbits;  // size <= t, empty set first
    std::vector<OrbitRep> con_orbits;  // nonempty, size <= 2t
    std::vector<SdpBlockLayout> blocks;
    size_t objective_block = 0;
    size_t objective_row = 0;
    std::vector<SdpConstraint> constraints;

    size_t total_dim() const;
    size_t block_index(const Partition& lambda) const;  // blocks.size() when absent
};

struct AssembleOptions {
    unsigned degree = 4;
    // Explicit partition list; when empty, all partitions of weight <= degree
    // with at most t rows (even weight in projective mode). Must contain the
    // empty partition, which carries the objective.
    std::vector<Partition> lambdas;
    // Fixed ambient dimension; empty keeps n symbolic. Must be an integer
    // >= 2t so no coefficient sits at a pole.
    std::optional<Rat> n;
    ZonalOptions zonal;
};

SdpInstance assemble(const DistanceSet& d, unsigned t, const AssembleOptions& opt = {});

// Evaluate every coefficient of a symbolic instance at a fixed dimension.
SdpInstance instantiate(const SdpInstance& inst, const Rat& n);

// All ordered pairs (J, J2) of subsets of {0, ..., k-1} with J union J2
// equal to the whole set and both sizes at most t, in a fixed deterministic
// order.
std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> covering_pairs(size_t k,
                                                                                unsigned t);

// Lossless canonical JSON (symbolic-n capable): exact coefficient strings,
// stable key order, format version. The digest is the SHA-256 of the
// canonical document.
std::string instance_to_json(const SdpInstance& inst);
SdpInstance instance_from_json(const std::string& doc);
std::string instance_digest(const SdpInstance& inst);

// Sparse SDPA document. Values are kept as decimal strings so that writing
// and re-parsing is exact.
struct SdpaEntry {
    size_t con = 0;  // 0 is the objective
    size_t block = 0, row = 0, col = 0;  // 1-indexed
    std::string value;

    friend bool operator==(const SdpaEntry&, const SdpaEntry&) = default;
};

struct SdpaDocument {
    size_t m = 0;
    std::vector<long> block_sizes;  // negative size: diagonal block
    std::vector<std::string> rhs;
    std::vector<SdpaEntry> entries;

    friend bool operator==(const SdpaDocument&, const SdpaDocument&) = default;
};

std::string sdpa_to_string(const SdpaDocument& doc);
SdpaDocument parse_sdpa(const std::string& text);

// Encoding of a fixed-n instance: the solver's variable is the dual block
// matrix, inequalities gain slack entries in a final diagonal block, and the
// reported optimum of the instance equals minus the SDPA dual objective.
// Each constraint row is scaled by the power of n recorded in scale_exp
// (clearing the magnitude lost to its leading denominator) before printing
// with the requested number of significant decimal digits.
struct SdpaExport {
    SdpaDocument doc;
    std::string text;
    std::vector<long> scale_exp;
};

SdpaExport export_sdpa(const SdpInstance& inst, unsigned decimal_digits = 40);

// The fixed-n program with every inequality tightened by 1/n^k and every
// block eigenvalue floored at 1/n^k. k = 0 encodes the unperturbed limit.
struct PerturbedVariant {
    SdpInstance base;
    long k = 0;

    Rat shift() const;  // 1/n^k, zero at the sentinel
    // The floor constraint F >= shift * I substituted as F = G + shift * I:
    // same coefficients in the shifted variable G, right-hand sides reduced
    // by shift * (1 + trace of the row), objective offset raised by shift.
    SdpInstance solver_form() const;
};

PerturbedVariant perturb(const SdpInstance& inst, long k);

}  // namespace sphlas
