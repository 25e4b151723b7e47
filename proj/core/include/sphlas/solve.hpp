#pragma once

#include "sphlas/sdp.hpp"

#include <string>
#include <vector>

namespace sphlas {

struct SolveOptions {
    unsigned precision_bits = 256;
    // relative duality-gap and feasibility target, 10^-gap_digits
    unsigned gap_digits = 40;
    unsigned max_iterations = 300;
};

struct CentralPathPoint {
    unsigned iter = 0;
    MpFloat mu;
    MpFloat primal_objective;
    MpFloat dual_objective;
    MpFloat step_primal;
    MpFloat step_dual;
};

// A high-precision solution of the block program. blocks holds the matrix
// variable of the instance (one entry per instance block, slacks excluded);
// objective includes the instance's objective offset. Residuals are measured
// on the returned iterate, never assumed zero.
struct NumericSolution {
    bool converged = false;
    std::string status;  // "optimal", "max_iterations", "numerical_failure"
    std::vector<Matrix<MpFloat>> blocks;
    std::vector<MpFloat> slack;  // rhs minus row value, one per constraint
    std::vector<MpFloat> dual;   // nonnegative row multipliers
    MpFloat objective;
    MpFloat duality_gap;
    MpFloat primal_infeasibility;
    MpFloat dual_infeasibility;
    std::vector<CentralPathPoint> path;
    std::string provenance;
    unsigned precision_bits = 0;
};

// Dense primal-dual predictor-corrector interior-point method. Deterministic
// for identical inputs and options. Inequalities are handled through an
// internal diagonal slack block, so the iterates stay on the central path of
// the equality-form program.
NumericSolution solve_embedded(const SdpInstance& inst, const SolveOptions& opt = {});

// Bridge to a solver consuming the sparse SDPA input format. command is a
// template whose {input} and {output} placeholders are substituted with file
// paths; when empty, the SPHLAS_SDPA_SOLVER environment variable and then
// "sdpa {input} {output}" are tried. workdir empty means a fresh temporary
// directory.
struct ExternalSolver {
    std::string command;
    std::string workdir;
    unsigned decimal_digits = 40;
};

NumericSolution solve_external(const SdpInstance& inst, const ExternalSolver& cfg = {});

}  // namespace sphlas
