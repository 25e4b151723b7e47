#include "sphlas/solve.hpp"

#include "sphlas/cache.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

namespace sphlas {

namespace {

using Blocks = std::vector<Matrix<MpFloat>>;

MpFloat mdot(const Matrix<MpFloat>& a, const Matrix<MpFloat>& b) {
    MpFloat s = 0;
    for (size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

MpFloat bdot(const Blocks& a, const Blocks& b) {
    MpFloat s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += mdot(a[k], b[k]);
    return s;
}

Matrix<MpFloat> symmetrize(const Matrix<MpFloat>& a) {
    Matrix<MpFloat> s(a.rows, a.cols);
    MpFloat half = MpFloat(1) / 2;
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) s(i, j) = (a(i, j) + a(j, i)) * half;
    return s;
}

bool is_pd(const Matrix<MpFloat>& a) {
    Matrix<MpFloat> l;
    return cholesky(a, l);
}

bool blocks_pd(const Blocks& x) {
    for (const auto& b : x)
        if (b.rows > 0 && !is_pd(b)) return false;
    return true;
}

Blocks baxpy(const Blocks& x, const MpFloat& a, const Blocks& d) {
    Blocks out = x;
    for (size_t k = 0; k < out.size(); ++k)
        for (size_t i = 0; i < out[k].data.size(); ++i) out[k].data[i] += a * d[k].data[i];
    return out;
}

// largest step in (0, 1] keeping x + a * d positive definite; the smallest
// eigenvalue is concave along the segment, so backtracking from 1 is sound
MpFloat step_length(const Blocks& x, const Blocks& d) {
    MpFloat a = 1;
    if (blocks_pd(baxpy(x, a, d))) return a;
    MpFloat shrink = MpFloat(4) / 5;
    MpFloat margin = MpFloat(49) / 50;
    MpFloat floor = MpFloat(1) / MpFloat(1e30);
    while (a > floor) {
        a *= shrink;
        if (blocks_pd(baxpy(x, a, d))) return a * margin;
    }
    return 0;
}

bool chol_inverse(const Matrix<MpFloat>& a, Matrix<MpFloat>& inv) {
    Matrix<MpFloat> l;
    if (!cholesky(a, l)) return false;
    size_t n = a.rows;
    inv = Matrix<MpFloat>(n, n);
    std::vector<MpFloat> e(n, MpFloat(0));
    for (size_t k = 0; k < n; ++k) {
        e[k] = 1;
        std::vector<MpFloat> col = cholesky_solve(l, e);
        for (size_t i = 0; i < n; ++i) inv(i, k) = col[i];
        e[k] = 0;
    }
    return true;
}

struct PivotLu {
    Matrix<MpFloat> lu;
    std::vector<size_t> perm;
    bool singular = false;

    explicit PivotLu(Matrix<MpFloat> a) : lu(std::move(a)) {
        size_t n = lu.rows;
        perm.resize(n);
        for (size_t i = 0; i < n; ++i) perm[i] = i;
        for (size_t k = 0; k < n; ++k) {
            size_t p = k;
            for (size_t i = k + 1; i < n; ++i)
                if (abs(lu(i, k)) > abs(lu(p, k))) p = i;
            if (lu(p, k) == 0) {
                singular = true;
                return;
            }
            if (p != k) {
                for (size_t j = 0; j < n; ++j) std::swap(lu(p, j), lu(k, j));
                std::swap(perm[p], perm[k]);
            }
            MpFloat inv = MpFloat(1) / lu(k, k);
            for (size_t i = k + 1; i < n; ++i) {
                MpFloat f = lu(i, k) * inv;
                lu(i, k) = f;
                for (size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            }
        }
    }

    std::vector<MpFloat> solve(const std::vector<MpFloat>& b) const {
        size_t n = lu.rows;
        std::vector<MpFloat> y(n);
        for (size_t i = 0; i < n; ++i) {
            y[i] = b[perm[i]];
            for (size_t j = 0; j < i; ++j) y[i] -= lu(i, j) * y[j];
        }
        for (size_t i = n; i-- > 0;) {
            for (size_t j = i + 1; j < n; ++j) y[i] -= lu(i, j) * y[j];
            y[i] /= lu(i, i);
        }
        return y;
    }
};

// smallest power-of-two diagonal shift making the matrix pass a Cholesky
// test; zero when it is already positive semidefinite up to working precision
MpFloat psd_defect(const Matrix<MpFloat>& a) {
    if (a.rows == 0 || is_pd(a)) return 0;
    MpFloat shift = MpFloat(1) / MpFloat(1e60);
    for (int tries = 0; tries < 260; ++tries) {
        Matrix<MpFloat> s = a;
        for (size_t i = 0; i < s.rows; ++i) s(i, i) += shift;
        if (is_pd(s)) return shift;
        shift *= 2;
    }
    return shift;
}

}  // namespace

NumericSolution solve_embedded(const SdpInstance& inst, const SolveOptions& opt) {
    if (inst.symbolic)
        throw std::invalid_argument("embedded solver requires a fixed dimension; instantiate first");
    set_mpfloat_bits(opt.precision_bits);

    const size_t m = inst.constraints.size();
    const size_t nb = inst.blocks.size();
    const bool has_slack = m > 0;
    std::vector<size_t> dims;
    for (const auto& blk : inst.blocks) dims.push_back(blk.size);
    if (has_slack) dims.push_back(m);
    const size_t NB = dims.size();
    size_t total = 0;
    for (size_t d : dims) total += d;

    NumericSolution sol;
    sol.precision_bits = opt.precision_bits;
    sol.provenance = "embedded interior point";

    auto zero_blocks = [&]() {
        Blocks out;
        for (size_t d : dims) out.emplace_back(d, d);
        return out;
    };

    Blocks C = zero_blocks();
    C[inst.objective_block](inst.objective_row, inst.objective_row) = 1;
    const MpFloat nf = to_mpfloat(inst.n);
    std::vector<Blocks> A(m);
    std::vector<MpFloat> b(m);
    MpFloat data_max = 10;
    for (size_t i = 0; i < m; ++i) {
        A[i] = zero_blocks();
        const SdpConstraint& con = inst.constraints[i];
        for (size_t k = 0; k < nb; ++k)
            for (size_t r = 0; r < con.coeff[k].rows; ++r)
                for (size_t c = 0; c < con.coeff[k].cols; ++c) {
                    A[i][k](r, c) = con.coeff[k](r, c).eval_float(nf);
                    MpFloat mag = abs(A[i][k](r, c));
                    if (mag > data_max) data_max = mag;
                }
        A[i][NB - 1](i, i) = 1;
        b[i] = to_mpfloat(con.rhs);
        if (abs(b[i]) > data_max) data_max = abs(b[i]);
    }
    const MpFloat offset = to_mpfloat(inst.objective_offset);

    if (m == 0) {
        sol.converged = true;
        sol.status = "optimal";
        for (size_t k = 0; k < nb; ++k) sol.blocks.emplace_back(dims[k], dims[k]);
        sol.objective = offset;
        sol.duality_gap = 0;
        sol.primal_infeasibility = 0;
        sol.dual_infeasibility = 0;
        return sol;
    }

    MpFloat tol = 1;
    for (unsigned i = 0; i < opt.gap_digits; ++i) tol /= 10;

    Blocks X = zero_blocks(), Z = zero_blocks();
    for (size_t k = 0; k < NB; ++k)
        for (size_t i = 0; i < dims[k]; ++i) {
            X[k](i, i) = data_max;
            Z[k](i, i) = data_max;
        }
    std::vector<MpFloat> y(m, MpFloat(0));

    auto finish = [&](bool ok, const std::string& status, const MpFloat& gap, const MpFloat& pinf,
                      const MpFloat& dinf) {
        sol.converged = ok;
        sol.status = status;
        sol.blocks.assign(X.begin(), X.begin() + static_cast<long>(nb));
        for (size_t i = 0; i < m; ++i) {
            MpFloat row = 0;
            for (size_t k = 0; k < nb; ++k) row += mdot(A[i][k], X[k]);
            sol.slack.push_back(b[i] - row);
            sol.dual.push_back(-y[i]);
        }
        sol.objective = bdot(C, X) + offset;
        sol.duality_gap = gap;
        sol.primal_infeasibility = pinf;
        sol.dual_infeasibility = dinf;
        sol.provenance += ", " + std::to_string(opt.precision_bits) + " bits, " +
                          std::to_string(sol.path.size()) + " iterations";
        return sol;
    };

    MpFloat last_ap = 0, last_ad = 0;
    for (unsigned iter = 0; iter < opt.max_iterations; ++iter) {
        std::vector<MpFloat> rp(m);
        for (size_t i = 0; i < m; ++i) rp[i] = b[i] - bdot(A[i], X);
        Blocks Rd = C;
        for (size_t k = 0; k < NB; ++k)
            for (size_t i = 0; i < dims[k]; ++i)
                for (size_t j = 0; j < dims[k]; ++j) {
                    MpFloat acc = Rd[k](i, j) - Z[k](i, j);
                    for (size_t q = 0; q < m; ++q) acc -= y[q] * A[q][k](i, j);
                    Rd[k](i, j) = acc;
                }

        MpFloat gap = bdot(X, Z);
        MpFloat mu = gap / total;
        MpFloat pobj = bdot(C, X);
        MpFloat dobj = 0;
        for (size_t i = 0; i < m; ++i) dobj += b[i] * y[i];
        MpFloat pinf = 0, dinf = 0;
        for (size_t i = 0; i < m; ++i)
            if (abs(rp[i]) > pinf) pinf = abs(rp[i]);
        for (size_t k = 0; k < NB; ++k)
            for (const auto& v : Rd[k].data)
                if (abs(v) > dinf) dinf = abs(v);
        pinf /= 1 + data_max;
        dinf /= 1 + data_max;
        MpFloat relgap = abs(gap) / (1 + abs(pobj) + abs(dobj));

        sol.path.push_back({iter, mu, pobj + offset, dobj + offset, last_ap, last_ad});
        if (relgap < tol && pinf < tol && dinf < tol)
            return finish(true, "optimal", gap, pinf, dinf);

        Blocks Zinv = zero_blocks();
        bool ok = true;
        for (size_t k = 0; k < NB; ++k) ok = ok && chol_inverse(Z[k], Zinv[k]);
        if (!ok) return finish(false, "numerical_failure", gap, pinf, dinf);

        // Schur complement M(i, j) = <A_i, X A_j Zinv>
        std::vector<Blocks> T(m);
        for (size_t j = 0; j < m; ++j) {
            T[j] = zero_blocks();
            for (size_t k = 0; k < NB; ++k) T[j][k] = X[k] * A[j][k] * Zinv[k];
        }
        Matrix<MpFloat> M(m, m);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) M(i, j) = bdot(A[i], T[j]);
        PivotLu lu(M);
        if (lu.singular) return finish(false, "numerical_failure", gap, pinf, dinf);

        auto direction = [&](const MpFloat& nu, const Blocks* corr, std::vector<MpFloat>& dy,
                             Blocks& dX, Blocks& dZ) {
            Blocks W = zero_blocks();
            for (size_t k = 0; k < NB; ++k) {
                Matrix<MpFloat> u = X[k] * Rd[k];
                if (corr) u = u + (*corr)[k];
                W[k] = u * Zinv[k];
            }
            std::vector<MpFloat> rhs(m);
            for (size_t i = 0; i < m; ++i) {
                MpFloat v = b[i];
                for (size_t k = 0; k < NB; ++k)
                    v += mdot(A[i][k], W[k]) - nu * mdot(A[i][k], Zinv[k]);
                rhs[i] = v;
            }
            dy = lu.solve(rhs);
            dZ = Rd;
            for (size_t k = 0; k < NB; ++k)
                for (size_t i = 0; i < dims[k]; ++i)
                    for (size_t j = 0; j < dims[k]; ++j) {
                        MpFloat acc = dZ[k](i, j);
                        for (size_t q = 0; q < m; ++q) acc -= dy[q] * A[q][k](i, j);
                        dZ[k](i, j) = acc;
                    }
            dX = zero_blocks();
            for (size_t k = 0; k < NB; ++k) {
                Matrix<MpFloat> u = X[k] * dZ[k];
                if (corr) u = u + (*corr)[k];
                dX[k] = symmetrize(Zinv[k] * nu - X[k] - u * Zinv[k]);
            }
        };

        // predictor
        std::vector<MpFloat> dy_a;
        Blocks dX_a, dZ_a;
        direction(MpFloat(0), nullptr, dy_a, dX_a, dZ_a);
        MpFloat ap = step_length(X, dX_a);
        MpFloat ad = step_length(Z, dZ_a);
        if (ap == 0 || ad == 0) return finish(false, "numerical_failure", gap, pinf, dinf);
        MpFloat mu_aff = bdot(baxpy(X, ap, dX_a), baxpy(Z, ad, dZ_a)) / total;
        MpFloat sigma = (mu_aff / mu);
        sigma = sigma * sigma * sigma;
        if (sigma > 1) sigma = 1;

        // corrector with the second-order term dX_a dZ_a
        Blocks corr = zero_blocks();
        for (size_t k = 0; k < NB; ++k) corr[k] = dX_a[k] * dZ_a[k];
        std::vector<MpFloat> dy;
        Blocks dX, dZ;
        direction(sigma * mu, &corr, dy, dX, dZ);
        ap = step_length(X, dX);
        ad = step_length(Z, dZ);
        if (ap == 0 || ad == 0) return finish(false, "numerical_failure", gap, pinf, dinf);

        X = baxpy(X, ap, dX);
        Z = baxpy(Z, ad, dZ);
        for (size_t k = 0; k < NB; ++k) {
            X[k] = symmetrize(X[k]);
            Z[k] = symmetrize(Z[k]);
        }
        for (size_t i = 0; i < m; ++i) y[i] += ad * dy[i];
        last_ap = ap;
        last_ad = ad;
    }

    std::vector<MpFloat> rp(m);
    MpFloat pinf = 0;
    for (size_t i = 0; i < m; ++i) {
        rp[i] = b[i] - bdot(A[i], X);
        if (abs(rp[i]) > pinf) pinf = abs(rp[i]);
    }
    return finish(false, "max_iterations", bdot(X, Z), pinf / (1 + data_max), MpFloat(0));
}

namespace {

// nested brace list of floats, e.g. { {1, 2}, {3} }
struct BraceNode {
    std::vector<BraceNode> kids;
    std::vector<MpFloat> values;
};

BraceNode parse_braces(const std::string& s, size_t& pos) {
    while (pos < s.size() && (isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
        ++pos;
    if (pos >= s.size() || s[pos] != '{') throw std::invalid_argument("malformed solver matrix");
    ++pos;
    BraceNode node;
    std::string num;
    auto flush = [&]() {
        if (!num.empty()) {
            node.values.emplace_back(num);
            num.clear();
        }
    };
    while (pos < s.size()) {
        char c = s[pos];
        if (c == '{') {
            node.kids.push_back(parse_braces(s, pos));
        } else if (c == '}') {
            flush();
            ++pos;
            return node;
        } else if (c == ',' || isspace(static_cast<unsigned char>(c))) {
            flush();
            ++pos;
        } else {
            num += c;
            ++pos;
        }
    }
    throw std::invalid_argument("unbalanced braces in solver output");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Matrix<MpFloat> node_to_matrix(const BraceNode& node, size_t dim, bool diagonal) {
    Matrix<MpFloat> out(dim, dim);
    if (diagonal) {
        if (node.values.size() != dim)
            throw std::invalid_argument("diagonal block size mismatch in solver output");
        for (size_t i = 0; i < dim; ++i) out(i, i) = node.values[i];
        return out;
    }
    if (node.kids.size() != dim)
        throw std::invalid_argument("block size mismatch in solver output");
    for (size_t i = 0; i < dim; ++i) {
        if (node.kids[i].values.size() != dim)
            throw std::invalid_argument("block row size mismatch in solver output");
        for (size_t j = 0; j < dim; ++j) out(i, j) = node.kids[i].values[j];
    }
    return out;
}

}  // namespace

NumericSolution solve_external(const SdpInstance& inst, const ExternalSolver& cfg) {
    if (inst.symbolic)
        throw std::invalid_argument("external solver requires a fixed dimension; instantiate first");
    set_mpfloat_bits(256);

    std::string cmd = cfg.command;
    if (cmd.empty()) {
        const char* env = std::getenv("SPHLAS_SDPA_SOLVER");
        cmd = env ? env : "sdpa {input} {output}";
    }
    if (cmd.find("{input}") == std::string::npos || cmd.find("{output}") == std::string::npos)
        throw std::invalid_argument("solver command template must mention {input} and {output}");

    namespace fs = std::filesystem;
    fs::path dir = cfg.workdir.empty()
                       ? fs::temp_directory_path() / ("sphlas-solve-" + std::to_string(::getpid()))
                       : fs::path(cfg.workdir);
    fs::create_directories(dir);
    fs::path input = dir / "problem.dat-s";
    fs::path output = dir / "solution.out";
    fs::path log = dir / "solver.log";
    std::error_code ec;
    fs::remove(output, ec);

    SdpaExport ex = export_sdpa(inst, cfg.decimal_digits);
    atomic_write_file(input.string(), ex.text);

    std::string full = cmd;
    auto substitute = [&full](const std::string& key, const std::string& value) {
        size_t at;
        while ((at = full.find(key)) != std::string::npos) full.replace(at, key.size(), value);
    };
    substitute("{input}", input.string());
    substitute("{output}", output.string());
    full += " > " + log.string() + " 2>&1";

    int rc = std::system(full.c_str());
    int exit_code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    if (exit_code == 127)
        throw std::runtime_error("external solver not found; configure the command template or "
                                 "SPHLAS_SDPA_SOLVER (ran: " + full + ")");
    if (exit_code != 0)
        throw std::runtime_error("external solver exited with code " + std::to_string(exit_code) +
                                 " (ran: " + full + ")");
    if (!fs::exists(output))
        throw std::runtime_error("external solver produced no output file: " + output.string());

    std::string text = slurp(output);

    NumericSolution sol;
    sol.provenance = full + "\noutput sha256: " + sha256_hex(text);
    sol.precision_bits = 0;

    auto find_value = [&](const std::string& name) -> std::string {
        size_t at = text.find(name);
        if (at == std::string::npos)
            throw std::invalid_argument("solver output lacks " + name);
        at = text.find('=', at);
        if (at == std::string::npos) throw std::invalid_argument("malformed " + name);
        ++at;
        while (at < text.size() && isspace(static_cast<unsigned char>(text[at]))) ++at;
        size_t end = at;
        while (end < text.size() && !isspace(static_cast<unsigned char>(text[end]))) ++end;
        return text.substr(at, end - at);
    };

    MpFloat pobj(find_value("objValPrimal"));
    MpFloat dobj(find_value("objValDual"));

    size_t at = text.find("yMat");
    if (at == std::string::npos) throw std::invalid_argument("solver output lacks yMat");
    at = text.find('=', at);
    if (at == std::string::npos) throw std::invalid_argument("malformed yMat");
    ++at;
    BraceNode ymat = parse_braces(text, at);

    const size_t m = inst.constraints.size();
    const size_t nb = inst.blocks.size();
    if (ymat.kids.size() != nb + (m > 0 ? 1 : 0))
        throw std::invalid_argument("solver output block count mismatch");
    for (size_t k = 0; k < nb; ++k)
        sol.blocks.push_back(node_to_matrix(ymat.kids[k], inst.blocks[k].size, false));

    std::vector<MpFloat> xvec;
    if (m > 0) {
        size_t xat = text.find("xVec");
        if (xat == std::string::npos) throw std::invalid_argument("solver output lacks xVec");
        xat = text.find('=', xat);
        ++xat;
        BraceNode node = parse_braces(text, xat);
        if (node.values.size() != m)
            throw std::invalid_argument("solver output xVec length mismatch");
        xvec = node.values;
    }

    // scale factors restore the multipliers of the unscaled rows
    std::vector<MpFloat> scale(m, MpFloat(1));
    MpFloat nf = to_mpfloat(inst.n);
    for (size_t i = 0; i < m; ++i)
        for (long j = 0; j < ex.scale_exp[i]; ++j) scale[i] *= nf;

    MpFloat pinf = 0;
    for (size_t i = 0; i < m; ++i) {
        MpFloat row = 0;
        for (size_t k = 0; k < nb; ++k) {
            const auto& coeff = inst.constraints[i].coeff[k];
            for (size_t r = 0; r < coeff.rows; ++r)
                for (size_t c = 0; c < coeff.cols; ++c)
                    row += coeff(r, c).eval_float(nf) * sol.blocks[k](r, c);
        }
        MpFloat s = to_mpfloat(inst.constraints[i].rhs) - row;
        sol.slack.push_back(s);
        sol.dual.push_back(xvec[i] * scale[i]);
        if (-s > pinf) pinf = -s;
    }

    // dual feasibility of the original rows: objective matrix plus the
    // multiplied coefficients must be positive semidefinite
    MpFloat dinf = 0;
    for (size_t k = 0; k < nb; ++k) {
        Matrix<MpFloat> D(inst.blocks[k].size, inst.blocks[k].size);
        if (k == inst.objective_block) D(inst.objective_row, inst.objective_row) = 1;
        for (size_t i = 0; i < m; ++i) {
            const auto& coeff = inst.constraints[i].coeff[k];
            for (size_t r = 0; r < coeff.rows; ++r)
                for (size_t c = 0; c < coeff.cols; ++c)
                    D(r, c) += sol.dual[i] * coeff(r, c).eval_float(nf);
        }
        MpFloat defect = psd_defect(D);
        if (defect > dinf) dinf = defect;
    }

    sol.objective = -dobj + to_mpfloat(inst.objective_offset);
    sol.duality_gap = abs(pobj - dobj);
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    size_t phase = text.find("phase.value");
    bool opt_phase = true;
    if (phase != std::string::npos) {
        std::string v = find_value("phase.value");
        opt_phase = v == "pdOPT";
    }
    sol.converged = opt_phase && sol.duality_gap < MpFloat(1) / MpFloat(1e6);
    sol.status = sol.converged ? "optimal" : "external solver did not report optimality";
    return sol;
}

}  // namespace sphlas
