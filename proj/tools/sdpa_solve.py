#!/usr/bin/env python3
"""Reference solver for sparse SDPA input files.

Reads the standard sparse format (m, block count, block sizes with negative
sizes marking diagonal blocks, right-hand side, then "k b i j v" entries with
k = 0 for the objective) and runs a dense predictor-corrector interior-point
method in float64. The result file mimics the classic solver output fields:
phase.value, objValPrimal, objValDual, xVec, xMat, yMat.
"""

import sys

import numpy as np


def parse_sdpa(text):
    tokens = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped[0] in "*\"":
            continue
        for ch in ",{}()":
            line = line.replace(ch, " ")
        tokens.extend(line.split())
    pos = 0

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    m = int(take())
    nblocks = int(take())
    sizes = [int(take()) for _ in range(nblocks)]
    rhs = np.array([float(take()) for _ in range(m)])
    dims = [abs(s) for s in sizes]
    f0 = [np.zeros((d, d)) for d in dims]
    fs = [[np.zeros((d, d)) for d in dims] for _ in range(m)]
    while pos + 5 <= len(tokens):
        k, b, i, j = int(take()), int(take()), int(take()), int(take())
        v = float(take())
        target = f0 if k == 0 else fs[k - 1]
        target[b - 1][i - 1, j - 1] = v
        target[b - 1][j - 1, i - 1] = v
    if pos != len(tokens):
        raise ValueError("trailing tokens in input")
    return m, sizes, rhs, f0, fs


def is_pd(mat):
    if mat.size == 0:
        return True
    try:
        np.linalg.cholesky(mat)
        return True
    except np.linalg.LinAlgError:
        return False


def step_length(blocks, deltas):
    alpha = 1.0
    if all(is_pd(b + alpha * d) for b, d in zip(blocks, deltas)):
        return alpha
    while alpha > 1e-18:
        alpha *= 0.8
        if all(is_pd(b + alpha * d) for b, d in zip(blocks, deltas)):
            return alpha * 0.98
    return 0.0


def solve(m, sizes, rhs, f0, fs, tol=1e-11, max_iter=100):
    # minimize <-F0, Y> subject to <F_i, Y> = rhs_i, Y psd; the SDPA primal
    # variables are recovered as x = -y and X = Z
    dims = [abs(s) for s in sizes]
    total = sum(dims)
    cmat = [-b for b in f0]
    amats = fs
    data_max = max(
        [10.0]
        + [float(np.max(np.abs(b))) for b in cmat if b.size]
        + [float(np.max(np.abs(b))) for row in amats for b in row if b.size]
        + [float(np.max(np.abs(rhs))) if m else 0.0]
    )
    X = [np.eye(d) * data_max for d in dims]
    Z = [np.eye(d) * data_max for d in dims]
    y = np.zeros(m)

    def bdot(a, b):
        return sum(float(np.tensordot(p, q)) for p, q in zip(a, b))

    status = "pdFEAS"
    for _ in range(max_iter):
        rp = rhs - np.array([bdot(a, X) for a in amats])
        Rd = [c - z - sum(y[q] * amats[q][k] for q in range(m)) for k, (c, z) in enumerate(zip(cmat, Z))]
        gap = bdot(X, Z)
        mu = gap / total
        pobj = bdot(cmat, X)
        dobj = float(rhs @ y)
        relgap = abs(gap) / (1 + abs(pobj) + abs(dobj))
        pinf = float(np.max(np.abs(rp))) / (1 + data_max) if m else 0.0
        dinf = max(float(np.max(np.abs(r))) for r in Rd) / (1 + data_max)
        if relgap < tol and pinf < tol and dinf < tol:
            status = "pdOPT"
            break
        Zinv = [np.linalg.inv(z) for z in Z]
        T = [[X[k] @ amats[j][k] @ Zinv[k] for k in range(len(dims))] for j in range(m)]
        M = np.array([[bdot(amats[i], T[j]) for j in range(m)] for i in range(m)])

        def direction(nu, corr):
            W = []
            for k in range(len(dims)):
                u = X[k] @ Rd[k]
                if corr is not None:
                    u = u + corr[k]
                W.append(u @ Zinv[k])
            r = np.array(
                [rhs[i] + bdot(amats[i], W) - nu * bdot(amats[i], Zinv) for i in range(m)]
            )
            dy = np.linalg.solve(M, r)
            dZ = [Rd[k] - sum(dy[q] * amats[q][k] for q in range(m)) for k in range(len(dims))]
            dX = []
            for k in range(len(dims)):
                u = X[k] @ dZ[k]
                if corr is not None:
                    u = u + corr[k]
                d = nu * Zinv[k] - X[k] - u @ Zinv[k]
                dX.append((d + d.T) / 2)
            return dy, dX, dZ

        dy_a, dX_a, dZ_a = direction(0.0, None)
        ap = step_length(X, dX_a)
        ad = step_length(Z, dZ_a)
        if ap == 0 or ad == 0:
            status = "noINFO"
            break
        mu_aff = bdot(
            [x + ap * d for x, d in zip(X, dX_a)], [z + ad * d for z, d in zip(Z, dZ_a)]
        ) / total
        sigma = min(1.0, (mu_aff / mu) ** 3)
        corr = [dX_a[k] @ dZ_a[k] for k in range(len(dims))]
        dy, dX, dZ = direction(sigma * mu, corr)
        ap = step_length(X, dX)
        ad = step_length(Z, dZ)
        if ap == 0 or ad == 0:
            status = "noINFO"
            break
        X = [(x + ap * d + (x + ap * d).T) / 2 for x, d in zip(X, dX)]
        Z = [(z + ad * d + (z + ad * d).T) / 2 for z, d in zip(Z, dZ)]
        y = y + ad * dy

    pobj_sdpa = float(-(rhs @ y))
    dobj_sdpa = float(-bdot(cmat, X))
    return status, pobj_sdpa, dobj_sdpa, -y, Z, X


def fmt(v):
    return "%.16e" % v


def emit_block(out, mat, size):
    if size < 0:
        out.write("{" + ",".join(fmt(mat[i, i]) for i in range(-size)) + "}\n")
        return
    out.write("{ ")
    rows = ["{" + ",".join(fmt(mat[i, j]) for j in range(size)) + "}" for i in range(size)]
    out.write(",\n  ".join(rows))
    out.write(" }\n")


def main():
    if len(sys.argv) != 3:
        sys.stderr.write("usage: sdpa_solve.py input output\n")
        return 2
    with open(sys.argv[1]) as f:
        m, sizes, rhs, f0, fs = parse_sdpa(f.read())
    if m == 0:
        status, pobj, dobj = "pdOPT", 0.0, 0.0
        xvec = np.zeros(0)
        xmat = [np.zeros((abs(s), abs(s))) for s in sizes]
        ymat = [np.zeros((abs(s), abs(s))) for s in sizes]
    else:
        status, pobj, dobj, xvec, xmat, ymat = solve(m, sizes, rhs, f0, fs)
    with open(sys.argv[2], "w") as out:
        out.write("phase.value  = %s\n" % status)
        out.write("objValPrimal = %s\n" % fmt(pobj))
        out.write("objValDual   = %s\n" % fmt(dobj))
        out.write("xVec = \n{" + ",".join(fmt(v) for v in xvec) + "}\n")
        out.write("xMat = \n{\n")
        for mat, size in zip(xmat, sizes):
            emit_block(out, mat, size)
        out.write("}\n")
        out.write("yMat = \n{\n")
        for mat, size in zip(ymat, sizes):
            emit_block(out, mat, size)
        out.write("}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
