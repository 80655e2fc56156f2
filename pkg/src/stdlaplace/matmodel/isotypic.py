"""Convention-free isotypic decomposition of rational representations.

Casimir eigenspaces are split further by the centre of the commutant, so
constituents sharing a Casimir eigenvalue (e.g. the two chiral halves for
so(4)) are separated without reference to any weight convention.
"""
from __future__ import annotations

import random

from flint import fmpq_mat

from ..errors import StructuralError
from ..exact import (eye, hstack, minpoly_factors, nullspace, poly_eval_matrix, rank_mod_p,
                     restrict, zeros)


def _commutant_system(gens, d):
    """Rows of the linear system A M - M A = 0 on row-major vec(M)."""
    rows = []
    for A in gens:
        a = A.tolist()
        nz = [[(k, a[i][k]) for k in range(d) if a[i][k] != 0] for i in range(d)]
        nzc = [[(k, a[k][j]) for k in range(d) if a[k][j] != 0] for j in range(d)]
        for i in range(d):
            for j in range(d):
                row = [0] * (d * d)
                for k, x in nz[i]:
                    row[k * d + j] += x
                for k, x in nzc[j]:
                    row[i * d + k] -= x
                rows.append(row)
    return fmpq_mat(rows)


def _generic_generators(action, rng, count=2):
    gens = []
    for _ in range(count):
        G = zeros(action[0].nrows(), action[0].ncols())
        for A in action:
            G += A * rng.randint(-7, 7)
        gens.append(G)
    return gens


def commutant(action) -> list:
    """Basis of {M : M A = A M for all A in action}."""
    d = action[0].nrows()
    rng = random.Random(20240611 + d)
    gens = _generic_generators(action, rng)
    K = nullspace(_commutant_system(gens, d))
    mats = [fmpq_mat(d, d, [K[r, j] for r in range(d * d)]) for j in range(K.ncols())]
    if any(M * A != A * M for M in mats for A in action):
        K = nullspace(_commutant_system(list(action), d))
        mats = [fmpq_mat(d, d, [K[r, j] for r in range(d * d)]) for j in range(K.ncols())]
    return mats


def commutant_dimension_bound(action) -> int:
    """Upper bound on dim of the commutant from a modular rank computation."""
    d = action[0].nrows()
    rng = random.Random(7 + d)
    gens = _generic_generators(action, rng)
    return d * d - rank_mod_p(_commutant_system(gens, d))


def _centre(mats) -> list:
    k = len(mats)
    if k <= 1:
        return mats
    d = mats[0].nrows()
    cols = []
    for Mi in mats:
        col = []
        for Mj in mats:
            col.extend((Mi * Mj - Mj * Mi).entries())
        cols.append(col)
    A = fmpq_mat(len(cols[0]), k, [cols[j][r] for r in range(len(cols[0])) for j in range(k)])
    K = nullspace(A)
    out = []
    for j in range(K.ncols()):
        Z = zeros(d, d)
        for i in range(k):
            if K[i, j] != 0:
                Z += mats[i] * K[i, j]
        out.append(Z)
    return out


def _split_eigenspace(U, action, depth=0):
    d = U.ncols()
    if d <= 1:
        return [U]
    res = [restrict(U, A) for A in action]
    if commutant_dimension_bound(res) <= 1:
        return [U]
    centre = _centre(commutant(res))
    if len(centre) <= 1:
        return [U]
    rng = random.Random(99 + depth)
    for _ in range(6):
        z = zeros(d, d)
        for Z in centre:
            z += Z * rng.randint(-9, 9)
        facs = minpoly_factors(z)
        if len(facs) > 1:
            out = []
            for f in facs:
                K = nullspace(poly_eval_matrix(f, z))
                out.extend(_split_eigenspace(U * K, action, depth + 1))
            return out
        if facs and facs[0].degree() == len(centre):
            return [U]  # the centre is a field: one rational isotypic component
    raise StructuralError("could not separate isotypic components")


def isotypic_components(casimir: fmpq_mat, action) -> list:
    """List of (casimir eigenvalue factor, basis matrix) for each component.

    Components are ordered by the Casimir factor and then by the basis.
    """
    out = []
    facs = minpoly_factors(casimir)
    facs.sort(key=lambda f: [c for c in f.coeffs()])
    for f in facs:
        K = nullspace(poly_eval_matrix(f, casimir))
        for U in _split_eigenspace(K, action):
            out.append((f, U))
    return out


def component_projectors(components, n) -> list:
    """Projectors along the decomposition and coordinate maps sigma_i."""
    B = hstack([U for _, U in components])
    if B.ncols() != n:
        raise StructuralError("isotypic components do not span the space")
    Binv = B.inv()
    projs, sigmas = [], []
    k = 0
    for _, U in components:
        d = U.ncols()
        S = fmpq_mat(d, n, [Binv[k + i, j] for i in range(d) for j in range(n)])
        sigmas.append(S)
        projs.append(U * S)
        k += d
    total = zeros(n, n)
    for P in projs:
        total += P
    if total != eye(n):
        raise StructuralError("isotypic projectors do not sum to the identity")
    return projs, sigmas
