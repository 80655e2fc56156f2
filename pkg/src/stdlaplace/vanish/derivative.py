"""The space of covariant derivatives of curvature tensors with values in hol.

nabla R at a point is an element of T (x) K(hol) killed by the second Bianchi map
T (x) K -> Lambda^3 T (x) Lambda^2 T.  Its kernel is a hol-submodule; the
constituents of that kernel are the weights a vanishing criterion has to test.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from flint import fmpq, fmpq_mat, nmod_mat

from .. import liealg
from ..errors import InputError, StructuralError
from ..exact import PRIMES, eye, kron, nullspace, zeros
from ..holctx import HolonomyContext
from ..matmodel.curvature import CurvatureDerivative, CurvatureTensor, _curvature_basis
from ..matmodel.reps import MatrixRep, label_component
from ..tensors import pair_index, wedge_action


@dataclass(eq=False)
class CurvatureModule:
    """K(hol) with a basis of curvature operators and the induced hol action."""

    ctx: HolonomyContext
    basis: tuple           # operators on Lambda^2
    action: list           # dim K x dim K matrix per basis element of hol
    rows: list             # pivot entries used for coordinates
    inverse: fmpq_mat

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, op: fmpq_mat) -> fmpq_mat:
        N = op.nrows()
        v = fmpq_mat(len(self.rows), 1, [op[r // N, r % N] for r in self.rows])
        return self.inverse * v

    def rep(self) -> MatrixRep:
        # the invariant inner product is not needed for labelling
        return MatrixRep(self.ctx, "K", self.action, eye(self.dim))


def _flat(op: fmpq_mat) -> list:
    return op.entries()


@lru_cache(maxsize=None)
def curvature_module(ctx: HolonomyContext) -> CurvatureModule:
    basis = _curvature_basis(ctx)
    d = len(basis)
    if d == 0:
        raise InputError(f"{ctx.name} admits no curvature tensors")
    N = basis[0].nrows()
    flat = [_flat(B) for B in basis]
    Mt = fmpq_mat(d, N * N, [x for f in flat for x in f])
    R, r = Mt.rref()
    rows, i = [], 0
    for j in range(N * N):
        if i < r and R[i, j] != 0:
            rows.append(j)
            i += 1
    if len(rows) != d:
        raise StructuralError("curvature basis is not independent")
    S = fmpq_mat(d, d, [flat[k][rows[i]] for i in range(d) for k in range(d)])
    inv = S.inv()
    action = []
    for X in ctx.basis:
        W = wedge_action(X, 2)
        cols = []
        for B in basis:
            img = W * B - B * W
            cols.append([img[r // N, r % N] for r in rows])
        V = fmpq_mat(d, d, [cols[k][i] for i in range(d) for k in range(d)])
        action.append(inv * V)
    return CurvatureModule(ctx, basis, action, rows, inv)


def second_bianchi_matrix(ctx: HolonomyContext) -> fmpq_mat:
    """Matrix of T (x) K -> Lambda^3 (x) Lambda^2, column index lam * dim K + j."""
    K = curvature_module(ctx)
    m, d, N = ctx.m, K.dim, ctx.nbiv
    idx = pair_index(m)
    triples = [(a, b, c) for a in range(m) for b in range(a + 1, m) for c in range(b + 1, m)]
    M = zeros(len(triples) * N, m * d)
    for t, (a, b, c) in enumerate(triples):
        # (nabla_a R)(b,c) + (nabla_b R)(c,a) + (nabla_c R)(a,b)
        terms = ((a, idx[(b, c)], 1), (b, idx[(a, c)], -1), (c, idx[(a, b)], 1))
        for lam, col, sign in terms:
            for j, B in enumerate(K.basis):
                for p in range(N):
                    x = B[p, col]
                    if x != 0:
                        M[t * N + p, lam * d + j] += sign * x
    return M


def derivative_space(ctx: HolonomyContext) -> fmpq_mat:
    """Exact basis (columns in T (x) K coordinates) of the possible nabla R."""
    return nullspace(second_bianchi_matrix(ctx))


def derivative_from_vector(ctx: HolonomyContext, v) -> CurvatureDerivative:
    K = curvature_module(ctx)
    d, N = K.dim, ctx.nbiv
    comps = []
    for lam in range(ctx.m):
        op = zeros(N, N)
        for j, B in enumerate(K.basis):
            x = v[lam * d + j, 0]
            if x != 0:
                op += B * x
        comps.append(CurvatureTensor(ctx.m, op, None, f"nabla_{lam} R"))
    return CurvatureDerivative(ctx.m, comps)


def random_curvature_derivative(ctx: HolonomyContext, seed: int, bound: int = 3,
                                space: fmpq_mat | None = None) -> CurvatureDerivative:
    """A random solution of the second Bianchi identity with values in hol."""
    rng = random.Random(seed)
    S = space if space is not None else derivative_space(ctx)
    v = zeros(S.nrows(), 1)
    for j in range(S.ncols()):
        c = rng.randint(-bound, bound)
        if c:
            for i in range(S.nrows()):
                if S[i, j] != 0:
                    v[i, 0] += S[i, j] * c
    dR = derivative_from_vector(ctx, v)
    if dR.second_bianchi_defect():
        raise StructuralError("sampled curvature derivative violates second Bianchi")
    return dR


def tensor_casimir(ctx: HolonomyContext) -> fmpq_mat:
    """Casimir of T (x) K, exactly."""
    K = curvature_module(ctx)
    m, d = ctx.m, K.dim
    n = m * d
    C = zeros(n, n)
    for X, A, nrm in zip(ctx.basis, K.action, ctx.norms):
        G = kron(X, eye(d)) + kron(eye(m), A)
        C -= G * G / nrm
    return C


# ---------------------------------------------------------------- modular analysis

def _mod(x: fmpq, p: int) -> int:
    return int(x.p) * pow(int(x.q), -1, p) % p


def _np_mod(M: fmpq_mat, p: int) -> np.ndarray:
    r, c = M.nrows(), M.ncols()
    out = np.zeros((r, c), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            x = M[i, j]
            if x != 0:
                out[i, j] = _mod(x, p)
    return out


def _tensor_casimir_mod(ctx: HolonomyContext, p: int) -> np.ndarray:
    """Cas_T (x) 1 + 1 (x) Cas_K - 2 sum_a w_a X_a (x) A_a, reduced mod p."""
    K = curvature_module(ctx)
    m, d = ctx.m, K.dim
    acts = [_np_mod(A, p) for A in K.action]
    ws = [_mod(1 / n, p) for n in ctx.norms]
    cas_k = np.zeros((d, d), dtype=np.int64)
    for A, w in zip(acts, ws):
        cas_k = (cas_k - w * _matmul_mod(A, A, p)) % p
    cas_t = _np_mod(ctx.casimir(ctx.basis), p)
    C = np.zeros((m * d, m * d), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            blk = np.zeros((d, d), dtype=np.int64)
            for X, A, w in zip(ctx.basis, acts, ws):
                x = X[a, b]
                if x != 0:
                    blk = (blk + (_mod(x, p) * w % p) * A) % p
            blk = (-2 * blk) % p
            if a == b:
                blk = (blk + cas_k) % p
            blk[np.arange(d), np.arange(d)] = (blk[np.arange(d), np.arange(d)] + cas_t[a, b]) % p
            C[a * d:(a + 1) * d, b * d:(b + 1) * d] = blk
    return C


def _matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    # split B into 16-bit halves so int64 products never overflow
    lo = B & 0xFFFF
    hi = B >> 16
    out_lo = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    out_hi = np.zeros_like(out_lo)
    step = 64
    for k in range(0, A.shape[1], step):
        a = A[:, k:k + step]
        out_lo = (out_lo + a @ lo[k:k + step]) % p
        out_hi = (out_hi + a @ hi[k:k + step]) % p
    return (out_lo + (out_hi * 65536) % p) % p


@dataclass
class DerivativeWeights:
    """Constituents of the space of nabla R, found by Casimir eigenspaces mod p."""

    context: str
    dim_tk: int
    dim_kernel: int
    k_weights: tuple
    summands: tuple          # ((hw, mult), ...)
    prime: int

    def weights(self) -> list:
        return [w for w, _ in self.summands]

    def to_json(self) -> dict:
        return {"context": self.context, "dim_T_x_K": self.dim_tk, "dim": self.dim_kernel,
                "K": [list(w) for w in self.k_weights],
                "summands": [{"hw": list(w), "mult": m} for w, m in self.summands],
                "method": f"second Bianchi kernel, Casimir eigenspaces mod {self.prime}",
                "derived": True}


def _k_weights(ctx):
    lab = label_component(ctx, curvature_module(ctx).rep())
    if lab is None or lab[1] != 1:
        raise InputError(f"K({ctx.name}) is not irreducible; pass its weights explicitly")
    return tuple(lab[0])


def derivative_weights(ctx: HolonomyContext, k_weights=None, p: int = PRIMES[0]) -> DerivativeWeights:
    """Highest weights (and multiplicities) of the space of possible nabla R."""
    if p >= 2 ** 31:
        raise InputError("the modular Casimir needs a prime below 2^31")
    K = curvature_module(ctx)
    spec = ctx.liealg_spec
    kw = tuple(k_weights) if k_weights is not None else _k_weights(ctx)
    n = ctx.m * K.dim
    beta = second_bianchi_matrix(ctx)
    num, _ = beta.numer_denom()
    X, nullity = nmod_mat(num.tolist(), p).nullspace()
    nullity = int(nullity)
    basis = np.array([[int(X[i, j]) for j in range(nullity)] for i in range(n)], dtype=np.int64)
    CK = _matmul_mod(_tensor_casimir_mod(ctx, p), basis, p)

    cands = {}
    for t in ctx.t_weights:
        for k in kw:
            for w, mult in liealg.tensor_decompose(spec, t, k).summands:
                cands[w] = cands.get(w, 0) + mult
    groups = {}
    for w in cands:
        c = liealg.casimir_l2(spec, w, ctx.embedding_scale)
        groups.setdefault(c, []).append(w)
    found = []
    total = 0
    for c, ws in sorted(groups.items()):
        cm = _mod(fmpq(c.numerator, c.denominator), p)
        M = (CK - cm * basis) % p
        r = int(nmod_mat(M.tolist(), p).rank()) if nullity else 0
        dim_c = nullity - r
        total += dim_c
        if dim_c:
            found.extend(_split_dimension(spec, ws, cands, dim_c))
    if total != nullity:
        raise StructuralError("Casimir eigenspaces do not fill the derivative space")
    summ = tuple(sorted(found))
    return DerivativeWeights(ctx.name, n, nullity, kw, summ, p)


def _split_dimension(spec, ws, bounds, dim_c):
    """Unique multiplicities m_w <= bounds[w] with sum m_w dim(w) = dim_c (duals paired)."""
    dims = [liealg.dimension(spec, w) for w in ws]
    sols = []
    for ms in product(*[range(bounds[w] + 1) for w in ws]):
        if sum(m * d for m, d in zip(ms, dims)) != dim_c:
            continue
        mm = dict(zip(ws, ms))
        if any(mm.get(liealg.dual_hw(spec, w), m) != m for w, m in mm.items()):
            continue
        sols.append(ms)
    if len(sols) != 1:
        raise StructuralError("Casimir eigenvalue does not determine the constituents")
    return [(w, m) for w, m in zip(ws, sols[0]) if m]
