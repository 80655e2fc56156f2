"""Algebraic curvature tensors, torsion, and the curvature endomorphism q(R).

A curvature tensor is stored as an operator on Lambda^2 = so(m) in the
orthonormal basis e_a ^ e_b (a < b):  the column of e_a ^ e_b holds the
bivector coordinates of R_{e_a, e_b}.  Hence
R(X, Y, Z, W) = g(R_{X,Y} Z, W) = <R(X ^ Y), Z ^ W>.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from flint import fmpq, fmpq_mat

from ..errors import InputError, StructuralError
from ..exact import (GMat, commutator, encode_matrix, hstack, nullspace,
                     q, trace, zeros)
from ..holctx import HolonomyContext
from ..tensors import biv_coords, biv_inner, bivector, from_biv_coords, pair_index, pairs
from .reps import MatrixRep


def _pidx(m, a, b):
    """(sign, column) of e_a ^ e_b."""
    if a == b:
        return 0, None
    if a < b:
        return 1, pair_index(m)[(a, b)]
    return -1, pair_index(m)[(b, a)]


@dataclass(eq=False)
class TorsionForm:
    """T(e_a, e_b) stored as vectors; values[a][b] is an m x 1 matrix."""

    m: int
    values: list

    @classmethod
    def zero(cls, m):
        return cls(m, [[zeros(m, 1) for _ in range(m)] for _ in range(m)])

    @classmethod
    def from_bracket(cls, basis_vectors_bracket, m, scale):
        vals = [[basis_vectors_bracket(a, b) * scale for b in range(m)] for a in range(m)]
        return cls(m, vals)

    def __call__(self, a, b) -> fmpq_mat:
        return self.values[a][b]

    def is_zero(self) -> bool:
        return all(v == zeros(self.m, 1) for row in self.values for v in row)

    def is_skew_3form(self) -> bool:
        """g(T(X, Y), Z) totally skew."""
        m = self.m
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    x = self.values[a][b][c, 0]
                    if x != -self.values[b][a][c, 0] or x != -self.values[a][c][b, 0]:
                        return False
        return True

    def gtt(self, a, b, c, d) -> fmpq:
        """1/2 g(T ^ T)(X, Y, Z, W) = g(T(X,Y), T(Z,W)) + g(T(Y,Z), T(X,W)) + g(T(Z,X), T(Y,W))."""
        T = self.values

        def g(u, v):
            return sum((x * y for x, y in zip(u.entries(), v.entries())), fmpq(0))

        return g(T[a][b], T[c][d]) + g(T[b][c], T[a][d]) + g(T[c][a], T[b][d])


@dataclass(eq=False)
class CurvatureTensor:
    m: int
    op: fmpq_mat
    torsion: TorsionForm | None = None
    name: str = "R"
    _cache: dict = field(default_factory=dict, repr=False)

    # ------------------------------------------------------------ access
    def value(self, A: fmpq_mat) -> fmpq_mat:
        """R applied to a bivector given as a skew matrix."""
        return from_biv_coords(self.m, self.op * biv_coords(A))

    def R(self, a: int, b: int) -> fmpq_mat:
        """Skew matrix R_{e_a, e_b}."""
        key = ("R", a, b)
        if key not in self._cache:
            s, j = _pidx(self.m, a, b)
            if not s:
                self._cache[key] = zeros(self.m, self.m)
            else:
                col = fmpq_mat(self.op.nrows(), 1, [self.op[i, j] * s for i in range(self.op.nrows())])
                self._cache[key] = from_biv_coords(self.m, col)
        return self._cache[key]

    def r4(self, a, b, c, d) -> fmpq:
        s1, i = _pidx(self.m, a, b)
        s2, j = _pidx(self.m, c, d)
        if not s1 or not s2:
            return fmpq(0)
        return self.op[j, i] * s1 * s2

    def ricci(self) -> fmpq_mat:
        """Ric(X, Y) = sum_mu R(X, e_mu, e_mu, Y)."""
        if "ric" not in self._cache:
            m = self.m
            Ric = zeros(m, m)
            for a in range(m):
                for b in range(m):
                    Ric[a, b] = sum((self.r4(a, u, u, b) for u in range(m)), fmpq(0))
            self._cache["ric"] = Ric
        return self._cache["ric"]

    def scalar(self) -> fmpq:
        return trace(self.ricci())

    def sym_matrix(self, ctx: HolonomyContext) -> fmpq_mat:
        """<X_a, R X_b> in the stored hol basis."""
        d = ctx.dim
        M = zeros(d, d)
        for j, Y in enumerate(ctx.basis):
            RY = self.value(Y)
            for i, X in enumerate(ctx.basis):
                M[i, j] = biv_inner(X, RY)
        return M

    # ------------------------------------------------------------ arithmetic
    def __add__(self, other):
        return CurvatureTensor(self.m, self.op + other.op, _add_torsion(self.torsion, other.torsion))

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        return CurvatureTensor(self.m, self.op * q(c), self.torsion)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CurvatureTensor) and self.op == other.op

    # ------------------------------------------------------------ properties
    def pair_symmetric(self) -> bool:
        return self.op == self.op.transpose()

    def bianchi_defect(self) -> list:
        """Cyclic sum R(X,Y,Z,W)+R(Y,Z,X,W)+R(Z,X,Y,W) - 1/2 g(T^T)(X,Y,Z,W), nonzero entries."""
        m = self.m
        T = self.torsion
        bad = []
        for a in range(m):
            for b in range(a + 1, m):
                for c in range(b + 1, m):
                    for d in range(m):
                        s = self.r4(a, b, c, d) + self.r4(b, c, a, d) + self.r4(c, a, b, d)
                        if T is not None:
                            s -= T.gtt(a, b, c, d)
                        if s != 0:
                            bad.append(((a, b, c, d), s))
        return bad

    def satisfies_bianchi(self) -> bool:
        return not self.bianchi_defect()

    def hol_valued(self, ctx: HolonomyContext) -> bool:
        P = ctx.pr_hol
        return P * self.op == self.op

    def to_json(self) -> dict:
        return {"m": self.m, "name": self.name, "operator": encode_matrix(self.op),
                "torsion_free": self.torsion is None or self.torsion.is_zero()}


def _add_torsion(s, t):
    if s is None or t is None or s.is_zero() or t.is_zero():
        return s if t is None or t.is_zero() else t
    raise InputError("cannot add curvature tensors carrying torsion")


def from_endomorphisms(m: int, Rab, torsion=None, name="R") -> CurvatureTensor:
    """Build from a function (a, b) -> skew matrix R_{e_a, e_b}."""
    cols = [biv_coords(Rab(a, b)) for a, b in pairs(m)]
    return CurvatureTensor(m, hstack(cols), torsion, name)


# ---------------------------------------------------------------- curvature derivative

@dataclass(eq=False)
class CurvatureDerivative:
    """nabla R: components[l] is nabla_{e_l} R."""

    m: int
    components: list

    def divergence(self, lam: int) -> fmpq_mat:
        """(delta R)_{e_lam} = -sum_mu (nabla_mu R)_{e_mu, e_lam}, a skew matrix."""
        out = zeros(self.m, self.m)
        for mu in range(self.m):
            out -= self.components[mu].R(mu, lam)
        return out

    def second_bianchi_defect(self) -> list:
        m = self.m
        bad = []
        for a in range(m):
            for b in range(a + 1, m):
                for c in range(b + 1, m):
                    S = self.components[a].R(b, c) + self.components[b].R(c, a) + \
                        self.components[c].R(a, b)
                    if S != zeros(m, m):
                        bad.append((a, b, c))
        return bad

    def to_json(self):
        return {"m": self.m, "components": [encode_matrix(c.op) for c in self.components]}


# ---------------------------------------------------------------- q(R)

def _hol_coeffs(ctx, A):
    return ctx.coefficients(A)


def q_of_R(ctx: HolonomyContext, rep: MatrixRep, R: CurvatureTensor, check: bool = True):
    """q(R) = 1/2 sum_{a,b} pr(e_a ^ e_b)* R(e_a ^ e_b)*, cross-checked against
    sum_alpha X_alpha* R(X_alpha)* / |X_alpha|^2.
    """
    if R.m != ctx.m:
        raise InputError("curvature tensor and context have different dimensions")
    if not R.hol_valued(ctx):
        raise InputError("curvature tensor does not take values in hol")
    m, n = ctx.m, rep.dim
    out = GMat.zeros(n, n) if rep.complex else zeros(n, n)
    for a, b in pairs(m):
        Rab = R.R(a, b)
        if Rab == zeros(m, m):
            continue
        out = out + rep.P(a, b) * rep.act(Rab)
    if check:
        alt = GMat.zeros(n, n) if rep.complex else zeros(n, n)
        for X, A, nrm in zip(ctx.basis, rep.action, ctx.norms):
            RX = R.value(X)
            if RX != zeros(m, m):
                alt = alt + A * rep.act(RX) * (1 / nrm)
        if alt != out:
            raise StructuralError("the two expressions for q(R) disagree")
    return out


def q_is_self_adjoint(rep: MatrixRep, Q) -> bool:
    if rep.complex:
        return rep.gram * Q == Q.conj_transpose() * rep.gram
    return rep.gram * Q == Q.transpose() * rep.gram


# ---------------------------------------------------------------- models

def constant(ctx: HolonomyContext, c) -> CurvatureTensor:
    """Sectional curvature c for so(m): R = -c pr_hol on Lambda^2."""
    return CurvatureTensor(ctx.m, ctx.pr_hol * (-q(c)), None, f"constant({c})")


@lru_cache(maxsize=None)
def _curvature_basis(ctx: HolonomyContext) -> tuple:
    """Basis of K(hol) = algebraic curvature tensors with values in hol."""
    d = ctx.dim
    sym = [(i, j) for i in range(d) for j in range(i, d)]
    X = [biv_coords(Y) for Y in ctx.basis]
    ops = []
    for i, j in sym:
        M = X[i] * X[j].transpose()
        if i != j:
            M = M + X[j] * X[i].transpose()
        ops.append(M)
    m = ctx.m
    cols = []
    for M in ops:
        R = CurvatureTensor(m, M)
        col = []
        for a in range(m):
            for b in range(a + 1, m):
                for c in range(b + 1, m):
                    for e in range(c + 1, m):
                        col.append(R.r4(a, b, c, e) + R.r4(b, c, a, e) + R.r4(c, a, b, e))
        cols.append(col)
    if not cols[0]:
        return tuple(ops)
    A = fmpq_mat(len(cols[0]), len(cols), [cols[k][r] for r in range(len(cols[0]))
                                           for k in range(len(cols))])
    K = nullspace(A)
    out = []
    for j in range(K.ncols()):
        M = zeros(ctx.nbiv, ctx.nbiv)
        for k in range(len(ops)):
            if K[k, j] != 0:
                M += ops[k] * K[k, j]
        out.append(M)
    return tuple(out)


def curvature_space_dimension(ctx: HolonomyContext) -> int:
    return len(_curvature_basis(ctx))


def random_bianchi(ctx: HolonomyContext, seed: int, bound: int = 3) -> CurvatureTensor:
    """Random algebraic curvature tensor with values in hol (small integer coefficients)."""
    rng = random.Random(seed)
    m = ctx.m
    if ctx.kind == "SO":
        N = ctx.nbiv
        S = zeros(N, N)
        for i in range(N):
            for j in range(i, N):
                x = rng.randint(-bound, bound)
                S[i, j] = x
                S[j, i] = x
        R = CurvatureTensor(m, S)
        return _bianchi_project(R)
    basis = _curvature_basis(ctx)
    M = zeros(ctx.nbiv, ctx.nbiv)
    for B in basis:
        M += B * rng.randint(-bound, bound)
    return CurvatureTensor(m, M, None, f"random_bianchi({seed})")


def _bianchi_project(R: CurvatureTensor) -> CurvatureTensor:
    """R - b(R) with b(R)(X,Y,Z,W) = 1/3 (cyclic sum); for pair-symmetric R."""
    m = R.m

    def Rab(a, b):
        M = zeros(m, m)
        for c in range(m):
            for d in range(m):
                if c == d:
                    continue
                cyc = R.r4(a, b, c, d) + R.r4(b, c, a, d) + R.r4(c, a, b, d)
                M[d, c] = R.r4(a, b, c, d) - cyc / 3
        return M

    return from_endomorphisms(m, Rab, None, "random_bianchi")


def kaehler_const_hol_sec(ctx: HolonomyContext, c) -> CurvatureTensor:
    """Constant holomorphic sectional curvature c on a U(n) context."""
    if ctx.kind != "U":
        raise InputError("kaehler_const_hol_sec needs a U(n) context")
    J = ctx.structure["J"]
    m = ctx.m
    c = q(c) / 4

    def e(i):
        return fmpq_mat(m, 1, [int(j == i) for j in range(m)])

    def Rab(a, b):
        X, Y = e(a), e(b)
        JX, JY = J * X, J * Y
        gxjy = (X.transpose() * JY)[0, 0]
        # Z -> g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY + 2 g(X,JY) JZ
        M = X * Y.transpose() - Y * X.transpose() + JX * JY.transpose() - JY * JX.transpose() \
            + J * (2 * gxjy)
        return M * c

    return from_endomorphisms(m, Rab, None, f"kaehler({c * 4})")


def lie_group(t, algebra: str = "su2"):
    """Bi-invariant metric on a compact Lie group with nabla_X Y = t [X, Y].

    R_{X,Y} Z = (t^2 - t) [[X, Y], Z],  T(X, Y) = (2t - 1) [X, Y].
    """
    t = q(t)
    m, bracket = _lie_algebra(algebra)

    def Rab(a, b):
        M = zeros(m, m)
        xy = bracket(a, b)
        for z in range(m):
            v = zeros(m, 1)
            for k in range(m):
                if xy[k, 0] != 0:
                    v += bracket(k, z) * xy[k, 0]
            for w in range(m):
                M[w, z] = v[w, 0] * (t * t - t)
        return M

    tor = TorsionForm(m, [[bracket(a, b) * (2 * t - 1) for b in range(m)] for a in range(m)])
    return from_endomorphisms(m, Rab, tor, f"lie_group({algebra}, t={t})")


def _lie_algebra(name):
    """Orthonormal basis and bracket of a compact Lie algebra with ad-invariant metric."""
    if name == "su2":
        m = 3
        eps = {(0, 1): (2, 1), (1, 2): (0, 1), (2, 0): (1, 1)}

        def br(a, b):
            v = zeros(m, 1)
            if (a, b) in eps:
                k, s = eps[(a, b)]
                v[k, 0] = s
            elif (b, a) in eps:
                k, s = eps[(b, a)]
                v[k, 0] = -s
            return v

        return m, br
    raise InputError(f"unknown compact Lie algebra {name!r}")


def _inner_mat(A, B, scale):
    return biv_inner(A, B) / scale


def _matrix_homogeneous(g_basis, k_basis, p_basis, scale, torsion: bool, name):
    """Reductive model g = k + p inside so(N); p orthonormal for <,>/scale.

    R_{X,Y} Z = -[[X,Y]_k, Z] and T(X,Y) = -[X,Y]_p (canonical connection).
    """
    m = len(p_basis)
    k_norms = [biv_inner(K, K) for K in k_basis]

    def split(A):
        Ak = zeros(A.nrows(), A.ncols())
        for K, n in zip(k_basis, k_norms):
            c = biv_inner(A, K) / n
            if c != 0:
                Ak += K * c
        return Ak, A - Ak

    def pcoords(A):
        return fmpq_mat(m, 1, [_inner_mat(A, P, scale) for P in p_basis])

    def Rab(a, b):
        Xk, _ = split(commutator(p_basis[a], p_basis[b]))
        M = zeros(m, m)
        for z in range(m):
            v = pcoords(-commutator(Xk, p_basis[z]))
            for w in range(m):
                M[w, z] = v[w, 0]
        return M

    tor = None
    if torsion:
        vals = [[-pcoords(split(commutator(p_basis[a], p_basis[b]))[1]) for b in range(m)]
                for a in range(m)]
        tor = TorsionForm(m, vals)
    R = from_endomorphisms(m, Rab, tor, name)
    R.k_data = (k_basis, k_norms, p_basis, scale)
    return R


def _in_span(A, basis) -> bool:
    if A == zeros(A.nrows(), A.ncols()):
        return True
    B = hstack([biv_coords(X) for X in basis]) if basis else None
    if B is None:
        return False
    v = biv_coords(A)
    return B.rank() == hstack([B, v]).rank()


def symmetric_pair(k_basis, p_basis, name="G/K") -> CurvatureTensor:
    """Curvature of the symmetric space with isotropy algebra k and tangent space p,
    both given as skew matrices in some so(N); p must be orthonormal for -1/2 tr."""
    if not p_basis:
        raise InputError("a symmetric pair needs a non-empty p")
    for P in p_basis:
        for K in k_basis:
            if biv_inner(P, K) != 0:
                raise InputError("k and p are not orthogonal")
            if not _in_span(commutator(K, P), p_basis):
                raise InputError("[k, p] is not contained in p")
        for Q in p_basis:
            if not _in_span(commutator(P, Q), k_basis):
                raise InputError("[p, p] is not contained in k")
    for i, P in enumerate(p_basis):
        for j, Q in enumerate(p_basis):
            if biv_inner(P, Q) != (1 if i == j else 0):
                raise InputError("p basis is not orthonormal")
    for K in k_basis:
        for L in k_basis:
            if not _in_span(commutator(K, L), k_basis):
                raise InputError("k is not a subalgebra")
    return _matrix_homogeneous(None, list(k_basis), list(p_basis), fmpq(1), False, name)


def sphere(m: int) -> CurvatureTensor:
    """Round S^m = SO(m+1)/SO(m)."""
    N = m + 1
    p = [bivector(N, 0, i) for i in range(1, N)]
    k = [bivector(N, a, b) for a in range(1, N) for b in range(a + 1, N)]
    return _matrix_homogeneous(None, k, p, fmpq(1), False, f"sphere({m})")


def real_grassmannian(k: int, n: int) -> CurvatureTensor:
    """Oriented Grassmannian SO(n)/SO(k)xSO(n-k), dimension k(n-k)."""
    p = [bivector(n, i, j) for i in range(k) for j in range(k, n)]
    kb = [bivector(n, a, b) for a in range(n) for b in range(a + 1, n)
          if (a < k) == (b < k)]
    return _matrix_homogeneous(None, kb, p, fmpq(1), False, f"Gr({k},{n})")


def stiefel(n: int) -> CurvatureTensor:
    """SO(n)/SO(n-2) with the normal metric and its canonical connection (skew torsion)."""
    p = [bivector(n, 0, 1)] + [bivector(n, i, j) for i in (0, 1) for j in range(2, n)]
    kb = [bivector(n, a, b) for a in range(2, n) for b in range(a + 1, n)]
    return _matrix_homogeneous(None, kb, p, fmpq(1), True, f"SO({n})/SO({n - 2})")


def nearly_kaehler_s6() -> CurvatureTensor:
    """G2/SU(3) with its canonical hermitian connection (parallel skew torsion)."""
    from ..holctx import g2
    ctx = g2()
    e0 = fmpq_mat(7, 1, [1, 0, 0, 0, 0, 0, 0])
    # k = stabiliser of e_0 in g2
    cols = [X * e0 for X in ctx.basis]
    A = hstack(cols)
    K = nullspace(A)
    k_mats = []
    for j in range(K.ncols()):
        M = zeros(7, 7)
        for i, X in enumerate(ctx.basis):
            if K[i, j] != 0:
                M += X * K[i, j]
        k_mats.append(M)
    from ..exact import gram_schmidt
    vecs, _ = gram_schmidt([biv_coords(M) for M in k_mats])
    k_basis = [from_biv_coords(7, v) for v in vecs]
    # p: the element of g2 orthogonal to k sending e_0 to e_i
    p_basis = []
    for i in range(1, 7):
        target = fmpq_mat(7, 1, [int(j == i) for j in range(7)])
        # unknown coefficients c with (sum c_a X_a) e0 = target, orthogonal to k
        rows = [[(X * e0)[r, 0] for X in ctx.basis] for r in range(7)]
        rhs = [target[r, 0] for r in range(7)]
        for Kb in k_basis:
            rows.append([biv_inner(X, Kb) for X in ctx.basis])
            rhs.append(0)
        M = fmpq_mat(rows)
        sol = (M.transpose() * M).solve(M.transpose() * fmpq_mat(len(rhs), 1, rhs))
        P = zeros(7, 7)
        for a, X in enumerate(ctx.basis):
            P += X * sol[a, 0]
        if P * e0 != target:
            raise StructuralError("could not lift tangent vectors of S^6 to g2")
        p_basis.append(P)
    scale = biv_inner(p_basis[0], p_basis[0])
    for a, P in enumerate(p_basis):
        for b, Q in enumerate(p_basis):
            if biv_inner(P, Q) != (scale if a == b else 0):
                raise StructuralError("isotropy lift is not conformal")
    return _matrix_homogeneous(None, k_basis, p_basis, scale, True, "G2/SU(3)")


def symmetric_space_casimir(R: CurvatureTensor, rep: MatrixRep):
    """k-Casimir -sum rho(ad K)^2 / |K|^2 for a symmetric-space model, with the
    invariant form restricted from g (scaled so that p is orthonormal)."""
    k_basis, k_norms, p_basis, scale = R.k_data
    m = R.m
    n = rep.dim
    if rep.extend is None:
        raise InputError("symmetric-space Casimir needs a representation of so(m)")
    C = zeros(n, n)
    for K, nrm in zip(k_basis, k_norms):
        ad = zeros(m, m)
        for z in range(m):
            v = commutator(K, p_basis[z])
            for w in range(m):
                ad[w, z] = biv_inner(v, p_basis[w]) / scale
        A = rep.extend(ad)
        C -= (A * A) * (scale / nrm)
    return C


def curvature_model(kind: str, ctx: HolonomyContext | None = None, **kw) -> CurvatureTensor:
    """Dispatch by name: constant, symmetric_space, kaehler_const_hol_sec,
    random_bianchi, lie_group, normal_homogeneous."""
    if kind == "constant":
        return constant(ctx, kw.get("c", 1))
    if kind == "random_bianchi":
        return random_bianchi(ctx, kw.get("seed", 0))
    if kind == "kaehler_const_hol_sec":
        return kaehler_const_hol_sec(ctx, kw.get("c", 1))
    if kind == "lie_group":
        return lie_group(kw.get("t", 0), kw.get("algebra", "su2"))
    if kind == "symmetric_space":
        which = kw.get("space", "sphere")
        if which == "sphere":
            return sphere(kw["m"])
        if which == "grassmannian":
            return real_grassmannian(kw["k"], kw["n"])
        if which == "matrices":
            return symmetric_pair(kw["k_basis"], kw["p_basis"], kw.get("name", "G/K"))
        raise InputError(f"unknown symmetric space {which!r}")
    if kind == "normal_homogeneous":
        which = kw.get("space", "stiefel")
        if which == "stiefel":
            return stiefel(kw["n"])
        if which == "s6":
            return nearly_kaehler_s6()
        raise InputError(f"unknown homogeneous space {which!r}")
    raise InputError(f"unknown curvature model {kind!r}")
