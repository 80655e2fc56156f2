"""Exact checks of the algebraic curvature identities."""
from __future__ import annotations

from dataclasses import dataclass, field

from flint import fmpq, fmpq_mat

from ..errors import InputError
from ..exact import GMat, GaussQ, encode_scalar, hstack, nullspace, zeros
from ..holctx import HolonomyContext
from ..tensors import multiset_index, pairs, subsets, sym_trace
from .curvature import CurvatureTensor, q_is_self_adjoint, q_of_R, symmetric_space_casimir
from .reps import rep_functor, symmetric, symmetric_traceless, tangent


@dataclass
class IdentityReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v for v in self.checks.values() if v is not None)

    def to_json(self):
        return {"ok": self.ok, "checks": self.checks, "details": self.details}


# ---------------------------------------------------------------- Sym^2_0 helpers

def _sym_to_matrix(m, mono):
    """Monomial coordinates of Sym^2 -> symmetric matrix H with p(x) = x^T H x."""
    idx = multiset_index(m, 2)
    H = zeros(m, m)
    for (i, j), k in idx.items():
        c = mono[k, 0]
        if i == j:
            H[i, i] = c
        else:
            H[i, j] = c / 2
            H[j, i] = c / 2
    return H


def _matrix_to_sym(m, H):
    idx = multiset_index(m, 2)
    v = zeros(len(idx), 1)
    for (i, j), k in idx.items():
        v[k, 0] = H[i, i] if i == j else 2 * H[i, j]
    return v


def r_ring(R: CurvatureTensor, H: fmpq_mat) -> fmpq_mat:
    """(R h)(X, Y) = sum_E h(R_{X,E} Y, E)."""
    m = R.m
    out = zeros(m, m)
    for x in range(m):
        for e in range(m):
            Rxe = R.R(x, e)
            for y in range(m):
                s = fmpq(0)
                for f in range(m):
                    if Rxe[f, y] != 0:
                        s += Rxe[f, y] * H[f, e]
                out[x, y] += s
    return out


def sym2_operators(R: CurvatureTensor):
    """Matrices of R-ring and Der_Ric = Ric h + h Ric on Sym^2 (monomial basis)."""
    m = R.m
    n = len(multiset_index(m, 2))
    Ric = R.ricci()
    ring_cols, der_cols = [], []
    for j in range(n):
        e = zeros(n, 1)
        e[j, 0] = 1
        H = _sym_to_matrix(m, e)
        ring_cols.append(_matrix_to_sym(m, r_ring(R, H)))
        der_cols.append(_matrix_to_sym(m, Ric * H + H * Ric))
    return hstack(ring_cols), hstack(der_cols)


# ---------------------------------------------------------------- Kaehler spin check

def _complex_of(ctx, A):
    """Complex n x n matrix of A in u(n) on the +i eigenspace span{e_2j - i e_2j+1}."""
    n = ctx.m // 2
    re = zeros(n, n)
    im = zeros(n, n)
    for k in range(n):
        for j in range(n):
            re[k, j] = A[2 * k, 2 * j]
            im[k, j] = -A[2 * k, 2 * j + 1]
    return GMat(re, im)


def _antiholomorphic_ops(n):
    """Wedge and contraction with w_j on Lambda(C^n), basis of subsets."""
    dim = 2 ** n
    basis = [s for k in range(n + 1) for s in subsets(n, k)]
    index = {s: i for i, s in enumerate(basis)}
    eps, iota = [], []
    for j in range(n):
        E = zeros(dim, dim)
        I = zeros(dim, dim)
        for c, s in enumerate(basis):
            if j not in s:
                t = tuple(sorted(s + (j,)))
                sign = (-1) ** t.index(j)
                E[index[t], c] = sign
            else:
                pos = s.index(j)
                I[index[s[:pos] + s[pos + 1:]], c] = (-1) ** pos
        eps.append(GMat(E))
        iota.append(GMat(I))
    return basis, eps, iota


def kaehler_spin_discrepancy(ctx: HolonomyContext):
    """pr(X^Y) acting as spinors minus pr(X^Y) acting on antiholomorphic forms.

    Returns a list of ((a, b), scalar) with the scalar multiple of the identity,
    or None for a pair where the difference is not scalar.
    """
    if ctx.kind != "U":
        raise InputError("the spin comparison needs a U(n) context")
    n = ctx.m // 2
    basis, eps, iota = _antiholomorphic_ops(n)
    dim = len(basis)

    def clifford_half(a):
        # X. = sqrt(2) c(X), c(X) = pr^{1,0}X^flat ^ - pr^{0,1}X contraction
        j, imag = divmod(a, 2)
        zeta = GaussQ(0, 1) if imag else GaussQ(1, 0)
        conj = GaussQ(zeta.re, -zeta.im)
        return eps[j] * GaussQ(zeta.re / 2, zeta.im / 2) - iota[j] * conj

    c = [clifford_half(a) for a in range(ctx.m)]

    def spin(A):
        # (e_a ^ e_b) acts as 1/2 e_a. e_b. = c(e_a) c(e_b)
        out = GMat.zeros(dim, dim)
        for a, b in pairs(ctx.m):
            x = A[b, a]
            if x != 0:
                out = out + c[a] * c[b] * x
        return out

    def forms(A):
        M = _complex_of(ctx, A)
        out = GMat.zeros(dim, dim)
        for j in range(n):
            for k in range(n):
                z = M.entry(k, j)
                if z.re != 0 or z.im != 0:
                    out = out + eps[k] * iota[j] * z
        return out

    results = []
    for a, b in pairs(ctx.m):
        A = ctx.project(ctx.bivector(a, b))
        D = spin(A) - forms(A)
        s = D.entry(0, 0)
        if D != GMat.eye(dim) * s:
            results.append(((a, b), None))
        else:
            results.append(((a, b), s))
    return results


def kaehler_expected(ctx, a, b) -> GaussQ:
    """-(i/2) g(J e_a, e_b)."""
    J = ctx.structure["J"]
    return GaussQ(0, -J[b, a] / 2)


# ---------------------------------------------------------------- report

def curvature_identities_check(ctx: HolonomyContext, R: CurvatureTensor,
                               reps=("t", "lambda:2", "sym0:2")) -> IdentityReport:
    rep = IdentityReport()
    c = rep.checks
    c["first_bianchi"] = R.satisfies_bianchi()
    c["pair_symmetry"] = R.pair_symmetric()
    Ric = R.ricci()
    c["ricci_symmetric"] = Ric == Ric.transpose()
    hol_ok = R.hol_valued(ctx)
    c["values_in_hol"] = hol_ok
    if hol_ok:
        T = tangent(ctx)
        c["q_on_T_is_ricci"] = q_of_R(ctx, T, R) == Ric
        sa = True
        for e in reps:
            V = rep_functor(ctx, e)
            Q = q_of_R(ctx, V, R)
            sa = sa and q_is_self_adjoint(V, Q)
        c["q_self_adjoint"] = sa
    torsion_free = R.torsion is None or R.torsion.is_zero()
    if hol_ok and torsion_free and c["first_bianchi"]:
        S2 = symmetric(ctx, 2)
        ring, der = sym2_operators(R)
        c["sym2_q_is_2ring_plus_der_ric"] = q_of_R(ctx, S2, R) == ring * 2 + der
        c["ring_symmetric"] = S2.gram * ring == ring.transpose() * S2.gram
        V = symmetric_traceless(ctx, 2)
        K = nullspace(sym_trace(ctx.m, 2))
        c["sym0_q_is_2ring_plus_der_ric"] = K * q_of_R(ctx, V, R) == (ring * 2 + der) * K
    if ctx.kind == "U":
        disc = kaehler_spin_discrepancy(ctx)
        ok = all(s is not None and s == kaehler_expected(ctx, *ab) for ab, s in disc)
        c["kaehler_spin_difference"] = ok
    if getattr(R, "k_data", None) is not None and torsion_free and ctx.kind == "SO":
        ok = True
        for e in reps:
            V = rep_functor(ctx, e)
            ok = ok and q_of_R(ctx, V, R) == symmetric_space_casimir(R, V)
        c["q_is_isotropy_casimir"] = ok
    rep.details["scalar_curvature"] = encode_scalar(R.scalar())
    return rep
