"""Generalized gradients: isotypic targets of T (x) V and their conformal weights."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from flint import fmpq, fmpq_mat

from ..errors import InputError, StructuralError
from ..exact import encode_scalar, eye, zeros
from .isotypic import component_projectors
from ..tensors import exterior_left, interior_matrix
from .reps import MatrixRep, components, exterior, label_component, tangent, tensor


@dataclass(eq=False)
class GradientSpec:
    """One isotypic component V_eps of T (x) V, or an equivariant map T (x) V -> W.

    projector: P_eps on T (x) V (index a * dim V + v); None for a map.
    sigma:     coordinates T (x) V -> V_eps, with projector = basis * sigma.
    basis:     columns spanning V_eps inside T (x) V; None for a map.
    target:    V_eps (or W) as a representation in its own right.
    """

    source: MatrixRep
    index: int
    projector: fmpq_mat
    sigma: fmpq_mat
    basis: fmpq_mat
    target: MatrixRep
    labels: tuple | None
    multiplicity: int | None

    name: str | None = None

    @property
    def dim(self) -> int:
        return self.sigma.nrows()

    def symbol(self, a: int) -> fmpq_mat:
        """sigma(e_a (x) .): V -> V_eps."""
        n = self.source.dim
        return fmpq_mat(self.dim, n, [self.sigma[i, a * n + j] for i in range(self.dim)
                                      for j in range(n)])

    def label(self) -> str:
        if self.name:
            return self.name
        if not self.labels:
            return f"eps{self.index}"
        body = "+".join("[" + ",".join(map(str, w)) + "]" for w in self.labels)
        return body if not self.multiplicity or self.multiplicity == 1 else \
            f"{self.multiplicity}x{body}"


def _check_rep(V: MatrixRep):
    if V.complex:
        raise InputError("gradient targets are computed for real representations")
    if len(V.action) != V.ctx.dim:
        raise InputError("representation does not match the holonomy context")
    if not V.is_consistent():
        raise InputError("matrices do not define a representation of hol")


def gradient_targets(V: MatrixRep, check: bool = True) -> list:
    """Isotypic decomposition of T (x) V with projectors summing to the identity."""
    if check:
        _check_rep(V)
    ctx = V.ctx
    TV = tensor(tangent(ctx), V)
    comps = components(TV)
    projs, sigmas = component_projectors(comps, TV.dim)
    out = []
    for k, ((f, U), P, S) in enumerate(zip(comps, projs, sigmas)):
        action = [S * A * U for A in TV.action]
        target = MatrixRep(ctx, f"{V.name}_eps{k}", action, U.transpose() * TV.gram * U)
        lab = label_component(ctx, target)
        labels, mult = (lab if lab else (None, None))
        target.labels = labels
        if not (P * P == P and TV.gram * P == P.transpose() * TV.gram):
            raise StructuralError("isotypic projector is not an orthogonal idempotent")
        out.append(GradientSpec(V, k, P, S, U, target, labels, mult))
    return out


def gradient_from_map(V: MatrixRep, sigma: fmpq_mat, target: MatrixRep, name: str,
                      check: bool = True) -> GradientSpec:
    """Gradient defined by an explicit equivariant map T (x) V -> target."""
    m = V.ctx.m
    if sigma.nrows() != target.dim or sigma.ncols() != m * V.dim:
        raise InputError("symbol has the wrong shape for T (x) V -> target")
    if check:
        TV = tensor(tangent(V.ctx), V)
        for A, B in zip(TV.action, target.action):
            if sigma * A != B * sigma:
                raise InputError(f"symbol of {name} is not hol-equivariant")
    return GradientSpec(V, -1, None, sigma, None, target, target.labels, None, name)


def _stack_slices(slices, rows, n):
    S = zeros(rows, len(slices) * n)
    for a, blk in enumerate(slices):
        for i in range(rows):
            for j in range(n):
                x = blk[i, j]
                if x != 0:
                    S[i, a * n + j] = x
    return S


def wedge_gradient(ctx, p: int) -> GradientSpec:
    """Symbol of d on p-forms: e_a (x) w -> e_a ^ w."""
    if not 0 <= p < ctx.m:
        raise InputError(f"d on {p}-forms needs 0 <= p < {ctx.m}")
    V, W = exterior(ctx, p), exterior(ctx, p + 1)
    sl = [exterior_left(ctx.m, a, p) for a in range(ctx.m)]
    return gradient_from_map(V, _stack_slices(sl, W.dim, V.dim), W, f"d:{p}")


def codifferential_gradient(ctx, p: int) -> GradientSpec:
    """Symbol of d* on p-forms: e_a (x) w -> -e_a contracted into w."""
    if not 0 < p <= ctx.m:
        raise InputError(f"d* on {p}-forms needs 0 < p <= {ctx.m}")
    V, W = exterior(ctx, p), exterior(ctx, p - 1)
    sl = [-interior_matrix(ctx.m, a, p) for a in range(ctx.m)]
    return gradient_from_map(V, _stack_slices(sl, W.dim, V.dim), W, f"dstar:{p}")


def b_operator(V: MatrixRep) -> fmpq_mat:
    """B on T (x) V: B(e_nu (x) v) = sum_rho e_rho (x) pr(e_rho ^ e_nu) v."""
    m, n = V.ctx.m, V.dim
    B = zeros(m * n, m * n)
    for r in range(m):
        for nu in range(m):
            if r == nu:
                continue
            blk = V.P(r, nu).tolist()
            for i in range(n):
                for j in range(n):
                    x = blk[i][j]
                    if x != 0:
                        B[r * n + i, nu * n + j] = x
    return B


@dataclass
class ConformalWeight:
    target: GradientSpec
    value: Fraction
    casimir_check: Fraction | None

    def to_json(self):
        return {"target": self.target.label(), "dim": self.target.dim,
                "b": encode_scalar(self.value),
                "weitzenboeck_coefficient": encode_scalar(1 - self.value),
                "casimir_difference": None if self.casimir_check is None
                else encode_scalar(self.casimir_check)}


def _scalar_on(M: fmpq_mat):
    c = M[0, 0] if M.nrows() else fmpq(0)
    if M != eye(M.nrows()) * c:
        return None
    return c


def conformal_weights(V: MatrixRep, targets=None) -> list:
    """b_eps with B = sum_eps b_eps pr_eps, plus the Casimir-difference cross-check."""
    targets = targets if targets is not None else gradient_targets(V)
    B = b_operator(V)
    n = V.dim * V.ctx.m
    total = zeros(n, n)
    cas_v = _scalar_on(V.casimir())
    cas_t = _scalar_on(tangent(V.ctx).casimir())
    out = []
    for g in targets:
        BU = B * g.basis
        b = (g.sigma * BU)[0, 0]
        if BU != g.basis * b:
            raise StructuralError("B is not scalar on an isotypic component")
        total += g.projector * b
        cas_e = _scalar_on(g.target.casimir())
        check = None
        if cas_e is not None and cas_v is not None and cas_t is not None:
            check = (cas_e - cas_v - cas_t) / 2
        out.append(ConformalWeight(g, Fraction(int(b.p), int(b.q)),
                                   None if check is None else Fraction(int(check.p), int(check.q))))
    if total != B:
        raise StructuralError("B differs from sum of b_eps pr_eps")
    return out


def weight_trace(weights) -> Fraction:
    """sum_eps b_eps dim V_eps; vanishes because B is traceless."""
    return sum((w.value * w.target.dim for w in weights), Fraction(0))
