"""The zeroth-order error term of [Laplacian, generalized gradient]."""
from __future__ import annotations

from dataclasses import dataclass

from flint import fmpq_mat

from ..errors import InputError
from ..exact import encode_matrix, is_zero, zeros
from ..holctx import HolonomyContext
from ..matmodel.curvature import CurvatureDerivative, q_of_R
from ..matmodel.gradients import GradientSpec


@dataclass(eq=False)
class ErrorTerm:
    matrix: fmpq_mat
    grad: GradientSpec
    dR: CurvatureDerivative

    def is_zero(self) -> bool:
        return is_zero(self.matrix)

    def rank(self) -> int:
        M = self.matrix
        return int(M.rank()) if M.nrows() and M.ncols() else 0

    def to_json(self):
        return {"gradient": self.grad.label(), "shape": [self.matrix.nrows(), self.matrix.ncols()],
                "zero": self.is_zero(), "rank": self.rank(), "matrix": encode_matrix(self.matrix)}


def curvature_terms(ctx: HolonomyContext, V, dR: CurvatureDerivative) -> list:
    """q(nabla_lam R) - (delta R)_lam acting on V, for each direction lam."""
    out = []
    for lam, RL in enumerate(dR.components):
        div = dR.divergence(lam)
        if not ctx.contains(div):
            raise InputError("divergence of the curvature derivative is not hol-valued")
        out.append(q_of_R(ctx, V, RL, check=False) - V.act(div))
    return out


def error_term(ctx: HolonomyContext, grad: GradientSpec, dR: CurvatureDerivative) -> ErrorTerm:
    """-sum_lam sigma(e_lam) (q(nabla_lam R) - (delta R)_lam *) as a dim W x dim V matrix."""
    V = grad.source
    if V.ctx is not ctx and V.ctx.name != ctx.name:
        raise InputError("gradient and context differ")
    if dR.m != ctx.m or len(dR.components) != ctx.m:
        raise InputError("curvature derivative has the wrong dimension")
    if V.complex:
        raise InputError("error terms are computed for real representations")
    M = zeros(grad.dim, V.dim)
    for lam, term in enumerate(curvature_terms(ctx, V, dR)):
        if not is_zero(term):
            M -= grad.symbol(lam) * term
    return ErrorTerm(M, grad, dR)
