"""Representation-theoretic vanishing test for the commutator error term."""
from __future__ import annotations

from dataclasses import dataclass

from .. import liealg
from ..holctx import HolonomyContext


def hom_multiplicity(spec: liealg.LieAlgebraSpec, c, v, w) -> int:
    """dim Hom(C, Hom(V, W)) = multiplicity of V(c) in V(v)^* (x) V(w)."""
    spec.check_weight(c)
    spec.check_weight(v)
    spec.check_weight(w)
    return liealg.hom_multiplicity(spec, c, v, w)


def _weights(ctx, C):
    spec = ctx.liealg_spec
    if C and isinstance(C[0], int):
        C = [C]
    return [spec.check_weight(tuple(c)) for c in C]


@dataclass
class CriterionResult:
    holds: bool
    multiplicity: int
    witness: list    # [(hw, mult)] constituents shared by C and Hom(V, W)

    def to_json(self):
        return {"holds": self.holds, "mult": self.multiplicity,
                "witness": [{"hw": list(w), "mult": m} for w, m in self.witness]}


def vanishing_criterion(ctx: HolonomyContext, C, V, W) -> CriterionResult:
    """True when no constituent of C occurs in Hom(V, W).

    C is one highest weight or a list of them (the constituents of the space
    housing nabla R).  Sufficient for commutation, not necessary.
    """
    spec = ctx.liealg_spec
    V = spec.check_weight(tuple(V))
    W = spec.check_weight(tuple(W))
    hom = liealg.tensor_decompose(spec, liealg.dual_hw(spec, V), W)
    witness = []
    for c in _weights(ctx, C):
        k = hom.multiplicity(c)
        if k:
            witness.append((c, k))
    total = sum(k for _, k in witness)
    return CriterionResult(total == 0, total, witness)
