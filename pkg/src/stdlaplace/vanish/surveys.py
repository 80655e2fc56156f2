"""Commutation surveys: every gradient between bundles of a list, with verdicts."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .. import liealg
from ..errors import InputError
from ..holctx import HolonomyContext, context
from ..matmodel.curvature import CurvatureDerivative
from ..matmodel.gradients import gradient_targets
from ..matmodel.reps import MatrixRep
from .criterion import vanishing_criterion
from .error import error_term

VERDICTS = ("criterion", "explicit", "none")


def _lab(w) -> str:
    return "[" + ",".join(map(str, w)) + "]"


@dataclass
class SurveyRow:
    source: str
    target: str
    verdict: str
    mult: int | None
    gradient: bool
    residual_rank: int | None = None
    witness: list = field(default_factory=list)

    def to_json(self):
        d = {"source": self.source, "target": self.target, "verdict": self.verdict,
             "mult": self.mult, "gradient": self.gradient}
        if self.residual_rank is not None:
            d["residual_rank"] = self.residual_rank
        if self.witness:
            d["witness"] = [{"hw": list(w), "mult": m} for w, m in self.witness]
        return d


@dataclass
class SurveyReport:
    context: str
    c_weights: list
    rows: list
    derived_c: bool = False

    @property
    def commutes(self) -> bool:
        """All genuine gradients (target inside T (x) source) commute with the Laplacian."""
        return all(r.verdict != "none" for r in self.rows if r.gradient)

    def to_json(self):
        return {"context": self.context, "C": [list(w) for w in self.c_weights],
                "C_derived": self.derived_c, "conclusion": "commutes" if self.commutes
                else "no conclusion", "rows": [r.to_json() for r in self.rows]}

    def text(self) -> str:
        head = ("source", "target", "gradient", "verdict", "mult", "residual")
        body = [(r.source, r.target, "yes" if r.gradient else "no", r.verdict,
                 "-" if r.mult is None else str(r.mult),
                 "-" if r.residual_rank is None else str(r.residual_rank)) for r in self.rows]
        widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
        lines = ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip()
                 for row in [head] + body]
        lines.append(f"conclusion: {'commutes' if self.commutes else 'no conclusion'}")
        return "\n".join(lines)


def _c_list(spec, C):
    if C is None:
        return []
    C = [C] if C and isinstance(C[0], int) else C
    return [spec.check_weight(tuple(c)) for c in C]


def _occurs_in_t_tensor(ctx, v, w) -> bool:
    spec = ctx.liealg_spec
    return any(liealg.tensor_decompose(spec, t, v).multiplicity(w) for t in ctx.t_weights)


def survey_report(ctx: HolonomyContext, bundles, C=None, dR: CurvatureDerivative | None = None,
                  derived: bool = False) -> SurveyReport:
    """Verdicts for all pairs of a bundle list.

    With highest weights as bundles the survey runs over all ordered pairs and
    uses the criterion only.  With MatrixReps it runs over the isotypic
    gradient targets of each source, and a supplied dR adds explicit error terms.
    """
    spec = ctx.liealg_spec
    cs = _c_list(spec, C)
    if not cs and dR is None:
        raise InputError("a survey needs the weights of nabla R or an explicit derivative")
    rows = []
    if all(isinstance(b, MatrixRep) for b in bundles):
        for V in sorted(bundles, key=lambda r: r.name):
            for g in gradient_targets(V):
                rows.append(_explicit_row(ctx, V, g, cs, dR))
        return SurveyReport(ctx.name, cs, rows, derived)
    if dR is not None:
        raise InputError("explicit error terms need bundles given as representations")
    ws = sorted({spec.check_weight(tuple(b)) for b in bundles})
    for v in ws:
        for w in ws:
            res = vanishing_criterion(ctx, cs, v, w)
            rows.append(SurveyRow(_lab(v), _lab(w), "criterion" if res.holds else "none",
                                  res.multiplicity, _occurs_in_t_tensor(ctx, v, w),
                                  None, res.witness))
    return SurveyReport(ctx.name, cs, rows, derived)


def _explicit_row(ctx, V, g, cs, dR):
    src = _lab(V.labels[0]) if V.labels and len(V.labels) == 1 else V.name
    tgt = g.label()
    mult, witness, verdict = None, [], "none"
    if cs and V.labels and g.labels and len(V.labels) == 1:
        # a complex pair labels both summands of a real irreducible
        mult = 0
        for w in g.labels:
            r = vanishing_criterion(ctx, cs, V.labels[0], w)
            mult += r.multiplicity
            witness += r.witness
        if mult == 0:
            verdict = "criterion"
    rank = None
    if dR is not None:
        E = error_term(ctx, g, dR)
        rank = E.rank()
        if verdict == "none" and rank == 0:
            verdict = "explicit"
    return SurveyRow(src, tgt, verdict, mult, True, rank, witness)


# ---------------------------------------------------------------- form blocks

def form_block(ctx: HolonomyContext) -> list:
    """Highest weights of all constituents of the exterior algebra of T."""
    spec = ctx.liealg_spec
    out = set()
    for p in range(ctx.m + 1):
        for w, _ in liealg.exterior_power(spec, ctx.t_weights, p).summands:
            out.add(w)
    return sorted(out)


G2_TABLE_PAIRS = (("T", (1, 0), "g2", (0, 1)), ("T", (1, 0), "L27", (2, 0)),
                  ("g2", (0, 1), "g2", (0, 1)), ("g2", (0, 1), "L27", (2, 0)),
                  ("L27", (2, 0), "L27", (2, 0)))


def g2_table() -> list:
    """The five G2 tensor products among T, g2 and Lambda^3_27."""
    spec = liealg.LieAlgebraSpec.parse("G2")
    out = []
    for left, w1, right, w2 in G2_TABLE_PAIRS:
        d = liealg.tensor_decompose(spec, w1, w2)
        out.append({"left": left, "right": right, "hw1": list(w1), "hw2": list(w2),
                    **d.to_json(), "text": d.text()})
    return out


def load_golden(name: str):
    text = resources.files("stdlaplace.data").joinpath(name).read_text()
    return json.loads(text)


def load_derived_weights() -> dict:
    """Stored weights of nabla R computed by vanish.derivative."""
    return load_golden("derivative_weights.json")


def derived_c(ctx: HolonomyContext, recompute: bool = False) -> list:
    if not recompute:
        table = load_derived_weights()
        if ctx.name in table:
            return [tuple(s["hw"]) for s in table[ctx.name]["summands"]]
    from .derivative import derivative_weights
    return derivative_weights(ctx).weights()


# ---------------------------------------------------------------- named surveys

def rarita_schwinger(m: int) -> dict:
    """Multiplicity of the (3,2) weight of nabla W in End of the spin-3/2 bundle."""
    if m < 5 or m % 2 == 0:
        raise InputError("the spin-3/2 survey is set up for odd m >= 5")
    ctx = context(f"so{m}", spin=True)
    spec = ctx.liealg_spec
    n = spec.rank
    c = liealg.from_orthogonal(spec, [3, 2] + [0] * (n - 2))
    half = Fraction(1, 2)
    s32 = liealg.from_orthogonal(spec, [1 + half] + [half] * (n - 1))
    res = vanishing_criterion(ctx, c, s32, s32)
    return {"m": m, "C": list(c), "V": list(s32), "dim_C": liealg.dimension(spec, c),
            "dim_V": liealg.dimension(spec, s32), "mult": res.multiplicity, "holds": res.holds}


NK_BUNDLES = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]
NK_C = [(3, 2), (2, 3)]
G2_BUNDLES = [(0, 0), (1, 0), (0, 1), (2, 0)]
G2_C = [(1, 2)]


def nearly_kaehler_survey() -> SurveyReport:
    return survey_report(context("SU(3)"), NK_BUNDLES, NK_C)


def g2_survey() -> SurveyReport:
    return survey_report(context("g2"), G2_BUNDLES, G2_C)


def spin7_survey(recompute: bool = False) -> SurveyReport:
    ctx = context("spin7")
    return survey_report(ctx, form_block(ctx), derived_c(ctx, recompute), derived=True)
