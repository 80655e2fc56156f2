"""Batches of jet checks over seeded random metrics, and replay of failure dumps."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import InputError
from ..exact import encode_matrix
from ..holctx import context
from ..matmodel.gradients import codifferential_gradient, gradient_targets, wedge_gradient
from ..matmodel.reps import rep_functor
from ..vanish.error import error_term
from .checks import verify_commutator, verify_forms, verify_gauge, verify_identities
from .metric import MetricJet, geometry_at_origin, random_metric_jet
from .operators import Fiber, SectionJet, apply_symbol, covariant_derivative, laplacian


def form_gradients(ctx, rep) -> list:
    """d and d* as explicit gradients when rep is Lambda^p."""
    if not rep.name.startswith("Lambda^"):
        return []
    p = int(rep.name.split("^")[1])
    out = []
    if p < ctx.m:
        out.append(wedge_gradient(ctx, p))
    if p > 0:
        out.append(codifferential_gradient(ctx, p))
    return out


def jet_seeds(seed: int, count: int) -> list:
    rng = random.Random(seed)
    return [rng.randrange(2 ** 63) for _ in range(count)]


@dataclass
class SuiteReport:
    m: int
    rep: str
    seed: int
    trials: int
    reports: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def summary(self) -> dict:
        out = {}
        for r in self.reports:
            for name, ok in r.checks.items():
                key = f"{r.kind}: {name}"
                out[key] = out.get(key, True) and ok
        return out

    def to_json(self) -> dict:
        return {"m": self.m, "rep": self.rep, "trials": self.trials, "ok": self.ok,
                "summary": self.summary(), "reports": [r.to_json() for r in self.reports]}

    def text(self) -> str:
        lines = [f"jet checks: m={self.m} rep={self.rep} trials={self.trials}"]
        for k, v in self.summary().items():
            lines.append(f"  {'PASS' if v else 'FAIL'}  {k}")
        lines.append("result: " + ("all passed" if self.ok else "FAILED"))
        return "\n".join(lines)


def run_suite(m: int, rep_expr: str, trials: int, seed: int, magnitude_bound=1,
              identities: bool = True, commutator: bool = True, extras: bool = True) -> SuiteReport:
    """Identities and the commutator oracle on ``trials`` random jets; gauge and form
    checks once."""
    if trials < 1:
        raise InputError("trials must be positive")
    ctx = context(f"so{m}")
    V = rep_functor(ctx, rep_expr)
    grads = gradient_targets(V) + form_gradients(ctx, V)
    out = SuiteReport(m, rep_expr, seed, trials)
    for t, s in enumerate(jet_seeds(seed, trials)):
        jet = random_metric_jet(m, s, magnitude_bound)
        if identities:
            out.reports.append(verify_identities(jet, V, s))
        if commutator:
            rep = verify_commutator(jet, V, grads, 1, s, zeroth_order="auto")
            for f in rep.failures:
                f["rep_expr"] = rep_expr
            out.reports.append(rep)
        if extras and t == 0:
            out.reports.append(verify_gauge(jet, V, s))
            out.reports.append(verify_forms(jet, ctx, s))
    return out


def replay(dump: dict) -> dict:
    """Recompute one commutator failure from its JSON dump."""
    jet = MetricJet.from_json(dump["metric"])
    ctx = context(f"so{jet.m}")
    V = rep_functor(ctx, dump["rep_expr"])
    grads = {g.label(): g for g in gradient_targets(V) + form_gradients(ctx, V)}
    if dump["gradient"] not in grads:
        raise InputError(f"unknown gradient {dump['gradient']!r} for {dump['rep_expr']}")
    g = grads[dump["gradient"]]
    psi = SectionJet.from_json(dump["section"], jet.m, jet.cap)
    geo = jet.geometry()
    fib = Fiber.from_rep(V)
    first = covariant_derivative(geo, fib, psi.values)
    lap = laplacian(geo, fib, psi.values)
    lhs = SectionJet(laplacian(geo, Fiber.from_rep(g.target), apply_symbol(g, first))).at0() - \
        SectionJet(apply_symbol(g, covariant_derivative(geo, fib, lap))).at0()
    _, dR = geometry_at_origin(jet)
    rhs = error_term(ctx, g, dR).matrix * psi.at0()
    return {"gradient": g.label(), "equal": lhs == rhs, "lhs": encode_matrix(lhs),
            "rhs": encode_matrix(rhs)}
