"""Exact checks of differential identities at the origin of a metric jet."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from flint import fmpq_mat

from ..errors import InputError
from ..exact import encode_matrix, nullspace, q, zeros
from ..matmodel.curvature import q_of_R
from ..matmodel.gradients import (GradientSpec, b_operator, codifferential_gradient,
                                  conformal_weights, gradient_targets, wedge_gradient)
from ..matmodel.reps import MatrixRep, exterior
from ..vanish.error import error_term
from .metric import MetricJet, geometry_at_origin, regauge
from .operators import (Fiber, SectionJet, apply_symbol, covariant_derivative, gradient_adjoint,
                        laplacian, random_section)
from .poly import lincomb


def _col(jets, start, n) -> fmpq_mat:
    return fmpq_mat(n, 1, [jets[start + v].at0() for v in range(n)])


def _vec(rng, m, bound=3):
    v = [rng.randint(-bound, bound) for _ in range(m)]
    if not any(v):
        v[rng.randrange(m)] = 1
    return v


@dataclass
class JetReport:
    """Outcome of one family of jet checks; ``failures`` holds replay data."""

    kind: str
    m: int
    rep: str
    seed: int
    jet: str
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool):
        self.checks[name] = self.checks.get(name, True) and bool(ok)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "m": self.m, "rep": self.rep, "seed": self.seed, "jet": self.jet,
             "ok": self.ok, "checks": dict(self.checks)}
        if self.details:
            d["details"] = self.details
        if self.failures:
            d["failures"] = self.failures
        return d


class _Derivatives:
    """nabla^k psi at 0 for k <= 3, in frame components."""

    def __init__(self, jet: MetricJet, fib: Fiber, psi: SectionJet):
        geo = jet.geometry()
        self.m, self.n = jet.m, fib.dim
        self.first = covariant_derivative(geo, fib, psi.values)
        self.second = covariant_derivative(geo, fib.with_tangent(), self.first)
        self.third = covariant_derivative(geo, fib.with_tangent().with_tangent(), self.second)
        self.psi0 = psi.at0()

    def d1(self, z):
        return _col(self.first, z * self.n, self.n)

    def d2(self, x, y):
        return _col(self.second, (x * self.m + y) * self.n, self.n)

    def d3(self, x, y, z):
        return _col(self.third, ((x * self.m + y) * self.m + z) * self.n, self.n)

    def row2(self, x) -> fmpq_mat:
        """(nabla^2 psi)_{x, .} as an element of T (x) V."""
        mn = self.m * self.n
        return _col(self.second, x * mn, mn)


def _lin(coeffs, f, n):
    out = zeros(n, 1)
    for idx, c in coeffs:
        if c != 0:
            out += f(*idx) * c
    return out


def _R(R0, X, Y):
    m = R0.m
    out = zeros(m, m)
    for a in range(m):
        for b in range(m):
            c = X[a] * Y[b]
            if c and a != b:
                out += R0.R(a, b) * c
    return out


def _dRv(dR, Y, X, Z):
    """(nabla_Y R)_{X, Z} as a skew matrix."""
    m = dR.m
    out = zeros(m, m)
    for l in range(m):
        if Y[l]:
            out += _R(dR.components[l], X, Z) * Y[l]
    return out


def verify_identities(jet: MetricJet, rep: MatrixRep, seed: int) -> JetReport:
    """Ricci identities, the key identity, q(R) = B(nabla^2) and pr(nabla^2) = -P^*P at 0."""
    if jet.cap < 3:
        raise InputError("identity checks need degree_cap >= 3")
    m, ctx = jet.m, rep.ctx
    fib = Fiber.from_rep(rep)
    n = fib.dim
    rng = random.Random(seed)
    psi = random_section(m, n, rng.randrange(2 ** 32), cap=jet.cap)
    rep_ = JetReport("identities", m, rep.name, seed, jet.label)
    R0, dR = geometry_at_origin(jet)
    D = _Derivatives(jet, fib, psi)
    psi0 = D.psi0
    rho = fib.act

    def nabla_along(v):
        return _lin([((k,), v[k]) for k in range(m)], D.d1, n)

    def ricci1(X, Y, Z):
        lhs = _lin([((x, y, z), X[x] * Y[y] * Z[z]) for x in range(m) for y in range(m)
                    for z in range(m)], D.d3, n) - \
            _lin([((y, x, z), X[x] * Y[y] * Z[z]) for x in range(m) for y in range(m)
                  for z in range(m)], D.d3, n)
        Rxy = _R(R0, X, Y)
        rhs = rho(Rxy) * nabla_along(Z) - nabla_along(_apply(Rxy, Z))
        return lhs == rhs

    def ricci2(X, Y, Z):
        lhs = _lin([((y, x, z), X[x] * Y[y] * Z[z]) for x in range(m) for y in range(m)
                    for z in range(m)], D.d3, n) - \
            _lin([((y, z, x), X[x] * Y[y] * Z[z]) for x in range(m) for y in range(m)
                  for z in range(m)], D.d3, n)
        rhs = rho(_dRv(dR, Y, X, Z)) * psi0 + rho(_R(R0, X, Z)) * nabla_along(Y)
        return lhs == rhs

    def key(X, Y):
        lhs = _lin([((x, y, z), X[x] * Y[y] * Y[z]) for x in range(m) for y in range(m)
                    for z in range(m)], D.d3, n) - \
            _lin([((y, z, x), X[x] * Y[y] * Y[z]) for x in range(m) for y in range(m)
                  for z in range(m)], D.d3, n)
        Rxy = _R(R0, X, Y)
        rhs = rho(Rxy) * nabla_along(Y) * 2 - nabla_along(_apply(Rxy, Y)) - \
            rho(_dRv(dR, Y, Y, X)) * psi0
        return lhs == rhs

    basis = [[1 if i == k else 0 for i in range(m)] for k in range(m)]
    vecs = basis + [_vec(rng, m) for _ in range(2)]
    for X in vecs:
        for Y in vecs:
            rep_.record("curvature of the induced connection",
                        _lin([((x, y), X[x] * Y[y]) for x in range(m) for y in range(m)], D.d2, n)
                        - _lin([((y, x), X[x] * Y[y]) for x in range(m) for y in range(m)], D.d2, n)
                        == rho(_R(R0, X, Y)) * psi0)
            rep_.record("key identity", key(X, Y))
            for Z in vecs:
                rep_.record("first Ricci identity", ricci1(X, Y, Z))
                rep_.record("second Ricci identity", ricci2(X, Y, Z))

    # q(R) psi = trace of B applied to nabla^2 psi
    B = b_operator(rep)
    traced = zeros(n, 1)
    for mu in range(m):
        v = B * D.row2(mu)
        traced += fmpq_mat(n, 1, [v[mu * n + k, 0] for k in range(n)])
    rep_.record("q(R) = B(nabla^2)", q_of_R(ctx, rep, R0) * psi0 == traced)

    geo = jet.geometry()
    for g in gradient_targets(rep):
        pr = zeros(n, 1)
        for mu in range(m):
            v = g.projector * D.row2(mu)
            pr += fmpq_mat(n, 1, [v[mu * n + k, 0] for k in range(n)])
        PstarP = SectionJet(gradient_adjoint(geo, g, apply_symbol(g, D.first))).at0()
        rep_.record("pr(nabla^2) = -P*P", pr == -PstarP)
    rep_.details["targets"] = len(gradient_targets(rep))
    return rep_


def _apply(A, v):
    m = len(v)
    return [sum((A[i, j] * v[j] for j in range(m)), 0) for i in range(m)]


# ---------------------------------------------------------------- commutator

def equivariant_maps(V: MatrixRep, W: MatrixRep) -> list:
    """Basis of Hom_hol(V, W) as dim W x dim V matrices."""
    nv, nw = V.dim, W.dim
    rows = []
    for A, Bm in zip(V.action, W.action):
        # F A - B F = 0, unknowns F[i, j] at index i * nv + j
        for i in range(nw):
            for j in range(nv):
                row = [0] * (nw * nv)
                for k in range(nv):
                    row[i * nv + k] += A[k, j]
                for k in range(nw):
                    row[k * nv + j] -= Bm[i, k]
                rows.append(row)
    if not rows:
        return []
    N = nullspace(fmpq_mat(rows))
    return [fmpq_mat(nw, nv, [N[t, c] for t in range(nw * nv)]) for c in range(N.ncols())]


def _is_form_gradient(g: GradientSpec, prefix: str) -> bool:
    return bool(g.name) and g.name.startswith(prefix)


def verify_commutator(jet: MetricJet, rep: MatrixRep, grads, trials: int, seed: int,
                      zeroth_order=None) -> JetReport:
    """Compare ([Laplacian, D] psi)(0) from jets with the algebraic error term, per trial.

    grads: a GradientSpec or a list of them (sources must be ``rep``).
    zeroth_order: None, "auto" (a random equivariant F: V -> W when one exists)
    or a constant dim W x dim V matrix F added to D.
    """
    if jet.cap < 3:
        raise InputError("commutator checks need degree_cap >= 3")
    grads = [grads] if isinstance(grads, GradientSpec) else list(grads)
    if trials < 1:
        raise InputError("trials must be positive")
    ctx, m = rep.ctx, jet.m
    fib = Fiber.from_rep(rep)
    n = fib.dim
    geo = jet.geometry()
    R0, dR = geometry_at_origin(jet)
    rng = random.Random(seed)
    report = JetReport("commutator", m, rep.name, seed, jet.label)
    errors = {}
    for g in grads:
        if g.source.dim != n:
            raise InputError(f"gradient {g.label()} does not start at {rep.name}")
        errors[g.label()] = error_term(ctx, g, dR).matrix
    Fs = {}
    for g in grads:
        if zeroth_order is None:
            continue
        if isinstance(zeroth_order, fmpq_mat):
            Fs[g.label()] = zeroth_order
        else:
            basis = equivariant_maps(rep, g.target)
            if basis:
                F = zeros(g.dim, n)
                for b in basis:
                    F += b * rng.randint(1, 3)
                Fs[g.label()] = F
    counts = {}
    for t in range(trials):
        psi = random_section(m, n, rng.randrange(2 ** 32), cap=jet.cap)
        first = covariant_derivative(geo, fib, psi.values)
        lap = laplacian(geo, fib, psi.values)
        dlap = covariant_derivative(geo, fib, lap)
        psi0 = psi.at0()
        for g in grads:
            Wf = Fiber.from_rep(g.target)
            Dpsi = apply_symbol(g, first)
            lhs = SectionJet(laplacian(geo, Wf, Dpsi)).at0() - SectionJet(apply_symbol(g, dlap)).at0()
            rhs = errors[g.label()] * psi0
            ok = lhs == rhs
            report.record("commutator equals error term", ok)
            if _is_form_gradient(g, "d:") or _is_form_gradient(g, "dstar:"):
                z = lhs == zeros(g.dim, 1) and rhs == zeros(g.dim, 1)
                report.record("form gradients commute", z)
                ok = ok and z
            if g.label() in Fs:
                F = Fs[g.label()]
                Fpsi = _const_apply(F, psi.values)
                mixed = [lincomb(jet.mono, [(1, a), (1, b)]) for a, b in zip(Dpsi, Fpsi)]
                lhs_f = SectionJet(laplacian(geo, Wf, mixed)).at0() - \
                    SectionJet(apply_symbol(g, dlap)).at0() - F * SectionJet(lap).at0()
                direct = SectionJet(laplacian(geo, Wf, Fpsi)).at0() - F * SectionJet(lap).at0()
                report.record("zeroth-order part adds [Laplacian, F]", lhs_f - lhs == direct)
                if _equivariant(F, rep, g.target):
                    report.record("parallel equivariant F commutes", direct == zeros(g.dim, 1))
            if not ok:
                report.failures.append({"trial": t, "gradient": g.label(),
                                        "lhs": encode_matrix(lhs), "rhs": encode_matrix(rhs),
                                        "metric": jet.to_json(), "section": psi.to_json()})
            counts[g.label()] = counts.get(g.label(), 0) + 1
    report.details = {"trials": trials, "gradients": sorted(counts),
                      "error_ranks": {k: int(M.rank()) if M.nrows() else 0
                                      for k, M in sorted(errors.items())},
                      "zeroth_order": sorted(Fs)}
    return report


def _const_apply(F: fmpq_mat, s: list) -> list:
    mono = s[0].mono
    return [lincomb(mono, [(F[i, j], s[j]) for j in range(F.ncols()) if F[i, j] != 0])
            for i in range(F.nrows())]


def _equivariant(F, V, W) -> bool:
    return all(F * A == Bm * F for A, Bm in zip(V.action, W.action))


# ---------------------------------------------------------------- forms

def verify_forms(jet: MetricJet, ctx, seed: int) -> JetReport:
    """d d = 0 through the reliable degree, and on 1-forms
    sum_eps (1 - b_eps) P_eps^* P_eps = d d^* + d^* d = Laplacian."""
    if ctx.m != jet.m:
        raise InputError("context and jet have different dimensions")
    m = jet.m
    geo = jet.geometry()
    rng = random.Random(seed)
    report = JetReport("forms", m, "Lambda", seed, jet.label)
    for p in range(m - 1):
        V = exterior(ctx, p)
        psi = random_section(m, V.dim, rng.randrange(2 ** 32), cap=jet.cap)
        d1 = apply_symbol(wedge_gradient(ctx, p), covariant_derivative(geo, Fiber.from_rep(V),
                                                                       psi.values))
        W = exterior(ctx, p + 1)
        d2 = apply_symbol(wedge_gradient(ctx, p + 1), covariant_derivative(geo, Fiber.from_rep(W), d1))
        report.record("d d = 0", all(x.is_zero() and x.cap >= 0 for x in d2))
    V1 = exterior(ctx, 1)
    f1 = Fiber.from_rep(V1)
    psi = random_section(m, V1.dim, rng.randrange(2 ** 32), cap=jet.cap)
    first = covariant_derivative(geo, f1, psi.values)
    dstar = apply_symbol(codifferential_gradient(ctx, 1), first)
    d_dstar = apply_symbol(wedge_gradient(ctx, 0),
                           covariant_derivative(geo, Fiber.from_rep(exterior(ctx, 0)), dstar))
    dpsi = apply_symbol(wedge_gradient(ctx, 1), first)
    dstar_d = apply_symbol(codifferential_gradient(ctx, 2),
                           covariant_derivative(geo, Fiber.from_rep(exterior(ctx, 2)), dpsi))
    hodge = SectionJet(d_dstar).at0() + SectionJet(dstar_d).at0()
    weighted = zeros(m, 1)
    flipped = zeros(m, 1)
    weights = conformal_weights(V1)
    for w in weights:
        g = w.target
        PsP = SectionJet(gradient_adjoint(geo, g, apply_symbol(g, first))).at0()
        b = q(w.value)
        weighted += PsP * (1 - b)
        flipped += PsP * (1 + b)
    report.record("weighted P*P = Hodge Laplacian", weighted == hodge)
    report.record("standard Laplacian = Hodge Laplacian on 1-forms",
                  SectionJet(laplacian(geo, f1, psi.values)).at0() == hodge)
    report.details["weights"] = [str(w.value) for w in weights]
    R0, _ = geometry_at_origin(jet)
    if R0.ricci() * psi.at0() != zeros(m, 1):
        # with Ric psi != 0 the opposite sign convention for b_eps must fail
        report.record("opposite sign of b rejected", flipped != hodge)
    if all(all(jet.g[i][j] == (1 if i == j else 0) for j in range(m)) for i in range(m)):
        coord = [-sum((psi.values[v].diff(i).diff(i).at0() for i in range(m)), 0) for v in range(m)]
        report.record("flat: Hodge Laplacian = coordinate Laplacian",
                      hodge == fmpq_mat(m, 1, coord))
    return report


# ---------------------------------------------------------------- gauge

def verify_gauge(jet: MetricJet, rep: MatrixRep, seed: int) -> JetReport:
    """R(0), nabla R(0) and the identity verdicts survive a cubic change of coordinates."""
    other = regauge(jet, seed)
    R0, dR = geometry_at_origin(jet)
    R1, dR1 = geometry_at_origin(other)
    report = JetReport("gauge", jet.m, rep.name, seed, jet.label)
    report.record("R(0) unchanged", R0.op == R1.op)
    report.record("nabla R(0) unchanged",
                  all(a.op == b.op for a, b in zip(dR.components, dR1.components)))
    report.record("identity verdicts unchanged",
                  verify_identities(jet, rep, seed).ok == verify_identities(other, rep, seed).ok)
    return report
