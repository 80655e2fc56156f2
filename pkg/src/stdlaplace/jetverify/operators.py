"""Differential operators on jets of sections of associated bundles."""
from __future__ import annotations

import random
from dataclasses import dataclass

from flint import fmpq, fmpq_mat

from ..errors import InputError
from ..exact import eye, kron, q
from ..matmodel.gradients import GradientSpec, codifferential_gradient, wedge_gradient
from ..matmodel.reps import MatrixRep
from ..tensors import bivector, pairs, wedge_action
from .metric import Geometry, MetricJet, _dot
from .poly import DegreeBudgetError, PolyJet, lincomb, monomials


def _sparse(M: fmpq_mat) -> list:
    rows = []
    for i in range(M.nrows()):
        rows.append([(j, M[i, j]) for j in range(M.ncols()) if M[i, j] != 0])
    return rows


def matvec(rows: list, s: list) -> list:
    """Constant sparse matrix times a vector of jets."""
    mono = s[0].mono
    return [lincomb(mono, [(c, s[j]) for j, c in row]) if row else
            PolyJet(mono, None, min(x.cap for x in s)) for row in rows]


class Fiber:
    """A representation of so(m) given by rho(e_a ^ e_b) for a < b (sparse)."""

    def __init__(self, m: int, mats: dict, name: str = "V"):
        self.m = m
        self.mats = mats
        self.dim = next(iter(mats.values())).nrows()
        self.gens = {k: _sparse(M) for k, M in mats.items()}
        self.name = name

    @classmethod
    def from_rep(cls, rep: MatrixRep) -> "Fiber":
        ctx = rep.ctx
        if ctx.kind != "SO" or ctx.dim != ctx.m * (ctx.m - 1) // 2:
            raise InputError("jet verification runs with the full holonomy SO(m) only")
        if rep.complex:
            raise InputError("jet verification needs a real representation")
        key = "_fiber"
        if key not in rep._cache:
            rep._cache[key] = cls(ctx.m, {(a, b): rep.P(a, b) for a, b in pairs(ctx.m)}, rep.name)
        return rep._cache[key]

    @classmethod
    def tensor_power(cls, m: int, k: int) -> "Fiber":
        mats = {}
        for a, b in pairs(m):
            X = bivector(m, a, b)
            G = None
            for slot in range(k):
                term = eye(1)
                for t in range(k):
                    term = kron(term, X if t == slot else eye(m))
                G = term if G is None else G + term
            mats[(a, b)] = G
        return cls(m, mats, f"T^{k}")

    @classmethod
    def curvature_operators(cls, m: int) -> "Fiber":
        """Operators on Lambda^2 (row-major) with the action op -> W op - op W."""
        mats = {}
        for a, b in pairs(m):
            W = wedge_action(bivector(m, a, b), 2)
            n = W.nrows()
            mats[(a, b)] = kron(W, eye(n)) - kron(eye(n), W.transpose())
        return cls(m, mats, "End(Lambda^2)")

    def with_tangent(self) -> "Fiber":
        """T (x) self, index mu * dim + v."""
        if not hasattr(self, "_tangent"):
            n = self.dim
            mats = {(a, b): kron(bivector(self.m, a, b), eye(n)) + kron(eye(self.m), M)
                    for (a, b), M in self.mats.items()}
            self._tangent = Fiber(self.m, mats, f"T x {self.name}")
        return self._tangent

    def act(self, A: fmpq_mat) -> fmpq_mat:
        """rho(A) for a constant skew matrix A."""
        out = None
        for (a, b), M in self.mats.items():
            c = A[b, a]
            if c != 0:
                out = M * c if out is None else out + M * c
        return out if out is not None else fmpq_mat(self.dim, self.dim)


# ---------------------------------------------------------------- core operators

def covariant_derivative(geo: Geometry, fiber: Fiber, s: list) -> list:
    """(nabla s)[mu * dim + v] = E_mu(s_v) + (rho(omega(E_mu)) s)_v."""
    m, n = geo.m, fiber.dim
    if len(s) != n:
        raise InputError(f"section has {len(s)} components, fiber has dimension {n}")
    ds = [[x.diff(i) for x in s] for i in range(m)]
    gs = {k: matvec(rows, s) for k, rows in fiber.gens.items()}
    out = []
    for mu in range(m):
        w = geo.omega[mu]
        fr = [geo.frame[i][mu] for i in range(m)]
        for v in range(n):
            terms = [(fr[i], ds[i][v]) for i in range(m)]
            terms += [(w[b][a], gs[(a, b)][v]) for (a, b) in gs]
            out.append(_dot(terms))
    return out


def second_derivative(geo: Geometry, fiber: Fiber, s: list, first: list | None = None) -> list:
    """nabla^2 s with index (mu, nu, v): nabla_mu of (nabla s)_nu."""
    first = covariant_derivative(geo, fiber, s) if first is None else first
    return covariant_derivative(geo, fiber.with_tangent(), first)


def rough_laplacian(geo: Geometry, fiber: Fiber, s: list, hess: list | None = None) -> list:
    m, n = geo.m, fiber.dim
    hess = second_derivative(geo, fiber, s) if hess is None else hess
    mono = s[0].mono
    return [lincomb(mono, [(-1, hess[(mu * m + mu) * n + v]) for mu in range(m)])
            for v in range(n)]


def curvature_action(geo: Geometry, fiber: Fiber, s: list) -> list:
    """q(R(x)) s = sum_{a<b} rho(e_a ^ e_b) rho(R_{E_a, E_b}(x)) s."""
    gs = {k: matvec(rows, s) for k, rows in fiber.gens.items()}
    mono = s[0].mono
    total = None
    for (a, b), rows in fiber.gens.items():
        Rab = geo.curv[(a, b)]
        t = [_dot([(Rab[d][c], gs[(c, d)][v]) for (c, d) in gs]) for v in range(fiber.dim)]
        u = matvec(rows, t)
        total = u if total is None else [lincomb(mono, [(1, x), (1, y)]) for x, y in zip(total, u)]
    return total


def laplacian(geo: Geometry, fiber: Fiber, s: list, hess: list | None = None) -> list:
    rough = rough_laplacian(geo, fiber, s, hess)
    qs = curvature_action(geo, fiber, s)
    mono = s[0].mono
    return [lincomb(mono, [(1, x), (1, y)]) for x, y in zip(rough, qs)]


def apply_symbol(grad: GradientSpec, first: list) -> list:
    """sigma applied to nabla s: the generalized gradient."""
    if grad.sigma.ncols() != len(first):
        raise InputError("gradient does not match the section")
    key = "_sparse_sigma"
    rows = getattr(grad, key, None)
    if rows is None:
        rows = _sparse(grad.sigma)
        setattr(grad, key, rows)
    return matvec(rows, first)


def adjoint_symbols(grad: GradientSpec) -> list:
    """sigma_mu^* = G_V^{-1} sigma_mu^T G_W for each direction mu."""
    V, W = grad.source, grad.target
    Ginv = V.gram.inv()
    return [Ginv * grad.symbol(mu).transpose() * W.gram for mu in range(V.ctx.m)]


def gradient_adjoint(geo: Geometry, grad: GradientSpec, phi: list) -> list:
    """P^* phi = -sum_mu sigma_mu^* (nabla phi)_mu."""
    Wf = Fiber.from_rep(grad.target)
    d = covariant_derivative(geo, Wf, phi)
    k = Wf.dim
    mono = phi[0].mono
    out = None
    for mu, S in enumerate(adjoint_symbols(grad)):
        part = matvec(_sparse(S * -1), d[mu * k:(mu + 1) * k])
        out = part if out is None else [lincomb(mono, [(1, x), (1, y)]) for x, y in zip(out, part)]
    return out


# ---------------------------------------------------------------- sections

@dataclass(eq=False)
class SectionJet:
    """Frame components of a section, one PolyJet per basis vector of the fiber."""

    values: list
    label: str = "psi"

    @property
    def cap(self) -> int:
        return min((v.cap for v in self.values), default=0)

    def at0(self) -> fmpq_mat:
        return fmpq_mat(len(self.values), 1, [v.at0() for v in self.values])

    def to_json(self) -> dict:
        return {"label": self.label, "components": [v.to_json() for v in self.values]}

    @classmethod
    def from_json(cls, d: dict, m: int, cap: int = 3) -> "SectionJet":
        mono = monomials(m, cap)
        vals = []
        for c in d["components"]:
            terms = {tuple(e): q(v) for e, v in c["terms"]}
            vals.append(PolyJet.from_terms(mono, terms, c["cap"]))
        return cls(vals, d.get("label", "psi"))


def random_section(m: int, dim: int, seed: int, degree: int = 3, bound: int = 3,
                   cap: int = 3) -> SectionJet:
    """A random polynomial section of total degree <= degree (exact, so known to cap)."""
    rng = random.Random(seed)
    mono = monomials(m, cap)
    vals = []
    for _ in range(dim):
        coeffs = {}
        for k in range(len(mono.exps)):
            if mono.deg[k] <= degree:
                c = rng.randint(-bound, bound)
                if c:
                    coeffs[k] = fmpq(c, rng.choice((1, 1, 2, 3)))
        vals.append(PolyJet(mono, coeffs, cap))
    return SectionJet(vals, f"random(seed={seed})")


# ---------------------------------------------------------------- dispatcher

OPERATORS = ("nabla", "rough", "q", "laplacian", "d", "dstar")


def _form_degree(rep: MatrixRep) -> int:
    if not rep.name.startswith("Lambda^"):
        raise InputError("d and d* act on form representations Lambda^p only")
    return int(rep.name.split("^")[1])


def apply_operator(jet: MetricJet, rep: MatrixRep, op, s: SectionJet) -> SectionJet:
    """Apply nabla, rough (nabla^* nabla), q, laplacian, d, dstar, a GradientSpec
    (the generalized gradient P) or ("adjoint", GradientSpec) to a section jet."""
    if rep.ctx.m != jet.m:
        raise InputError("representation and metric jet have different dimensions")
    geo = jet.geometry()
    fib = Fiber.from_rep(rep)
    vals = s.values
    if isinstance(op, tuple) and len(op) == 2 and op[0] == "adjoint":
        grad = op[1]
        if grad.target.dim != len(vals):
            raise InputError("the adjoint acts on sections of the gradient target")
        out, name = gradient_adjoint(geo, grad, vals), f"P*({grad.label()})"
    elif isinstance(op, GradientSpec):
        if op.source.dim != fib.dim:
            raise InputError("gradient source does not match the representation")
        out, name = apply_symbol(op, covariant_derivative(geo, fib, vals)), f"P({op.label()})"
    elif op == "nabla":
        out, name = covariant_derivative(geo, fib, vals), "nabla"
    elif op == "rough":
        out, name = rough_laplacian(geo, fib, vals), "rough Laplacian"
    elif op == "q":
        out, name = curvature_action(geo, fib, vals), "q(R)"
    elif op == "laplacian":
        out, name = laplacian(geo, fib, vals), "Laplacian"
    elif op in ("d", "dstar"):
        p = _form_degree(rep)
        m = jet.m
        if op == "d" and p == m or op == "dstar" and p == 0:
            out = []            # the target bundle is zero
        else:
            g = wedge_gradient(rep.ctx, p) if op == "d" else codifferential_gradient(rep.ctx, p)
            out = apply_symbol(g, covariant_derivative(geo, fib, vals))
        name = op
    else:
        raise InputError(f"unknown operator {op!r}; expected one of {OPERATORS}, "
                         "a GradientSpec or ('adjoint', GradientSpec)")
    res = SectionJet(out, f"{name}({s.label})")
    if res.cap < 0:
        raise DegreeBudgetError(f"degree budget exhausted: result is reliable to degree "
                                f"{res.cap}; raise degree_cap by at least {-res.cap}")
    return res
