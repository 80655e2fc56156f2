"""Metric jets at the origin of R^m and the Levi-Civita geometry they determine."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from flint import fmpq

from ..errors import InputError, StructuralError
from ..exact import q, zeros
from ..matmodel.curvature import CurvatureDerivative, CurvatureTensor
from ..tensors import pairs
from .poly import PolyJet, inv_series, monomials, sqrt_series

SUPPORTED_M = (3, 4, 5)


@dataclass(eq=False)
class MetricJet:
    """g_ij = delta_ij + (quadratic) + (cubic), known up to total degree ``cap``."""

    m: int
    g: list                  # m x m nested list of PolyJet
    cap: int = 3
    label: str = "metric"
    _geometry: object = field(default=None, repr=False)

    @property
    def mono(self):
        return self.g[0][0].mono

    def geometry(self) -> "Geometry":
        if self._geometry is None:
            self._geometry = Geometry(self)
        return self._geometry

    def to_json(self) -> dict:
        return {"m": self.m, "cap": self.cap, "label": self.label,
                "g": [[self.g[i][j].to_json() for j in range(i, self.m)] for i in range(self.m)]}

    @classmethod
    def from_json(cls, d: dict) -> "MetricJet":
        m, cap = d["m"], d["cap"]
        mono = monomials(m, cap)
        g = [[None] * m for _ in range(m)]
        for i, row in enumerate(d["g"]):
            for k, entry in enumerate(row):
                j = i + k
                terms = {tuple(e): q(v) for e, v in entry["terms"]}
                g[i][j] = g[j][i] = PolyJet.from_terms(mono, terms, cap)
        return _validated(cls(m, g, cap, d.get("label", "metric")))


def _validated(jet: MetricJet) -> MetricJet:
    m = jet.m
    for i in range(m):
        for j in range(m):
            a = jet.g[i][j]
            if not a == jet.g[j][i]:
                raise InputError("metric jet is not symmetric")
            if a.at0() != (1 if i == j else 0):
                raise InputError("metric jet must equal the identity at 0")
            if a.low_order() == 1 or any(jet.mono.deg[k] == 1 for k in a.c):
                raise InputError("metric jet must have vanishing first-order part")
    return jet


def _check_m(m):
    if m not in SUPPORTED_M:
        raise InputError(f"metric jets are supported for m in {SUPPORTED_M}, got {m}")


def flat_jet(m: int, cap: int = 3) -> MetricJet:
    _check_m(m)
    mono = monomials(m, cap)
    g = [[PolyJet.const(mono, 1 if i == j else 0, cap) for j in range(m)] for i in range(m)]
    return MetricJet(m, g, cap, "flat")


def random_metric_jet(m: int, seed: int, magnitude_bound=1, cap: int = 3) -> MetricJet:
    """delta plus random symmetric quadratic and cubic terms bounded by magnitude_bound."""
    _check_m(m)
    if cap < 3:
        raise InputError("metric jets need degree_cap >= 3")
    bound = Fraction(magnitude_bound)
    if bound < 0:
        raise InputError("magnitude_bound must be non-negative")
    rng = random.Random(seed)
    mono = monomials(m, cap)
    steps = 4
    g = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            coeffs = {}
            if i == j:
                coeffs[0] = fmpq(1)
            for k, e in enumerate(mono.exps):
                if mono.deg[k] in (2, 3):
                    c = bound * Fraction(rng.randint(-steps, steps), steps)
                    if c:
                        coeffs[k] = q(c)
            g[i][j] = g[j][i] = PolyJet(mono, coeffs, cap)
    return MetricJet(m, g, cap, f"random(seed={seed}, bound={bound})")


def metric_from_curvature(R: CurvatureTensor, dR: CurvatureDerivative | None = None,
                          cap: int = 3, label: str = "prescribed") -> MetricJet:
    """Normal-coordinate expansion with prescribed R(0) and (optionally) nabla R(0).

    g_ij = delta_ij - 1/3 R(e_i, x, x, e_j) - 1/6 (nabla_x R)(e_i, x, x, e_j).
    """
    m = R.m
    _check_m(m)
    mono = monomials(m, cap)
    third, sixth = fmpq(1, 3), fmpq(1, 6)
    g = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            terms = {}
            if i == j:
                terms[(0,) * m] = fmpq(1)
            for k in range(m):
                for l in range(m):
                    c = R.r4(i, k, l, j)
                    if c != 0:
                        e = [0] * m
                        e[k] += 1
                        e[l] += 1
                        terms[tuple(e)] = terms.get(tuple(e), 0) - third * c
                    if dR is None:
                        continue
                    for n in range(m):
                        c = dR.components[n].r4(i, k, l, j)
                        if c != 0:
                            e = [0] * m
                            e[k] += 1
                            e[l] += 1
                            e[n] += 1
                            terms[tuple(e)] = terms.get(tuple(e), 0) - sixth * c
            g[i][j] = g[j][i] = PolyJet.from_terms(mono, terms, cap)
    return MetricJet(m, g, cap, label)


def sphere_jet(m: int, cap: int = 3) -> MetricJet:
    """Unit round sphere (constant curvature 1) in normal coordinates."""
    from ..matmodel.curvature import sphere
    return metric_from_curvature(sphere(m), None, cap, f"sphere{m}")


def regauge(jet: MetricJet, seed: int, bound: int = 2) -> MetricJet:
    """Pull back along x = y + c(y), c a random homogeneous cubic; fixes 0 and the 1-jet."""
    m, cap, mono = jet.m, jet.cap, jet.mono
    rng = random.Random(seed)
    cubic = [k for k in range(len(mono.exps)) if mono.deg[k] == 3]
    phi = []
    for i in range(m):
        coeffs = {k: fmpq(rng.randint(-bound, bound)) for k in cubic}
        phi.append(PolyJet.var(mono, i, cap) + PolyJet(mono, coeffs, cap))
    # g(phi(y)) by substitution
    powers = [[PolyJet.const(mono, 1, cap)] for _ in range(m)]
    for i in range(m):
        for _ in range(cap):
            powers[i].append(powers[i][-1] * phi[i])

    def compose(a: PolyJet) -> PolyJet:
        out = PolyJet(mono, None, cap)
        for k, v in a.c.items():
            term = PolyJet.const(mono, v, cap)
            for i, p in enumerate(mono.exps[k]):
                if p:
                    term = term * powers[i][p]
            out = out + term
        return out

    J = [[phi[k].diff(i).truncate(cap) for i in range(m)] for k in range(m)]
    for row in J:
        for a in row:
            a.cap = cap          # phi is an exact polynomial
    gphi = [[compose(jet.g[k][l]) for l in range(m)] for k in range(m)]
    g = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            s = PolyJet(mono, None, cap)
            for k in range(m):
                for l in range(m):
                    s = s + J[k][i] * gphi[k][l] * J[l][j]
            g[i][j] = g[j][i] = s
    return _validated(MetricJet(m, g, cap, f"{jet.label} regauged(seed={seed})"))


# ---------------------------------------------------------------- geometry

def _matmul(A, B):
    n, k, p = len(A), len(B), len(B[0])
    return [[_dot([(A[i][t], B[t][j]) for t in range(k)]) for j in range(p)] for i in range(n)]


def _dot(pairs_):
    """sum a_t * b_t over jet pairs, accumulated in one dictionary."""
    a0 = pairs_[0][0]
    mono = a0.mono
    cap = min(min(a.cap, b.cap) for a, b in pairs_)
    deg, mul = mono.deg, mono.mul
    out = {}
    for a, b in pairs_:
        if not a.c or not b.c:
            continue
        for i, x in a.c.items():
            di = deg[i]
            if di > cap:
                continue
            row = mul[i]
            for j, y in b.c.items():
                if di + deg[j] <= cap:
                    k = row[j]
                    out[k] = out.get(k, 0) + x * y
    res = PolyJet.__new__(PolyJet)
    res.mono, res.cap, res.c = mono, cap, {k: v for k, v in out.items() if v != 0}
    return res


class Geometry:
    """Orthonormal frame, connection and curvature jets of a MetricJet.

    frame[i][mu]:  coordinate components of the Gram-Schmidt frame E_mu.
    omega[mu]:     so(m) matrix of the connection along E_mu in that frame.
    curv[(a, b)]:  skew matrix R_{E_a, E_b} in the frame (a < b).
    """

    def __init__(self, jet: MetricJet):
        self.jet = jet
        m, mono, cap = jet.m, jet.mono, jet.cap
        self.m, self.mono = m, mono
        g = jet.g

        def ip(u, v):
            return _dot([(u[i], _dot([(g[i][j], v[j]) for j in range(m)])) for i in range(m)])

        # Gram-Schmidt on the coordinate frame
        cols = []
        for k in range(m):
            v = [PolyJet.const(mono, 1 if i == k else 0, cap) for i in range(m)]
            for u in cols:
                c = ip(u, v)
                v = [v[i] - c * u[i] for i in range(m)]
            nrm = inv_series(sqrt_series(ip(v, v)))
            cols.append([x * nrm for x in v])
        self.frame = [[cols[mu][i] for mu in range(m)] for i in range(m)]
        e = self.frame
        # coframe e^{-1} = e^T g, inverse metric e e^T
        et = [[e[i][mu] for i in range(m)] for mu in range(m)]
        self.coframe = _matmul(et, g)
        ginv = _matmul(e, et)
        dg = [[[g[i][j].diff(k) for k in range(m)] for j in range(m)] for i in range(m)]
        half = fmpq(1, 2)
        # Gamma[k][i][j]
        self.christoffel = [[[
            _dot([(ginv[k][l], (dg[j][l][i] + dg[i][l][j] - dg[i][j][l]).scale(half))
                  for l in range(m)]) for j in range(m)] for i in range(m)] for k in range(m)]
        Gam = self.christoffel
        f = self.coframe
        # connection along coordinate directions: (omega_i)^a_b
        om = []
        for i in range(m):
            inner = [[e[k][b].diff(i) + _dot([(Gam[k][i][j], e[j][b]) for j in range(m)])
                      for b in range(m)] for k in range(m)]
            om.append(_matmul(f, inner))
        for w in om:
            for a in range(m):
                for b in range(a, m):
                    if not (w[a][b] + w[b][a]).is_zero():
                        raise StructuralError("Levi-Civita connection is not so(m)-valued")
        self.omega_coord = om
        self.omega = [[[_dot([(e[i][mu], om[i][a][b]) for i in range(m)]) for b in range(m)]
                       for a in range(m)] for mu in range(m)]
        # curvature 2-form on coordinate pairs, then in the frame
        Om = {}
        for i in range(m):
            for j in range(i + 1, m):
                wi, wj = om[i], om[j]
                Om[(i, j)] = [[wj[a][b].diff(i) - wi[a][b].diff(j)
                               + _dot([(wi[a][c], wj[c][b]) for c in range(m)])
                               - _dot([(wj[a][c], wi[c][b]) for c in range(m)])
                               for b in range(m)] for a in range(m)]
        self.curv = {}
        for a, b in pairs(m):
            M = [[None] * m for _ in range(m)]
            for r in range(m):
                for s in range(m):
                    terms = []
                    for (i, j), O in Om.items():
                        terms.append((_dot([(e[i][a], e[j][b])]) - _dot([(e[j][a], e[i][b])]), O[r][s]))
                    M[r][s] = _dot(terms)
            self.curv[(a, b)] = M

    def R(self, a: int, b: int):
        if a < b:
            return self.curv[(a, b)]
        if a > b:
            return [[-x for x in row] for row in self.curv[(b, a)]]
        z = PolyJet(self.mono, None, self.jet.cap)
        return [[z] * self.m for _ in range(self.m)]

    def frame_derivative(self, mu: int, s: PolyJet) -> PolyJet:
        return _dot([(self.frame[i][mu], s.diff(i)) for i in range(self.m)])


def curvature_operator_jets(geo: Geometry) -> list:
    """Jets of the curvature operator on Lambda^2: op[j(c,d)][i(a,b)] = R_ab[d][c]."""
    m = geo.m
    prs = pairs(m)
    return [[geo.curv[(a, b)][d][c] for (a, b) in prs] for (c, d) in prs]


def ricci_jets(geo: Geometry) -> list:
    """Ric[k][l] = sum_mu <R_{E_k, E_mu} E_mu, E_l>."""
    m = geo.m
    out = [[None] * m for _ in range(m)]
    for k in range(m):
        for l in range(m):
            acc = PolyJet(geo.mono, None, geo.jet.cap)
            for mu in range(m):
                if mu != k:
                    acc = acc + geo.R(k, mu)[l][mu]
            out[k][l] = acc
    return out


def _ops_at0(jets) -> list:
    return [[x.at0() for x in row] for row in jets]


def geometry_at_origin(jet: MetricJet):
    """R(0) and nabla R(0) in the orthonormal frame, with consistency assertions."""
    from .operators import Fiber, covariant_derivative
    geo = jet.geometry()
    m = jet.m
    N = len(pairs(m))
    opj = curvature_operator_jets(geo)
    R0 = CurvatureTensor(m, _to_mat(_ops_at0(opj)), None, "R(0)")
    if not R0.pair_symmetric():
        raise StructuralError("curvature at 0 is not pair symmetric")
    if not R0.satisfies_bianchi():
        raise StructuralError("curvature at 0 violates the first Bianchi identity")
    flat = [opj[r][c] for r in range(N) for c in range(N)]
    dflat = covariant_derivative(geo, Fiber.curvature_operators(m), flat)
    comps = []
    for lam in range(m):
        vals = [dflat[lam * N * N + k].at0() for k in range(N * N)]
        comps.append(CurvatureTensor(m, _to_mat([vals[r * N:(r + 1) * N] for r in range(N)]),
                                     None, f"nabla_{lam} R(0)"))
    dR = CurvatureDerivative(m, comps)
    if dR.second_bianchi_defect():
        raise StructuralError("nabla R at 0 violates the second Bianchi identity")
    ric = ricci_jets(geo)
    dric = covariant_derivative(geo, Fiber.tensor_power(m, 2),
                                [ric[k][l] for k in range(m) for l in range(m)])
    dric0 = [[[dric[y * m * m + z * m + x].at0() for x in range(m)] for z in range(m)]
             for y in range(m)]
    for x in range(m):
        div = dR.divergence(x)
        for z in range(m):
            for y in range(m):
                # <(delta R)_X Y, Z> = (nabla_Y Ric)(Z, X) - (nabla_Z Ric)(Y, X)
                if div[z, y] != dric0[y][z][x] - dric0[z][y][x]:
                    raise StructuralError("delta R differs from the exterior derivative of Ric")
    return R0, dR


def _to_mat(rows):
    n, k = len(rows), len(rows[0])
    M = zeros(n, k)
    for i in range(n):
        for j in range(k):
            M[i, j] = rows[i][j]
    return M


__all__ = ["MetricJet", "Geometry", "flat_jet", "random_metric_jet", "metric_from_curvature",
           "sphere_jet", "regauge", "geometry_at_origin", "curvature_operator_jets",
           "ricci_jets", "SUPPORTED_M"]
