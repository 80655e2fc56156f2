"""Error terms for gradients on Sym^k H (x) Lambda^{a,b}_0 E over Sp(n)Sp(1).

Works in the split rational model sl(2) + sp(2n) acting on H = Q^2 and
E = Q^2n with their symplectic forms.  For nabla R = h (x) e^5 the error term of
the gradient into Sym^{k'}H (x) F is, up to sign and a constant,

    s (x) l  ->  pr_{Sym^k'}(h (x) s)  (x)  pr_F(e (x) q_e l),

with q_e the action of the curvature e^4.  It vanishes for every h and e iff
the E-factor does, and the E-factor is a polynomial of degree 5 in e, so
zero-checks run on a unisolvent point set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from flint import fmpq, fmpq_mat

from .. import liealg
from ..errors import InputError, StructuralError
from ..exact import column_basis, eye, hstack, is_zero, kron, rank, restrict, trace, zeros
from ..tensors import subset_index, subsets, sym_action, wedge_action


# ---------------------------------------------------------------- symplectic model

def symplectic_form(n: int) -> fmpq_mat:
    """omega(u, v) = u^T Omega v on Q^2n with omega(e_i, f_i) = 1."""
    W = zeros(2 * n, 2 * n)
    for i in range(n):
        W[i, n + i] = 1
        W[n + i, i] = -1
    return W


@lru_cache(maxsize=None)
def sp_basis(n: int) -> tuple:
    """A basis of sp(2n, Q) = {X : X^T Omega + Omega X = 0}."""
    N = 2 * n
    out = []

    def E(i, j):
        M = zeros(N, N)
        M[i, j] = 1
        return M

    for i in range(n):
        for j in range(n):
            out.append(E(i, j) - E(n + j, n + i))
    for i in range(n):
        for j in range(i, n):
            out.append(E(i, n + j) + E(j, n + i) if i != j else E(i, n + i))
            out.append(E(n + i, j) + E(n + j, i) if i != j else E(n + i, i))
    W = symplectic_form(n)
    for X in out:
        if X.transpose() * W + W * X != zeros(N, N):
            raise StructuralError("sp basis element does not preserve omega")
    return tuple(out)


def casimir(n: int, action) -> fmpq_mat:
    """sum g^{ij} rho(X_i) rho(X_j) with g the trace form of the defining rep."""
    B = sp_basis(n)
    d = len(B)
    G = fmpq_mat(d, d, [trace(X * Y) for X in B for Y in B])
    Gi = G.inv()
    dim = action[0].nrows()
    C = zeros(dim, dim)
    for i in range(d):
        for j in range(d):
            if Gi[i, j] != 0:
                C += action[i] * action[j] * Gi[i, j]
    return C


@lru_cache(maxsize=None)
def _casimir_scale(n: int) -> fmpq:
    """Ratio between the matrix Casimir and <mu, mu + 2 rho> (eps coordinates)."""
    C = casimir(n, list(sp_basis(n)))
    return C[0, 0] / (2 * n + 1)


def casimir_value(n: int, mu) -> fmpq:
    rho = [n - i for i in range(n)]
    s = sum(Fraction(x) * (Fraction(x) + 2 * r) for x, r in zip(mu, rho))
    return _casimir_scale(n) * fmpq(s.numerator, s.denominator)


def _c_spec(n):
    return liealg.LieAlgebraSpec((("C", n),)) if n >= 2 else liealg.LieAlgebraSpec((("A", 1),))


def weight_dimension(n: int, mu) -> int:
    if n == 1:
        return mu[0] + 1
    return liealg.dimension(_c_spec(n), liealg.from_orthogonal(_c_spec(n), list(mu)))


# ---------------------------------------------------------------- modules

@dataclass(eq=False)
class Module:
    """A subspace of a tensor space stable under sp(2n), with the restricted action."""

    n: int
    name: str
    weight: tuple        # highest weight in eps coordinates
    basis: fmpq_mat      # columns inside the ambient space
    ambient: list        # ambient action matrices, one per sp basis element
    action: list

    @property
    def dim(self) -> int:
        return self.basis.ncols()


def _closure(vectors: fmpq_mat, action) -> fmpq_mat:
    U = column_basis(vectors)
    while True:
        W = column_basis(hstack([U] + [A * U for A in action]))
        if W.ncols() == U.ncols():
            return U
        U = W


def omega_contraction(n: int, a: int) -> fmpq_mat:
    """Lambda^a E -> Lambda^{a-2} E, contraction with the symplectic form."""
    N = 2 * n
    src = subsets(N, a)
    dst = subset_index(N, a - 2)
    W = symplectic_form(n)
    M = zeros(len(dst), len(src))
    for c, s in enumerate(src):
        for i in range(a):
            for j in range(i + 1, a):
                w = W[s[i], s[j]]
                if w != 0:
                    rest = s[:i] + s[i + 1:j] + s[j + 1:]
                    M[dst[rest], c] += w * (-1) ** (i + j - 1)
    return M


def _eps_weight(n, a, b):
    return tuple((1 if i < a else 0) + (1 if i < b else 0) for i in range(n))


@lru_cache(maxsize=None)
def lambda_ab(n: int, a: int, b: int) -> Module:
    """Lambda^{a,b}_0 E: generated by (e_1^...^e_a) (x) (e_1^...^e_b)."""
    if not 0 <= b <= a <= n:
        raise InputError("Lambda^{a,b}_0 E needs 0 <= b <= a <= n")
    N = 2 * n
    B = sp_basis(n)
    Ia, Ib = eye(len(subsets(N, a))), eye(len(subsets(N, b)))
    amb = [kron(wedge_action(X, a), Ib) + kron(Ia, wedge_action(X, b)) for X in B]
    top_a = zeros(Ia.nrows(), 1)
    top_a[subset_index(N, a)[tuple(range(a))], 0] = 1
    top_b = zeros(Ib.nrows(), 1)
    top_b[subset_index(N, b)[tuple(range(b))], 0] = 1
    v0 = kron(top_a, top_b)
    for p, top in ((a, top_a), (b, top_b)):
        if p >= 2 and not is_zero(omega_contraction(n, p) * top):
            raise StructuralError("top vector is not primitive")
    U = _closure(v0, amb)
    mu = _eps_weight(n, a, b)
    if U.ncols() != weight_dimension(n, mu):
        raise StructuralError("generated module has the wrong dimension")
    act = [restrict(U, A) for A in amb]
    return Module(n, f"Lambda^{{{a},{b}}}_0E", mu, U, amb, act)


@lru_cache(maxsize=None)
def sym_h(k: int) -> Module:
    """Sym^k H for sl(2) = sp(2), monomial basis."""
    B = sp_basis(1)
    act = [sym_action(X, k) for X in B]
    return Module(1, f"Sym^{k}H", (k,), eye(k + 1), act, act)


def _targets(n: int, mu) -> list:
    """Dominant mu +- eps_i, i.e. the constituents of E (x) V_mu."""
    out = []
    for i in range(n):
        for s in (1, -1):
            nu = list(mu)
            nu[i] += s
            if all(nu[j] >= nu[j + 1] for j in range(n - 1)) and nu[-1] >= 0:
                out.append((tuple(nu), i, s))
    return out


def _tensor_defining(M: Module) -> list:
    """Action on (defining rep) (x) M."""
    B = sp_basis(M.n)
    I = eye(M.dim)
    return [kron(X, I) + kron(eye(2 * M.n), A) for X, A in zip(B, M.action)]


def isotypic_projectors(M: Module) -> dict:
    """Projectors of (defining rep) (x) M onto its constituents, by Casimir values."""
    n = M.n
    act = _tensor_defining(M)
    C = casimir(n, act)
    targets = _targets(n, M.weight)
    vals = {nu: casimir_value(n, nu) for nu, _, _ in targets}
    if len(set(vals.values())) != len(vals):
        raise StructuralError("Casimir does not separate the constituents")
    d = C.nrows()
    out = {}
    total = zeros(d, d)
    for nu in vals:
        P = eye(d)
        for other, c in vals.items():
            if other != nu:
                P = P * (C - eye(d) * c) / (vals[nu] - c)
        if P * P != P or rank(P) != weight_dimension(n, nu):
            raise StructuralError(f"projector onto {nu} is wrong")
        out[nu] = P
        total += P
    if total != eye(d):
        raise StructuralError("constituent projectors do not sum to the identity")
    return out


# ---------------------------------------------------------------- curvature action

def nilpotent(e: fmpq_mat, n: int) -> fmpq_mat:
    """X_e = e e^T Omega, the element of sp(2n) attached to e^2."""
    return e * e.transpose() * symplectic_form(n)


def q_e(M: Module, e: fmpq_mat, a: int, b: int) -> fmpq_mat:
    """Action of the curvature e^4 on Lambda^{a,b}_0 E via e ^ (e^flat contraction) on each factor.

    Checked against the square of the nilpotent X_e acting on the module.
    """
    n = M.n
    X = nilpotent(e, n)
    Da, Db = wedge_action(X, a), wedge_action(X, b)
    rule = kron(Da, Db) * 2
    Xa = kron(Da, eye(Db.nrows())) + kron(eye(Da.nrows()), Db)
    if Xa * Xa != rule:
        raise StructuralError("the square of X_e is not 2 D (x) D")
    return restrict(M.basis, rule)


def e_factor(M: Module, P: fmpq_mat, e: fmpq_mat, a: int, b: int) -> fmpq_mat:
    """l -> pr(e (x) q_e l) as a map M -> E (x) M (ambient coordinates of the target)."""
    Q = q_e(M, e, a, b)
    return P * kron(e, Q)


def h_factor(k: int, P: fmpq_mat, h: fmpq_mat) -> fmpq_mat:
    return P * kron(h, eye(k + 1))


def unisolvent_points(nvars: int, degree: int) -> list:
    """(1, p) with p in the principal lattice of size <= degree in nvars - 1 variables."""
    pts = []
    for p in product(range(degree + 1), repeat=nvars - 1):
        if sum(p) <= degree:
            pts.append((1,) + p)
    return pts


# ---------------------------------------------------------------- report

@dataclass
class QKTarget:
    label: str
    h_weight: int
    e_weight: tuple
    kind: str            # "a+1", "a-1", "b+1", "b-1" or "residual"
    zero: bool
    rank: int            # max over the sample generators
    dim: int

    @property
    def degree_changing(self) -> bool:
        return self.kind != "residual"

    def to_json(self):
        return {"target": self.label, "sym_h": self.h_weight, "e_weight": list(self.e_weight),
                "kind": self.kind, "degree_changing": self.degree_changing,
                "zero": self.zero, "rank": self.rank, "dim": self.dim}


@dataclass
class QKReport:
    n: int
    k: int
    a: int
    b: int
    targets: list = field(default_factory=list)
    points: int = 0

    @property
    def ok(self) -> bool:
        return all(t.zero for t in self.targets if t.degree_changing)

    def degree_changing(self) -> list:
        return [t for t in self.targets if t.degree_changing]

    def residuals(self) -> list:
        return [t for t in self.targets if not t.degree_changing]

    def to_json(self):
        return {"n": self.n, "k": self.k, "a": self.a, "b": self.b, "ok": self.ok,
                "zero_checks": self.points, "targets": [t.to_json() for t in self.targets]}


def _kind(mu, i, s, a, b):
    if s == 1 and i == a:
        return "a+1"
    if s == -1 and i == a - 1 and a > b:
        return "a-1"
    if s == 1 and i == b and b < a:
        return "b+1"
    if s == -1 and i == b - 1:
        return "b-1"
    if s == 1 and i == 0:
        return "residual"
    raise StructuralError("unexpected constituent of E (x) Lambda^{a,b}_0 E")


def _e_label(kind, a, b, nu):
    lab = {"a+1": (a + 1, b), "a-1": (a - 1, b), "b+1": (a, b + 1), "b-1": (a, b - 1)}
    if kind in lab:
        x, y = lab[kind]
        return f"Lambda^{{{x},{y}}}_0E"
    return "V(" + ",".join(map(str, nu)) + ")E"


def qk_generator_errors(n: int, k: int, a: int, b: int, degree: int = 5) -> QKReport:
    """Error terms of all gradients on Sym^k H (x) Lambda^{a,b}_0 E for nabla R in H (x) Sym^5 E."""
    if n < 2:
        raise InputError("quaternion-Kaehler bundles need n >= 2")
    if not 0 <= b <= a <= n or k < 0:
        raise InputError("need k >= 0 and 0 <= b <= a <= n")
    if (k + a + b) % 2:
        raise InputError(f"k + a + b = {k + a + b} is odd: no real bundle")
    M = lambda_ab(n, a, b)
    e_proj = isotypic_projectors(M)
    S = sym_h(k)
    h_proj = isotypic_projectors(S)
    hs = [fmpq_mat(2, 1, [1, 0]), fmpq_mat(2, 1, [0, 1])]
    pts = unisolvent_points(2 * n, degree)
    es = [fmpq_mat(2 * n, 1, list(p)) for p in pts]
    e_facts = {}
    for nu, P in e_proj.items():
        e_facts[nu] = [e_factor(M, P, e, a, b) for e in es]
    report = QKReport(n, k, a, b, points=len(pts))
    for (hnu, _, _), (nu, i, s) in product(_targets(1, (k,)), _targets(n, M.weight)):
        kind = _kind(M.weight, i, s, a, b)
        Hf = [h_factor(k, h_proj[hnu], h) for h in hs]
        h_rank = max(rank(F) for F in Hf)
        e_rank = max(rank(F) for F in e_facts[nu])
        if h_rank == 0:
            raise StructuralError("the H-factor of a gradient vanishes")
        zero = e_rank == 0
        label = f"Sym^{hnu[0]}H x {_e_label(kind, a, b, nu)}"
        report.targets.append(QKTarget(label, hnu[0], nu, kind, zero, h_rank * e_rank,
                                       (hnu[0] + 1) * weight_dimension(n, nu)))
    report.targets.sort(key=lambda t: (t.kind == "residual", t.label))
    return report


QK_CASES = [(k, a, b) for k in range(3) for a in range(3) for b in range(a + 1)
            if (k + a + b) % 2 == 0]
