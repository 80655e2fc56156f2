"""Weight combinatorics for compact semisimple Lie algebras.

Highest weights are tuples of Dynkin labels (coefficients in the basis of
fundamental weights), Bourbaki numbering.  Everything is exact: the
invariant form is normalised so that long roots have squared length 2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import prod

from .errors import InputError

FAMILIES = ("A", "B", "C", "D", "G")


# ---------------------------------------------------------------- simple factors

def cartan_matrix(family: str, rank: int) -> tuple:
    """Cartan matrix a_ij = <alpha_i, alpha_j^vee>."""
    if family not in FAMILIES:
        raise InputError(f"unknown Lie algebra family {family!r}")
    n = rank
    if family == "G":
        if n != 2:
            raise InputError("G only exists in rank 2")
        return ((2, -1), (-3, 2))
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3}[family]
    if n < minimum:
        raise InputError(f"{family}{n} is not a valid simple type")
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = 2
    for i in range(n - 1):
        A[i][i + 1] = A[i + 1][i] = -1
    if family == "B":
        A[n - 2][n - 1] = -2
    elif family == "C":
        A[n - 1][n - 2] = -2
    elif family == "D":
        A[n - 2][n - 1] = A[n - 1][n - 2] = 0
        A[n - 3][n - 1] = A[n - 1][n - 3] = -1
    return tuple(tuple(r) for r in A)


def _root_half_lengths(family: str, rank: int) -> tuple:
    """(alpha_i, alpha_i)/2 with long roots of squared length 2."""
    if family in ("A", "D"):
        return (Fraction(1),) * rank
    if family == "B":
        return (Fraction(1),) * (rank - 1) + (Fraction(1, 2),)
    if family == "C":
        return (Fraction(1, 2),) * (rank - 1) + (Fraction(1),)
    return (Fraction(1, 3), Fraction(1))  # G2: alpha_1 short


def _inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class SimpleFactor:
    family: str
    rank: int
    cartan: tuple = field(repr=False)
    half_lengths: tuple = field(repr=False)
    form: tuple = field(repr=False)            # (omega_i, omega_j)
    positive_roots: tuple = field(repr=False)  # simple-root coordinates

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    def root_in_omega(self, root) -> tuple:
        r = self.rank
        return tuple(sum(root[j] * self.cartan[j][i] for j in range(r)) for i in range(r))

    def inner(self, lam, mu) -> Fraction:
        r = self.rank
        return sum((self.form[i][j] * lam[i] * mu[j] for i in range(r) for j in range(r)),
                   Fraction(0))


@lru_cache(maxsize=None)
def simple_factor(family: str, rank: int) -> SimpleFactor:
    A = cartan_matrix(family, rank)
    d = _root_half_lengths(family, rank)
    inv = _inverse(A)
    form = tuple(tuple(inv[j][i] * d[i] for j in range(rank)) for i in range(rank))
    return SimpleFactor(family, rank, A, d, form, _positive_roots(A))


def _positive_roots(A) -> tuple:
    n = len(A)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = list(simple)
    known = set(roots)
    k = 0
    while k < len(roots):
        beta = roots[k]
        k += 1
        for i in range(n):
            pairing = sum(beta[j] * A[j][i] for j in range(n))
            p = 0
            down = list(beta)
            while True:
                down[i] -= 1
                if tuple(down) in known:
                    p += 1
                else:
                    break
            if p - pairing > 0:
                up = list(beta)
                up[i] += 1
                up = tuple(up)
                if up not in known:
                    known.add(up)
                    roots.append(up)
    roots.sort(key=lambda r: (sum(r), r))
    return tuple(roots)


# ---------------------------------------------------------------- algebra spec

@dataclass(frozen=True)
class LieAlgebraSpec:
    """A product of simple factors, e.g. (("A", 1), ("C", 2))."""

    factors: tuple
    fundamental_weight_order: tuple | None = None

    def __post_init__(self):
        fs = tuple((str(f).upper(), int(r)) for f, r in self.factors)
        if not fs:
            raise InputError("empty Lie algebra")
        for f, r in fs:
            cartan_matrix(f, r)
        object.__setattr__(self, "factors", fs)
        order = self.fundamental_weight_order
        if order is not None and sorted(order) != list(range(self.rank)):
            raise InputError("fundamental_weight_order must be a permutation")

    @classmethod
    def parse(cls, text: str) -> "LieAlgebraSpec":
        """Parse "G2", "B3", "A1xC2" (also "A1*C2", "A1+C2")."""
        parts = [p for p in text.replace("*", "x").replace("+", "x").upper().split("X") if p]
        out = []
        for p in parts:
            if len(p) < 2 or p[0] not in FAMILIES or not p[1:].isdigit():
                raise InputError(f"cannot parse Lie algebra {text!r}")
            out.append((p[0], int(p[1:])))
        return cls(tuple(out))

    @property
    def name(self) -> str:
        return "x".join(f"{f}{r}" for f, r in self.factors)

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)

    def simple(self):
        return [simple_factor(f, r) for f, r in self.factors]

    def split(self, hw, dominant: bool = True) -> list:
        hw = self.check_weight(hw) if dominant else tuple(int(x) for x in hw)
        if self.fundamental_weight_order is not None:
            hw = tuple(hw[i] for i in self.fundamental_weight_order)
        out, k = [], 0
        for _, r in self.factors:
            out.append(hw[k:k + r])
            k += r
        return out

    def join(self, parts) -> tuple:
        hw = tuple(x for p in parts for x in p)
        if self.fundamental_weight_order is not None:
            inv = [0] * len(hw)
            for i, j in enumerate(self.fundamental_weight_order):
                inv[j] = i
            hw = tuple(hw[inv[i]] for i in range(len(hw)))
        return hw

    def check_weight(self, hw) -> tuple:
        hw = tuple(int(x) for x in hw)
        if len(hw) != self.rank:
            raise InputError(f"{self.name} weights have {self.rank} labels, got {len(hw)}")
        if any(x < 0 for x in hw):
            raise InputError(f"highest weight {hw} is not dominant")
        return hw


def parse_weight(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip())
    except ValueError:
        raise InputError(f"cannot parse weight {text!r}") from None


# ---------------------------------------------------------------- single factor algorithms

def _rho(f: SimpleFactor):
    return (1,) * f.rank


def _add(a, b, s=1):
    return tuple(x + s * y for x, y in zip(a, b))


def _dim1(f: SimpleFactor, lam) -> int:
    num, den = Fraction(1), Fraction(1)
    for root in f.positive_roots:
        a = sum((lam[j] + 1) * root[j] * f.half_lengths[j] for j in range(f.rank))
        b = sum(root[j] * f.half_lengths[j] for j in range(f.rank))
        num *= a
        den *= b
    val = num / den
    assert val.denominator == 1
    return int(val)


def _reflect(f: SimpleFactor, nu, i):
    c = nu[i]
    return tuple(nu[j] - c * f.cartan[i][j] for j in range(f.rank))


def _to_dominant(f: SimpleFactor, nu):
    """Dominant Weyl conjugate of nu and the parity of the reflections used."""
    sign = 1
    while True:
        for i in range(f.rank):
            if nu[i] < 0:
                nu = _reflect(f, nu, i)
                sign = -sign
                break
        else:
            return nu, sign


@lru_cache(maxsize=None)
def _dominant_multiplicities(family, rank, lam) -> dict:
    """Freudenthal recursion restricted to dominant weights."""
    f = simple_factor(family, rank)
    rho = _rho(f)
    pos = [f.root_in_omega(r) for r in f.positive_roots]
    # dominant weights below lam, reached by subtracting positive roots
    dom = {lam: 0}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for root, r_omega in zip(f.positive_roots, pos):
                nu, k = mu, 0
                while True:
                    nu = _add(nu, r_omega, -1)
                    k += 1
                    if f.inner(nu, rho) < 0:
                        break
                    if all(x >= 0 for x in nu) and nu not in dom:
                        dom[nu] = dom[mu] + k * sum(root)
                        nxt.append(nu)
        frontier = nxt
    lr = f.inner(_add(lam, rho), _add(lam, rho))
    mult = {lam: 1}
    for nu in sorted(dom, key=lambda w: (dom[w], w)):
        if nu == lam:
            continue
        s = Fraction(0)
        for r_omega in pos:
            k = 1
            while True:
                w = _add(nu, r_omega, k)
                if not _below(f, lam, w):
                    break
                wd, _ = _to_dominant(f, w)
                m = mult.get(wd, 0)
                if m:
                    s += m * f.inner(w, r_omega)
                k += 1
        den = lr - f.inner(_add(nu, rho), _add(nu, rho))
        val = 2 * s / den
        assert val.denominator == 1 and val >= 0
        if val:
            mult[nu] = int(val)
    return mult


def _below(f: SimpleFactor, lam, w) -> bool:
    """Whether lam - w is a nonnegative combination of simple roots."""
    diff = _add(lam, w, -1)
    inv = _cartan_inverse(f.family, f.rank)
    c = [sum(diff[i] * inv[i][j] for i in range(f.rank)) for j in range(f.rank)]
    return all(x >= 0 for x in c)


@lru_cache(maxsize=None)
def _cartan_inverse(family, rank):
    return _inverse(cartan_matrix(family, rank))


@lru_cache(maxsize=None)
def _weight_system(family, rank, lam) -> tuple:
    """All weights with multiplicities, as a sorted tuple of (weight, mult)."""
    f = simple_factor(family, rank)
    out = {}
    for mu, m in _dominant_multiplicities(family, rank, lam).items():
        orbit = {mu}
        stack = [mu]
        while stack:
            w = stack.pop()
            for i in range(rank):
                v = _reflect(f, w, i)
                if v not in orbit:
                    orbit.add(v)
                    stack.append(v)
        for w in orbit:
            out[w] = m
    return tuple(sorted(out.items()))


def _klimyk(family, rank, lam, mu) -> dict:
    f = simple_factor(family, rank)
    if _dim1(f, lam) < _dim1(f, mu):
        lam, mu = mu, lam
    rho = _rho(f)
    out = {}
    for w, m in _weight_system(family, rank, mu):
        nu, sign = _to_dominant(f, _add(_add(lam, w), rho))
        if any(x == 0 for x in nu):
            continue
        key = _add(nu, rho, -1)
        out[key] = out.get(key, 0) + sign * m
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------- public API

def weyl_dimension(spec: LieAlgebraSpec, hw) -> int:
    return prod(_dim1(f, p) for f, p in zip(spec.simple(), spec.split(hw)))


def dimension(spec, hw) -> int:
    return weyl_dimension(spec, hw)


def weight_multiplicities(spec: LieAlgebraSpec, hw) -> dict:
    """Weight -> multiplicity for the irreducible module with highest weight hw."""
    systems = [dict(_weight_system(f.family, f.rank, p))
               for f, p in zip(spec.simple(), spec.split(hw))]
    out = {}
    for combo in product(*[s.items() for s in systems]):
        w = spec.join([c[0] for c in combo])
        out[w] = prod(c[1] for c in combo)
    return out


def casimir_l2(spec: LieAlgebraSpec, hw, scale=1) -> Fraction:
    """Casimir eigenvalue: sum over factors of scale_f * <lam_f, lam_f + 2 rho_f>."""
    parts = spec.split(hw)
    scales = _scales(spec, scale)
    total = Fraction(0)
    for f, p, s in zip(spec.simple(), parts, scales):
        total += s * f.inner(p, _add(p, _rho(f), 2))
    return total


def _scales(spec, scale):
    if isinstance(scale, (tuple, list)):
        if len(scale) != len(spec.factors):
            raise InputError("one embedding scale per simple factor is required")
        return [Fraction(str(s)) if not isinstance(s, Fraction) else s for s in scale]
    s = Fraction(str(scale)) if not isinstance(scale, Fraction) else scale
    return [s] * len(spec.factors)


def dual_hw(spec: LieAlgebraSpec, hw) -> tuple:
    out = []
    for f, p in zip(spec.simple(), spec.split(hw)):
        d, _ = _to_dominant(f, tuple(-x for x in p))
        out.append(d)
    return spec.join(out)


@dataclass(frozen=True)
class Decomposition:
    spec: LieAlgebraSpec
    summands: tuple  # ((hw, mult), ...) sorted lexicographically by hw

    def multiplicity(self, hw) -> int:
        hw = tuple(hw)
        return dict(self.summands).get(hw, 0)

    @property
    def dimension(self) -> int:
        return sum(weyl_dimension(self.spec, w) * m for w, m in self.summands)

    def to_json(self) -> dict:
        return {
            "factors": [f"{f}{r}" for f, r in self.spec.factors],
            "summands": [{"hw": list(w), "dim": weyl_dimension(self.spec, w), "mult": m}
                         for w, m in self.summands],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def text(self) -> str:
        parts = []
        for w, m in self.summands:
            lab = "[" + ",".join(map(str, w)) + "]"
            parts.append(lab if m == 1 else f"{m}{lab}")
        return " + ".join(parts)


def tensor_decompose(spec: LieAlgebraSpec, hw1, hw2) -> Decomposition:
    """Klimyk decomposition of V(hw1) (x) V(hw2)."""
    per = [_klimyk(f.family, f.rank, a, b)
           for f, a, b in zip(spec.simple(), spec.split(hw1), spec.split(hw2))]
    out = {}
    for combo in product(*[d.items() for d in per]):
        w = spec.join([c[0] for c in combo])
        out[w] = out.get(w, 0) + prod(c[1] for c in combo)
    summ = tuple(sorted((w, m) for w, m in out.items() if m))
    if any(m < 0 for _, m in summ):
        raise AssertionError("negative multiplicity in tensor product")
    return Decomposition(spec, summ)


def decompose_sum(spec, pieces) -> Decomposition:
    """Decomposition of a direct sum given as (hw, mult) pairs."""
    out = {}
    for w, m in pieces:
        out[tuple(w)] = out.get(tuple(w), 0) + m
    return Decomposition(spec, tuple(sorted((w, m) for w, m in out.items() if m)))


def hom_multiplicity(spec: LieAlgebraSpec, c, v, w) -> int:
    """Multiplicity of V(c) in V(v)^* (x) V(w)."""
    return tensor_decompose(spec, dual_hw(spec, v), w).multiplicity(tuple(c))


# ---------------------------------------------------------------- orthogonal coordinates

def from_orthogonal(spec: LieAlgebraSpec, eps) -> tuple:
    """Dynkin labels of a weight given in the orthogonal basis e_1..e_n.

    Valid for a single factor of type B, C or D.
    """
    if len(spec.factors) != 1:
        raise InputError("orthogonal coordinates need a simple algebra")
    fam, n = spec.factors[0]
    e = [Fraction(x) for x in eps]
    if len(e) != n:
        raise InputError("wrong number of orthogonal coordinates")
    lab = [e[i] - e[i + 1] for i in range(n - 1)]
    if fam == "B":
        lab.append(2 * e[n - 1])
    elif fam == "C":
        lab.append(e[n - 1])
    elif fam == "D":
        lab.append(e[n - 2] + e[n - 1])
    else:
        raise InputError("orthogonal coordinates need type B, C or D")
    if any(x.denominator != 1 for x in lab):
        raise InputError(f"{eps} is not an integral weight")
    return tuple(int(x) for x in lab)


# ---------------------------------------------------------------- characters

def _height(spec: LieAlgebraSpec, w) -> Fraction:
    total = Fraction(0)
    for f, p in zip(spec.simple(), spec.split(w, dominant=False)):
        inv = _cartan_inverse(f.family, f.rank)
        total += sum(p[i] * inv[i][j] for i in range(f.rank) for j in range(f.rank))
    return total


def character_decompose(spec: LieAlgebraSpec, weights: dict) -> Decomposition:
    """Split a formal character {weight: multiplicity} into irreducible characters."""
    rest = {tuple(w): m for w, m in weights.items() if m}
    pieces = []
    while rest:
        top = max(rest, key=lambda w: (_height(spec, w), w))
        k = rest[top]
        if k < 0 or any(x < 0 for x in top):
            raise InputError("not the character of a representation")
        pieces.append((top, k))
        for w, m in weight_multiplicities(spec, top).items():
            v = rest.get(w, 0) - k * m
            if v:
                rest[w] = v
            else:
                rest.pop(w, None)
    return decompose_sum(spec, pieces)


def exterior_power(spec: LieAlgebraSpec, hws, p: int) -> Decomposition:
    """Lambda^p of the direct sum of the irreducibles with highest weights hws."""
    basis = []
    for hw in hws:
        for w, m in weight_multiplicities(spec, hw).items():
            basis.extend([w] * m)
    char = {}
    for combo in combinations(range(len(basis)), p):
        w = tuple(sum(basis[i][j] for i in combo) for j in range(spec.rank)) if combo \
            else (0,) * spec.rank
        char[w] = char.get(w, 0) + 1
    return character_decompose(spec, char)
