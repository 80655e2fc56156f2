"""Truncated multivariate polynomials with exact coefficients and degree accounting."""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from flint import fmpq

from ..errors import InputError
from ..exact import encode_scalar, q


class DegreeBudgetError(InputError):
    """A jet was used beyond the degree up to which it is known."""


class Monomials:
    """Monomials of total degree <= N in m variables, with product and derivative tables."""

    def __init__(self, m: int, N: int):
        self.m, self.N = m, N
        exps = [e for e in product(range(N + 1), repeat=m) if sum(e) <= N]
        exps.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        self.exps = exps
        self.index = {e: i for i, e in enumerate(exps)}
        self.deg = [sum(e) for e in exps]
        n = len(exps)
        self.mul = [[self.index.get(tuple(a + b for a, b in zip(exps[i], exps[j])), -1)
                     for j in range(n)] for i in range(n)]
        self.diff = []
        for v in range(m):
            row = []
            for e in exps:
                if e[v] == 0:
                    row.append(None)
                else:
                    f = list(e)
                    f[v] -= 1
                    row.append((e[v], self.index[tuple(f)]))
            self.diff.append(row)

    def __len__(self):
        return len(self.exps)


@lru_cache(maxsize=None)
def monomials(m: int, N: int) -> Monomials:
    return Monomials(m, N)


class PolyJet:
    """A polynomial known up to (and including) total degree ``cap``.

    Terms above ``cap`` are never stored.  Sums and products take the minimum
    cap, derivatives lower it by one; reading a value needs cap >= 0.
    """

    __slots__ = ("mono", "cap", "c")

    def __init__(self, mono: Monomials, coeffs=None, cap: int | None = None):
        self.mono = mono
        self.cap = mono.N if cap is None else cap
        self.c = {}
        if coeffs:
            deg = mono.deg
            for k, v in coeffs.items():
                if v != 0 and deg[k] <= self.cap:
                    self.c[k] = v

    # ------------------------------------------------------------ constructors
    @classmethod
    def const(cls, mono, value, cap=None):
        v = q(value) if not isinstance(value, fmpq) else value
        return cls(mono, {0: v} if v != 0 else None, cap)

    @classmethod
    def var(cls, mono, i, cap=None):
        e = [0] * mono.m
        e[i] = 1
        return cls(mono, {mono.index[tuple(e)]: fmpq(1)}, cap)

    @classmethod
    def from_terms(cls, mono, terms: dict, cap=None):
        """terms: exponent tuple -> coefficient."""
        return cls(mono, {mono.index[tuple(e)]: q(v) for e, v in terms.items()}, cap)

    # ------------------------------------------------------------ arithmetic
    def _new(self, coeffs, cap):
        out = PolyJet.__new__(PolyJet)
        out.mono, out.cap, out.c = self.mono, cap, coeffs
        return out

    def __add__(self, other):
        if not isinstance(other, PolyJet):
            return self + PolyJet.const(self.mono, other)
        cap = min(self.cap, other.cap)
        deg = self.mono.deg
        out = {k: v for k, v in self.c.items() if deg[k] <= cap}
        for k, v in other.c.items():
            if deg[k] <= cap:
                s = out.get(k, 0) + v
                if s != 0:
                    out[k] = s
                else:
                    out.pop(k, None)
        return self._new(out, cap)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.c.items()}, self.cap)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        if s == 0:
            return self._new({}, self.cap)
        return self._new({k: v * s for k, v in self.c.items()}, self.cap)

    def __mul__(self, other):
        if not isinstance(other, PolyJet):
            return self.scale(other)
        cap = min(self.cap, other.cap)
        deg, mul = self.mono.deg, self.mono.mul
        out = {}
        for i, a in self.c.items():
            di = deg[i]
            if di > cap:
                continue
            row = mul[i]
            for j, b in other.c.items():
                if di + deg[j] <= cap:
                    k = row[j]
                    out[k] = out.get(k, 0) + a * b
        return self._new({k: v for k, v in out.items() if v != 0}, cap)

    __rmul__ = __mul__

    def truncate(self, cap: int):
        cap = min(cap, self.cap)
        deg = self.mono.deg
        return self._new({k: v for k, v in self.c.items() if deg[k] <= cap}, cap)

    def diff(self, v: int):
        tab = self.mono.diff[v]
        out = {}
        for k, c in self.c.items():
            t = tab[k]
            if t is not None:
                e, j = t
                out[j] = c * e
        return self._new(out, self.cap - 1)

    # ------------------------------------------------------------ inspection
    def at0(self) -> fmpq:
        if self.cap < 0:
            raise DegreeBudgetError("jet evaluated at 0 with no reliable degree left; "
                                    "raise degree_cap by at least 1")
        return self.c.get(0, fmpq(0))

    def is_zero(self) -> bool:
        return not self.c

    def low_order(self) -> int:
        """Smallest degree present (cap + 1 if zero)."""
        return min((self.mono.deg[k] for k in self.c), default=self.cap + 1)

    def terms(self) -> dict:
        return {self.mono.exps[k]: v for k, v in sorted(self.c.items())}

    def __eq__(self, other):
        if not isinstance(other, PolyJet):
            other = PolyJet.const(self.mono, other)
        cap = min(self.cap, other.cap)
        return self.truncate(cap).c == other.truncate(cap).c

    def __hash__(self):
        return hash((self.cap, tuple(sorted(self.c.items()))))

    def __repr__(self):
        if not self.c:
            return f"0 + O({self.cap + 1})"
        parts = []
        for e, v in self.terms().items():
            mon = "*".join(f"x{i}^{p}" if p > 1 else f"x{i}" for i, p in enumerate(e) if p)
            parts.append(f"{v}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts) + f" + O({self.cap + 1})"

    def to_json(self):
        return {"cap": self.cap,
                "terms": [[list(e), encode_scalar(v)] for e, v in self.terms().items()]}


def zero(mono, cap=None) -> PolyJet:
    return PolyJet(mono, None, cap)


def lincomb(mono, pairs, cap=None) -> PolyJet:
    """sum c_i * jet_i for (c_i, jet_i) with rational c_i."""
    caps = [j.cap for _, j in pairs]
    cap = min(caps + ([cap] if cap is not None else [])) if caps else (mono.N if cap is None else cap)
    deg = mono.deg
    out = {}
    for c, j in pairs:
        if c == 0:
            continue
        for k, v in j.c.items():
            if deg[k] <= cap:
                out[k] = out.get(k, 0) + c * v
    res = PolyJet.__new__(PolyJet)
    res.mono, res.cap, res.c = mono, cap, {k: v for k, v in out.items() if v != 0}
    return res


def inv_series(a: PolyJet) -> PolyJet:
    """1/a for a jet with nonzero constant term."""
    a0 = a.at0()
    if a0 == 0:
        raise InputError("jet is not invertible at 0")
    u = (a.scale(1 / a0) - 1)          # vanishes at 0
    out = PolyJet.const(a.mono, 1, a.cap)
    term = PolyJet.const(a.mono, 1, a.cap)
    for _ in range(a.cap):
        term = term * u * -1
        out = out + term
    return out.scale(1 / a0)


def sqrt_series(a: PolyJet) -> PolyJet:
    """sqrt(a) for a jet with constant term 1 (binomial series, rational coefficients)."""
    if a.at0() != 1:
        raise InputError("square roots are taken of jets with constant term 1 only")
    u = a - 1
    out = PolyJet.const(a.mono, 1, a.cap)
    term = PolyJet.const(a.mono, 1, a.cap)
    coef = fmpq(1)
    for k in range(1, a.cap + 1):
        coef = coef * (fmpq(1, 2) - (k - 1)) / k
        term = term * u
        out = out + term.scale(coef)
    return out
