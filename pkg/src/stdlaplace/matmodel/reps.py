"""Matrix representations of a holonomy algebra built from tensor functors."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from flint import fmpq, fmpq_mat

from .. import liealg
from ..errors import InputError, StructuralError
from ..exact import GMat, eye, kron, nullspace, restrict, zeros
from ..holctx import HolonomyContext
from ..tensors import pairs, subsets, sym_action, sym_gram, sym_trace, wedge_action
from .clifford import gkron, spin_action
from .isotypic import isotypic_components


@dataclass(eq=False)
class MatrixRep:
    """rho(X_a) for each stored basis element X_a of hol, plus an invariant form."""

    ctx: HolonomyContext
    name: str
    action: list
    gram: object
    extend: object = None        # skew matrix -> rep matrix, defined on all of so(m)
    complex: bool = False
    labels: tuple | None = None  # highest weights of the complexification, if known
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.action[0].nrows() if self.action else self.gram.nrows()

    def act(self, A: fmpq_mat):
        """rho(pr_hol A) for a skew matrix A."""
        n = self.dim
        out = GMat.zeros(n, n) if self.complex else zeros(n, n)
        for c, M in zip(self.ctx.coefficients(A), self.action):
            if c != 0:
                out = out + M * c
        return out

    def P(self, a: int, b: int):
        """rho(pr_hol(e_a ^ e_b))."""
        key = ("P", a, b)
        if key not in self._cache:
            if a == b:
                n = self.dim
                val = GMat.zeros(n, n) if self.complex else zeros(n, n)
            elif a > b:
                val = -self.P(b, a)
            else:
                val = self.act(self.ctx.bivector(a, b))
            self._cache[key] = val
        return self._cache[key]

    def identity(self):
        return GMat.eye(self.dim) if self.complex else eye(self.dim)

    def casimir(self):
        if "cas" not in self._cache:
            n = self.dim
            C = GMat.zeros(n, n) if self.complex else zeros(n, n)
            for A, nrm in zip(self.action, self.ctx.norms):
                C = C - (A * A) * (1 / nrm)
            self._cache["cas"] = C
        return self._cache["cas"]

    def is_consistent(self) -> bool:
        """Bracket relations rho([X, Y]) = [rho X, rho Y] and invariance of the form."""
        from ..exact import commutator
        for i, X in enumerate(self.ctx.basis):
            A = self.action[i]
            if self.complex:
                if A.conj_transpose() * self.gram + self.gram * A != GMat.zeros(self.dim, self.dim):
                    return False
            elif A.transpose() * self.gram + self.gram * A != zeros(self.dim, self.dim):
                return False
            for j in range(i + 1, len(self.ctx.basis)):
                lhs = self.act(commutator(X, self.ctx.basis[j]))
                rhs = A * self.action[j] - self.action[j] * A
                if lhs != rhs:
                    return False
        return True


def _from_extension(ctx, name, ext, gram, complex_=False, labels=None):
    action = [ext(X) for X in ctx.basis]
    return MatrixRep(ctx, name, action, gram, ext, complex_, labels)


# ---------------------------------------------------------------- elementary reps

def tangent(ctx) -> MatrixRep:
    return _from_extension(ctx, "T", lambda X: X, eye(ctx.m), labels=ctx.t_weights)


def trivial(ctx) -> MatrixRep:
    return _from_extension(ctx, "triv", lambda X: zeros(1, 1), eye(1),
                           labels=((0,) * ctx.liealg_spec.rank,))


def exterior(ctx, p: int) -> MatrixRep:
    if not 0 <= p <= ctx.m:
        raise InputError(f"Lambda^{p} needs 0 <= p <= {ctx.m}")
    n = len(subsets(ctx.m, p))
    return _from_extension(ctx, f"Lambda^{p}", lambda X: wedge_action(X, p), eye(n),
                           labels=_so_labels(ctx, "lambda", p))


def symmetric(ctx, k: int) -> MatrixRep:
    return _from_extension(ctx, f"Sym^{k}", lambda X: sym_action(X, k), sym_gram(ctx.m, k))


def symmetric_traceless(ctx, k: int) -> MatrixRep:
    if k < 2:
        return symmetric(ctx, k)
    K = nullspace(sym_trace(ctx.m, k))
    G = sym_gram(ctx.m, k)

    def ext(X):
        return restrict(K, sym_action(X, k))

    return _from_extension(ctx, f"Sym^{k}_0", ext, K.transpose() * G * K,
                           labels=_so_labels(ctx, "sym0", k))


def spinor(ctx) -> MatrixRep:
    if not ctx.spin_enabled:
        raise InputError(f"{ctx.name} has no spin structure enabled")
    m = ctx.m
    n = 2 ** (m // 2)
    return _from_extension(ctx, "Sigma", lambda X: spin_action(m, X), GMat.eye(n), True,
                           labels=_so_labels(ctx, "spin", 0))


def adjoint(ctx) -> MatrixRep:
    """hol acting on itself, in the stored orthogonal basis."""
    from ..exact import commutator

    def ext(X):
        cols = []
        for Y in ctx.basis:
            cols.append(ctx.coefficients(commutator(X, Y)))
        d = ctx.dim
        return fmpq_mat(d, d, [cols[j][i] for i in range(d) for j in range(d)])

    G = zeros(ctx.dim, ctx.dim)
    for i, n in enumerate(ctx.norms):
        G[i, i] = n
    return MatrixRep(ctx, "hol", [ext(X) for X in ctx.basis], G, None)


def _so_labels(ctx, what, k):
    if ctx.kind != "SO":
        return None
    m = ctx.m
    spec = ctx.liealg_spec
    if m == 3:
        if what == "lambda":
            return (((0,),) if k in (0, 3) else ((2,),))
        if what == "sym0":
            return ((2 * k,),)
        return ((1,),)
    if m == 4:
        if what == "lambda":
            return {0: ((0, 0),), 1: ((1, 1),), 2: ((0, 2), (2, 0)), 3: ((1, 1),),
                    4: ((0, 0),)}[k]
        if what == "sym0":
            return ((k, k),)
        return ((0, 1), (1, 0))
    n = m // 2
    fam = spec.factors[0][0]
    if what == "lambda":
        p = min(k, m - k)
        eps = [1] * p + [0] * (n - p)
        if fam == "D" and p == n:
            return tuple(sorted({liealg.from_orthogonal(spec, eps),
                                 liealg.from_orthogonal(spec, eps[:-1] + [-1])}))
        return (liealg.from_orthogonal(spec, eps),)
    if what == "sym0":
        return (liealg.from_orthogonal(spec, [k] + [0] * (n - 1)),)
    half = [Fraction(1, 2)] * n
    if fam == "B":
        return (liealg.from_orthogonal(spec, half),)
    return tuple(sorted({liealg.from_orthogonal(spec, half),
                         liealg.from_orthogonal(spec, half[:-1] + [Fraction(-1, 2)])}))


# ---------------------------------------------------------------- constructions

def tensor(V: MatrixRep, W: MatrixRep) -> MatrixRep:
    if V.ctx is not W.ctx:
        raise InputError("tensor factors live in different contexts")
    if V.complex or W.complex:
        return _complex_tensor(V, W)
    Iv, Iw = eye(V.dim), eye(W.dim)
    action = [kron(A, Iw) + kron(Iv, B) for A, B in zip(V.action, W.action)]
    ext = None
    if V.extend and W.extend:
        ext = lambda X: kron(V.extend(X), Iw) + kron(Iv, W.extend(X))  # noqa: E731
    return MatrixRep(V.ctx, f"({V.name})x({W.name})", action, kron(V.gram, W.gram), ext)


def _complex_tensor(V, W):
    def g(x):
        return x if isinstance(x, GMat) else GMat(x)

    Iv, Iw = GMat.eye(V.dim), GMat.eye(W.dim)
    action = [gkron(g(A), Iw) + gkron(Iv, g(B)) for A, B in zip(V.action, W.action)]
    ext = None
    if V.extend and W.extend:
        ext = lambda X: gkron(g(V.extend(X)), Iw) + gkron(Iv, g(W.extend(X)))  # noqa: E731
    return MatrixRep(V.ctx, f"({V.name})x({W.name})", action, gkron(g(V.gram), g(W.gram)),
                     ext, True)


def direct_sum(V: MatrixRep, W: MatrixRep) -> MatrixRep:
    if V.complex or W.complex:
        raise InputError("direct sums of complex reps are not supported")

    def blk(A, B):
        M = zeros(A.nrows() + B.nrows(), A.ncols() + B.ncols())
        for i in range(A.nrows()):
            for j in range(A.ncols()):
                M[i, j] = A[i, j]
        o = A.nrows()
        for i in range(B.nrows()):
            for j in range(B.ncols()):
                M[o + i, o + j] = B[i, j]
        return M

    action = [blk(A, B) for A, B in zip(V.action, W.action)]
    ext = None
    if V.extend and W.extend:
        ext = lambda X: blk(V.extend(X), W.extend(X))  # noqa: E731
    return MatrixRep(V.ctx, f"{V.name}+{W.name}", action, blk(V.gram, W.gram), ext)


def subrep(V: MatrixRep, U: fmpq_mat, name: str, labels=None) -> MatrixRep:
    """Restriction of V to the invariant subspace spanned by the columns of U."""
    action = [restrict(U, A) for A in V.action]
    ext = None
    if V.extend:
        def restricted(X):
            return restrict(U, V.extend(X))
        ext = restricted
        try:
            for X in _so_probe(V.ctx.m):
                ext(X)
        except StructuralError:
            ext = None
    return MatrixRep(V.ctx, name, action, U.transpose() * V.gram * U, ext, labels=labels)


def _so_probe(m):
    from ..tensors import bivector
    return [bivector(m, a, b) for a, b in pairs(m)]


def components(V: MatrixRep):
    """Isotypic components of a real rep: list of (casimir factor, basis)."""
    if V.complex:
        raise InputError("isotypic splitting is implemented for real reps")
    return isotypic_components(V.casimir(), V.action)


def cartan_summand(V: MatrixRep, W: MatrixRep) -> MatrixRep:
    """Top constituent of V (x) W: the one generated by the product of top weight vectors.

    It is the unique constituent of maximal Casimir eigenvalue.
    """
    VW = tensor(V, W)
    comps = components(VW)
    best = None
    for f, U in comps:
        lam = -f.coeffs()[0] if f.degree() == 1 else None
        if lam is None:
            raise StructuralError("irrational Casimir eigenvalue in a tensor product")
        if best is None or lam > best[0]:
            best = (lam, [U])
        elif lam == best[0]:
            best[1].append(U)
    if len(best[1]) != 1:
        raise StructuralError("Cartan summand is not uniquely determined")
    return subrep(VW, best[1][0], f"Cartan({V.name},{W.name})")


def isotypic_piece(V: MatrixRep, spec_weights, name=None) -> MatrixRep:
    """The isotypic component of V whose per-factor Casimirs match a weight."""
    ctx = V.ctx
    target = tuple(tuple(w) for w in spec_weights)
    for f, U in components(V):
        sub = subrep(V, U, name or V.name)
        if label_component(ctx, sub) and any(w in label_component(ctx, sub)[0] for w in target):
            sub.labels = label_component(ctx, sub)[0]
            return sub
    raise InputError(f"no constituent with highest weight {list(target)} in {V.name}")


# ---------------------------------------------------------------- labels

def ideal_casimirs(ctx: HolonomyContext, V: MatrixRep):
    """Per simple factor Casimir eigenvalues on V, or None if not scalar."""
    out = []
    for idx in ctx.factor_ideals:
        C = ctx.casimir_ideal(V.action, idx)
        c = C[0, 0] if V.dim else fmpq(0)
        if C != eye(V.dim) * c:
            return None
        out.append(Fraction(int(c.p), int(c.q)))
    return tuple(out)


@lru_cache(maxsize=None)
def _small_weights(family, rank, bound):
    spec = liealg.LieAlgebraSpec(((family, rank),))
    out = []
    frontier = [(0,) * rank]
    seen = set(frontier)
    while frontier:
        nxt = []
        for w in frontier:
            out.append(w)
            for i in range(rank):
                v = tuple(x + (j == i) for j, x in enumerate(w))
                if v not in seen and liealg.weyl_dimension(spec, v) <= bound:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return tuple(out)


def label_component(ctx: HolonomyContext, V: MatrixRep):
    """(weights, multiplicity) for an isotypic real rep, by Casimir and dimension."""
    cas = ideal_casimirs(ctx, V)
    if cas is None:
        return None
    spec = ctx.liealg_spec
    per = []
    for (fam, r), c, s in zip(spec.factors, cas, ctx.embedding_scale):
        fac = liealg.simple_factor(fam, r)
        opts = [w for w in _small_weights(fam, r, V.dim)
                if s * fac.inner(w, tuple(x + 2 for x in w)) == c]
        per.append(opts)
    cands = [spec.join(c) for c in product(*per)]
    cands = [w for w in cands if liealg.weyl_dimension(spec, w) <= V.dim]
    options = []
    for w in cands:
        d = liealg.dimension(spec, w)
        dual = liealg.dual_hw(spec, w)
        group = tuple(sorted({w, dual}))
        real_dim = d * len(group)
        for size in {real_dim, 2 * d}:
            if size and V.dim % size == 0:
                options.append((group, V.dim // size))
    options = sorted(set(options))
    if len(options) == 1:
        return options[0]
    if options:
        return options[0][0], None
    return None


# ---------------------------------------------------------------- functor

_TOKEN = re.compile(r"\s*(cartan\(|lambda:\d+|sym0:\d+|sym:\d+|qk:\d+,\d+,\d+|spinor|sigma|"
                    r"triv|hol|ad|t|\(|\)|\*|\+|,|x)", re.I)


def rep_functor(ctx: HolonomyContext, expr: str) -> MatrixRep:
    """Build a representation from an expression.

    Atoms: t, triv, lambda:p, sym:k, sym0:k, spinor, hol, qk:k,a,b.
    Operators: a*b (tensor product), a+b (direct sum), cartan(a,b).
    """
    tokens = _tokenise(expr)
    pos, rep = _parse_sum(ctx, tokens, 0)
    if pos != len(tokens):
        raise InputError(f"trailing input in representation expression {expr!r}")
    return rep


def _tokenise(expr):
    out, i = [], 0
    expr = expr.strip()
    while i < len(expr):
        if expr[i].isspace():
            i += 1
            continue
        mt = _TOKEN.match(expr, i)
        if not mt:
            raise InputError(f"cannot parse representation expression {expr!r}")
        out.append(mt.group(1).lower())
        i = mt.end()
    return out


def _parse_sum(ctx, toks, i):
    i, rep = _parse_prod(ctx, toks, i)
    while i < len(toks) and toks[i] == "+":
        i, other = _parse_prod(ctx, toks, i + 1)
        rep = direct_sum(rep, other)
    return i, rep


def _parse_prod(ctx, toks, i):
    i, rep = _parse_atom(ctx, toks, i)
    while i < len(toks) and toks[i] in ("*", "x"):
        i, other = _parse_atom(ctx, toks, i + 1)
        rep = tensor(rep, other)
    return i, rep


def _parse_atom(ctx, toks, i):
    if i >= len(toks):
        raise InputError("unexpected end of representation expression")
    t = toks[i]
    if t == "(":
        i, rep = _parse_sum(ctx, toks, i + 1)
        if i >= len(toks) or toks[i] != ")":
            raise InputError("unbalanced parentheses")
        return i + 1, rep
    if t == "cartan(":
        i, a = _parse_sum(ctx, toks, i + 1)
        if i >= len(toks) or toks[i] != ",":
            raise InputError("cartan(a, b) needs two arguments")
        i, b = _parse_sum(ctx, toks, i + 1)
        if i >= len(toks) or toks[i] != ")":
            raise InputError("unbalanced parentheses")
        return i + 1, cartan_summand(a, b)
    if t == "t":
        return i + 1, tangent(ctx)
    if t == "triv":
        return i + 1, trivial(ctx)
    if t in ("hol", "ad"):
        return i + 1, adjoint(ctx)
    if t in ("spinor", "sigma"):
        return i + 1, spinor(ctx)
    if t.startswith("lambda:"):
        return i + 1, exterior(ctx, int(t.split(":")[1]))
    if t.startswith("sym0:"):
        return i + 1, symmetric_traceless(ctx, int(t.split(":")[1]))
    if t.startswith("sym:"):
        return i + 1, symmetric(ctx, int(t.split(":")[1]))
    if t.startswith("qk:"):
        k, a, b = (int(x) for x in t[3:].split(","))
        return i + 1, qk_bundle(ctx, k, a, b)
    raise InputError(f"unexpected token {t!r}")


def qk_bundle(ctx: HolonomyContext, k: int, a: int, b: int) -> MatrixRep:
    """Real form of Sym^k H (x) Lambda^{a,b}_0 E for Sp(n)Sp(1).

    Exists only when k + a + b is even; it is cut out of a tensor power of T.
    """
    if ctx.kind != "SpSp1":
        raise InputError("qk:k,a,b bundles need an Sp(n)Sp(1) context")
    if b > a:
        raise InputError("qk:k,a,b needs b <= a")
    n = ctx.m // 4
    if a > n:
        raise InputError("qk:k,a,b needs a <= n")
    if (k + a + b) % 2:
        raise InputError(f"Sym^{k}H x Lambda^{{{a},{b}}}E has no real structure (k+a+b odd)")
    eps = [0] * n
    for j in range(a):
        eps[j] += 1
    for j in range(b):
        eps[j] += 1
    c_lab = liealg.from_orthogonal(liealg.LieAlgebraSpec((("C", n),)), eps) if n >= 2 else (a + b,)
    hw = (k,) + tuple(c_lab)
    power = max(k, a + b)
    if power == 0:
        rep = trivial(ctx)
        rep.labels = (hw,)
        return rep
    if power > 3:
        raise InputError("qk bundles are built from at most the third tensor power of T")
    V = tangent(ctx)
    W = V
    for _ in range(power - 1):
        W = tensor(W, V)
    rep = isotypic_piece(W, [hw], name=f"qk:{k},{a},{b}")
    lab = label_component(ctx, rep)
    if lab is None or lab[1] != 1:
        # several copies: keep one irreducible copy via a commutant idempotent
        raise StructuralError("qk bundle occurs with multiplicity; not supported")
    return rep
