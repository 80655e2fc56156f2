"""Exterior and symmetric algebra on R^m with exact coefficients.

Vectors of the exterior power Lambda^k are indexed by sorted k-subsets in
lexicographic order; symmetric powers by sorted multi-indices.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import factorial

from flint import fmpq, fmpq_mat

from .exact import zeros


@lru_cache(maxsize=None)
def subsets(m: int, k: int) -> tuple:
    return tuple(combinations(range(m), k))


@lru_cache(maxsize=None)
def subset_index(m: int, k: int) -> dict:
    return {s: i for i, s in enumerate(subsets(m, k))}


@lru_cache(maxsize=None)
def pairs(m: int) -> tuple:
    return subsets(m, 2)


def pair_index(m: int) -> dict:
    return subset_index(m, 2)


def sort_sign(seq):
    """(sign, sorted tuple) of a sequence; sign 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def bivector(m: int, a: int, b: int) -> fmpq_mat:
    """Skew matrix of e_a ^ e_b: e_a -> e_b, e_b -> -e_a."""
    M = fmpq_mat(m, m)
    if a != b:
        M[b, a] = 1
        M[a, b] = -1
    return M


def wedge_of(m: int, X: fmpq_mat, Y: fmpq_mat) -> fmpq_mat:
    """Skew matrix of X ^ Y for column vectors X, Y: Y X^T - X Y^T."""
    return Y * X.transpose() - X * Y.transpose()


def biv_coords(A: fmpq_mat) -> fmpq_mat:
    """Coordinates of a skew matrix in the basis e_a ^ e_b (a < b)."""
    m = A.nrows()
    ps = pairs(m)
    return fmpq_mat(len(ps), 1, [A[b, a] for a, b in ps])


def from_biv_coords(m: int, c) -> fmpq_mat:
    vals = c.entries() if isinstance(c, fmpq_mat) else list(c)
    M = fmpq_mat(m, m)
    for (a, b), x in zip(pairs(m), vals):
        if x != 0:
            M[b, a] = x
            M[a, b] = -x
    return M


def biv_inner(A: fmpq_mat, B: fmpq_mat) -> fmpq:
    """<A, B> = -1/2 tr(AB)."""
    m = A.nrows()
    s = fmpq(0)
    for a, b in pairs(m):
        s += A[b, a] * B[b, a]
    return s


# ---------------------------------------------------------------- exterior powers

def wedge_action(X: fmpq_mat, k: int) -> fmpq_mat:
    """Derivation action of an endomorphism X of R^m on Lambda^k."""
    m = X.nrows()
    basis = subsets(m, k)
    idx = subset_index(m, k)
    n = len(basis)
    M = fmpq_mat(n, n)
    cols = [[(j, X[j, i]) for j in range(m) if X[j, i] != 0] for i in range(m)]
    for c, s in enumerate(basis):
        for pos, i in enumerate(s):
            for j, x in cols[i]:
                t = list(s)
                t[pos] = j
                sign, st = sort_sign(t)
                if sign:
                    M[idx[st], c] += sign * x
    return M


def wedge_matrix(m: int, p: int, q_: int):
    """Matrix of the wedge product Lambda^p (x) Lambda^q -> Lambda^(p+q)."""
    bp, bq, br = subsets(m, p), subsets(m, q_), subset_index(m, p + q_)
    M = fmpq_mat(len(br), len(bp) * len(bq))
    for i, s in enumerate(bp):
        for j, t in enumerate(bq):
            sign, u = sort_sign(s + t)
            if sign:
                M[br[u], i * len(bq) + j] = sign
    return M


def interior_matrix(m: int, a: int, p: int) -> fmpq_mat:
    """Interior product with e_a: Lambda^p -> Lambda^(p-1)."""
    bp, br = subsets(m, p), subset_index(m, p - 1)
    M = fmpq_mat(len(br), len(bp))
    for i, s in enumerate(bp):
        if a in s:
            pos = s.index(a)
            M[br[s[:pos] + s[pos + 1:]], i] = (-1) ** pos
    return M


def exterior_left(m: int, a: int, p: int) -> fmpq_mat:
    """Left wedge with e_a: Lambda^p -> Lambda^(p+1)."""
    bp, br = subsets(m, p), subset_index(m, p + 1)
    M = fmpq_mat(len(br), len(bp))
    for i, s in enumerate(bp):
        if a not in s:
            sign, u = sort_sign((a,) + s)
            M[br[u], i] = sign
    return M


def form_vector(m: int, terms: dict) -> fmpq_mat:
    """Vector in Lambda^k from {index tuple: coefficient}."""
    k = len(next(iter(terms)))
    idx = subset_index(m, k)
    v = zeros(len(idx), 1)
    for t, c in terms.items():
        sign, st = sort_sign(t)
        v[idx[st], 0] += sign * c
    return v


def hodge_star(m: int, k: int) -> fmpq_mat:
    """Hodge star Lambda^k -> Lambda^(m-k) for the standard orientation."""
    bk, br = subsets(m, k), subset_index(m, m - k)
    M = fmpq_mat(len(br), len(bk))
    for i, s in enumerate(bk):
        rest = tuple(j for j in range(m) if j not in s)
        sign, _ = sort_sign(s + rest)
        M[br[rest], i] = sign
    return M


# ---------------------------------------------------------------- symmetric powers

@lru_cache(maxsize=None)
def multisets(m: int, k: int) -> tuple:
    return tuple(combinations_with_replacement(range(m), k))


@lru_cache(maxsize=None)
def multiset_index(m: int, k: int) -> dict:
    return {s: i for i, s in enumerate(multisets(m, k))}


def sym_action(X: fmpq_mat, k: int) -> fmpq_mat:
    """Derivation action on Sym^k in the monomial basis."""
    m = X.nrows()
    basis = multisets(m, k)
    idx = multiset_index(m, k)
    M = fmpq_mat(len(basis), len(basis))
    for c, s in enumerate(basis):
        for pos, i in enumerate(s):
            for j in range(m):
                x = X[j, i]
                if x != 0:
                    t = tuple(sorted(s[:pos] + (j,) + s[pos + 1:]))
                    M[idx[t], c] += x
    return M


def sym_gram(m: int, k: int) -> fmpq_mat:
    """Invariant inner product on Sym^k: monomial e^alpha has norm alpha!/k!."""
    basis = multisets(m, k)
    G = fmpq_mat(len(basis), len(basis))
    for i, s in enumerate(basis):
        w = 1
        for j in set(s):
            w *= factorial(s.count(j))
        G[i, i] = fmpq(w, factorial(k))
    return G


def sym_trace(m: int, k: int) -> fmpq_mat:
    """Metric contraction Sym^k -> Sym^(k-2) on monomials (up to a positive scale)."""
    src, dst = multisets(m, k), multiset_index(m, k - 2)
    M = fmpq_mat(len(dst), len(src))
    for c, s in enumerate(src):
        for j in set(s):
            if s.count(j) >= 2:
                t = list(s)
                t.remove(j)
                t.remove(j)
                M[dst[tuple(t)], c] += s.count(j) * (s.count(j) - 1)
    return M
