"""Complex Clifford modules over Q(i)."""
from __future__ import annotations

from functools import lru_cache

from flint import fmpq_mat

from ..exact import GMat, eye, kron, zeros


def _pauli():
    s1 = GMat(fmpq_mat([[0, 1], [1, 0]]))
    s2 = GMat(fmpq_mat(2, 2), fmpq_mat([[0, -1], [1, 0]]))
    s3 = GMat(fmpq_mat([[1, 0], [0, -1]]))
    return s1, s2, s3


def gkron(A: GMat, B: GMat) -> GMat:
    return GMat(kron(A.re, B.re) - kron(A.im, B.im), kron(A.re, B.im) + kron(A.im, B.re))


@lru_cache(maxsize=None)
def gamma_matrices(m: int) -> tuple:
    """Anti-Hermitian gamma_a with gamma_a gamma_b + gamma_b gamma_a = -2 delta_ab.

    Complex dimension 2^(m // 2).
    """
    s1, s2, s3 = _pauli()
    k = m // 2
    one = GMat(eye(2))
    herm = []
    for j in range(k):
        for s in (s1, s2):
            factors = [s3] * j + [s] + [one] * (k - j - 1)
            M = factors[0]
            for f in factors[1:]:
                M = gkron(M, f)
            herm.append(M)
    if m % 2:
        if k == 0:
            herm.append(GMat(eye(1)))
        else:
            M = s3
            for _ in range(k - 1):
                M = gkron(M, s3)
            herm.append(M)
    return tuple(h.times_i() for h in herm)


def spin_action(m: int, X: fmpq_mat) -> GMat:
    """Spin representation of a skew matrix: e_a ^ e_b -> 1/2 gamma_a gamma_b."""
    g = gamma_matrices(m)
    n = g[0].nrows()
    out = GMat(zeros(n, n))
    for a in range(m):
        for b in range(a + 1, m):
            c = X[b, a]
            if c != 0:
                out = out + (g[a] * g[b]) * (c / 2)
    return out


def clifford_relations_hold(m: int) -> bool:
    g = gamma_matrices(m)
    n = g[0].nrows()
    for a in range(m):
        for b in range(m):
            lhs = g[a] * g[b] + g[b] * g[a]
            rhs = GMat(eye(n) * (-2 if a == b else 0))
            if lhs != rhs:
                return False
    return True
