"""Exact linear algebra over Q and Q(i) on top of python-flint.

Matrices are ``flint.fmpq_mat``.  Complex matrices with Gaussian-rational
entries are ``GMat`` pairs (real part, imaginary part).
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce

from flint import fmpq, fmpq_mat, fmpq_poly, fmpz, fmpz_mat, nmod_mat

from .errors import InputError, StructuralError

# Two large primes for modular rank shortcuts.
PRIMES = (2147483647, 2305843009213693951)


def q(x, den=1) -> fmpq:
    """Coerce ints, Fractions, strings "a/b" and fmpq to fmpq."""
    if isinstance(x, fmpq):
        return x if den == 1 else x / den
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator) / den
    if isinstance(x, str):
        try:
            f = Fraction(x)
        except ValueError:
            raise InputError(f"not an exact rational: {x!r}") from None
        return fmpq(f.numerator, f.denominator) / den
    if isinstance(x, (int, fmpz)):
        return fmpq(x, den)
    raise InputError(f"not an exact rational: {x!r}")


def to_fraction(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def mat(rows) -> fmpq_mat:
    rows = [list(r) for r in rows]
    if not rows:
        return fmpq_mat(0, 0)
    return fmpq_mat(len(rows), len(rows[0]), [q(x) for r in rows for x in r])


def zeros(r: int, c: int) -> fmpq_mat:
    return fmpq_mat(r, c)


def eye(n: int) -> fmpq_mat:
    M = fmpq_mat(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def diag(values) -> fmpq_mat:
    values = list(values)
    M = fmpq_mat(len(values), len(values))
    for i, v in enumerate(values):
        M[i, i] = q(v)
    return M


def shape(M):
    return M.nrows(), M.ncols()


def is_zero(M) -> bool:
    if isinstance(M, GMat):
        return M.is_zero()
    return all(x == 0 for x in M.entries())


def kron(A: fmpq_mat, B: fmpq_mat) -> fmpq_mat:
    a, b = A.tolist(), B.tolist()
    ra, ca, rb, cb = A.nrows(), A.ncols(), B.nrows(), B.ncols()
    out = []
    for i in range(ra):
        Ai = a[i]
        for k in range(rb):
            Bk = b[k]
            for j in range(ca):
                x = Ai[j]
                if x == 0:
                    out.extend([0] * cb)
                else:
                    out.extend([x * y for y in Bk])
    return fmpq_mat(ra * rb, ca * cb, out)


def hstack(mats) -> fmpq_mat:
    mats = list(mats)
    r = mats[0].nrows()
    rows = [[] for _ in range(r)]
    for M in mats:
        if M.nrows() != r:
            raise StructuralError("hstack row mismatch")
        for i, row in enumerate(M.tolist()):
            rows[i].extend(row)
    c = sum(M.ncols() for M in mats)
    return fmpq_mat(r, c, [x for row in rows for x in row])


def vstack(mats) -> fmpq_mat:
    mats = list(mats)
    c = mats[0].ncols()
    flat = []
    for M in mats:
        if M.ncols() != c:
            raise StructuralError("vstack column mismatch")
        flat.extend(M.entries())
    return fmpq_mat(sum(M.nrows() for M in mats), c, flat)


def submatrix(M: fmpq_mat, rows=None, cols=None) -> fmpq_mat:
    rows = range(M.nrows()) if rows is None else list(rows)
    cols = range(M.ncols()) if cols is None else list(cols)
    t = M.tolist()
    return fmpq_mat(len(rows), len(cols), [t[i][j] for i in rows for j in cols])


def column(M: fmpq_mat, j: int) -> fmpq_mat:
    return submatrix(M, cols=[j])


def columns(M: fmpq_mat):
    return [column(M, j) for j in range(M.ncols())]


def from_columns(cols, nrows=None) -> fmpq_mat:
    cols = list(cols)
    if not cols:
        return fmpq_mat(nrows or 0, 0)
    return hstack(cols)


def trace(M) -> fmpq:
    return sum((M[i, i] for i in range(M.nrows())), fmpq(0))


def dot(u: fmpq_mat, v: fmpq_mat) -> fmpq:
    """Euclidean pairing of two column vectors (or flattened matrices)."""
    return sum((a * b for a, b in zip(u.entries(), v.entries())), fmpq(0))


def vec(values) -> fmpq_mat:
    values = list(values)
    return fmpq_mat(len(values), 1, [q(v) for v in values])


def _integral(M: fmpq_mat) -> fmpz_mat:
    num, _ = M.numer_denom()
    return num


def _primitive_columns(N: fmpz_mat, k: int) -> fmpq_mat:
    cols = []
    rows = N.tolist()
    for j in range(k):
        c = [rows[i][j] for i in range(N.nrows())]
        g = reduce(lambda a, b: a.gcd(b), (fmpz(x) for x in c), fmpz(0))
        if g != 0:
            # sign convention: first nonzero entry positive
            first = next(x for x in c if x != 0)
            if first < 0:
                g = -g
            c = [fmpz(x) // g for x in c]
        cols.append(c)
    n = N.nrows()
    return fmpq_mat(n, k, [cols[j][i] for i in range(n) for j in range(k)])


def nullspace(M: fmpq_mat) -> fmpq_mat:
    """Columns spanning ker M, scaled to primitive integer vectors."""
    if M.nrows() == 0:
        return eye(M.ncols())
    N, k = _integral(M).nullspace()
    return _primitive_columns(N, int(k))


def rank(M: fmpq_mat) -> int:
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return int(M.rank())


def rank_mod_p(M: fmpq_mat, p: int = PRIMES[0]) -> int:
    """Rank modulo p; a lower bound for the rank over Q."""
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    num = _integral(M)
    return int(nmod_mat(num.tolist(), p).rank())


def nullity_upper_bound(M: fmpq_mat) -> int:
    return M.ncols() - max(rank_mod_p(M, p) for p in PRIMES[:1])


def column_basis(M: fmpq_mat) -> fmpq_mat:
    """A maximal independent subset of the columns of M."""
    R, r = M.rref()
    piv = []
    row = 0
    for j in range(M.ncols()):
        if row < r and R[row, j] != 0:
            piv.append(j)
            row += 1
    return submatrix(M, cols=piv)


def solve_exact(A: fmpq_mat, B: fmpq_mat) -> fmpq_mat:
    """X with A X = B for A of full column rank; raises if inconsistent."""
    At = A.transpose()
    X = (At * A).solve(At * B)
    if A * X != B:
        raise StructuralError("linear system has no exact solution")
    return X


def restrict(U: fmpq_mat, A: fmpq_mat) -> fmpq_mat:
    """Matrix of A on the invariant subspace spanned by the columns of U."""
    return solve_exact(U, A * U)


def coordinates(U: fmpq_mat, v: fmpq_mat) -> fmpq_mat:
    return solve_exact(U, v)


def gram_schmidt(vectors, gram=None):
    """Orthogonalise without normalising.  Returns (vectors, squared norms)."""
    out, norms = [], []
    for v in vectors:
        w = v
        for u, n in zip(out, norms):
            c = _pair(u, w, gram) / n
            if c != 0:
                w = w - u * c
        n = _pair(w, w, gram)
        if n != 0:
            out.append(w)
            norms.append(n)
    return out, norms


def _pair(u, v, gram):
    if gram is None:
        return dot(u, v)
    return (u.transpose() * gram * v)[0, 0]


def poly_eval_matrix(p: fmpq_poly, M: fmpq_mat) -> fmpq_mat:
    coeffs = p.coeffs()
    n = M.nrows()
    R = zeros(n, n)
    for c in reversed(coeffs):
        R = R * M
        if c != 0:
            R = R + eye(n) * c
    return R


def minpoly_factors(M: fmpq_mat):
    """Irreducible monic factors of the minimal polynomial of M."""
    _, facs = M.minpoly().factor()
    out = []
    for f, _mult in facs:
        lead = f.coeffs()[-1]
        out.append(f / lead)
    return out


def rational_eigenvalue(f: fmpq_poly):
    """Root of a monic linear factor, else None."""
    if f.degree() != 1:
        return None
    c = f.coeffs()
    return -c[0] / c[1]


def is_symmetric(M: fmpq_mat, gram=None) -> bool:
    if gram is None:
        return M == M.transpose()
    return gram * M == M.transpose() * gram


def commutator(A, B):
    return A * B - B * A


# ---------------------------------------------------------------- Q(i)

class GMat:
    """Matrix over Q(i) stored as a pair of rational matrices."""

    __slots__ = ("re", "im")

    def __init__(self, re: fmpq_mat, im: fmpq_mat | None = None):
        self.re = re
        self.im = im if im is not None else fmpq_mat(re.nrows(), re.ncols())

    @classmethod
    def zeros(cls, r, c):
        return cls(fmpq_mat(r, c), fmpq_mat(r, c))

    @classmethod
    def eye(cls, n):
        return cls(eye(n))

    def nrows(self):
        return self.re.nrows()

    def ncols(self):
        return self.re.ncols()

    def __add__(self, other):
        other = _as_gmat(other, self)
        return GMat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gmat(other, self)
        return GMat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_gmat(other, self) - self

    def __neg__(self):
        return GMat(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GMat):
            return GMat(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)
        if isinstance(other, fmpq_mat):
            return GMat(self.re * other, self.im * other)
        if isinstance(other, GaussQ):
            return GMat(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)
        c = q(other)
        return GMat(self.re * c, self.im * c)

    def __rmul__(self, other):
        if isinstance(other, fmpq_mat):
            return GMat(other * self.re, other * self.im)
        return self.__mul__(other)

    def times_i(self):
        return GMat(-self.im, self.re)

    def conj_transpose(self):
        return GMat(self.re.transpose(), -self.im.transpose())

    def transpose(self):
        return GMat(self.re.transpose(), self.im.transpose())

    def __eq__(self, other):
        if isinstance(other, fmpq_mat):
            other = GMat(other)
        if not isinstance(other, GMat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((tuple(self.re.entries()), tuple(self.im.entries())))

    def is_zero(self):
        return is_zero(self.re) and is_zero(self.im)

    def entry(self, i, j):
        return GaussQ(self.re[i, j], self.im[i, j])

    def trace(self):
        return GaussQ(trace(self.re), trace(self.im))

    def realify(self) -> fmpq_mat:
        """Real 2n x 2n matrix of the underlying R-linear map."""
        top = hstack([self.re, -self.im])
        bot = hstack([self.im, self.re])
        return vstack([top, bot])

    def __repr__(self):
        return f"GMat(re={self.re!r}, im={self.im!r})"


def _as_gmat(x, like):
    if isinstance(x, GMat):
        return x
    if isinstance(x, fmpq_mat):
        return GMat(x)
    raise TypeError(f"cannot combine GMat with {type(x).__name__}")


class GaussQ:
    """Gaussian rational scalar a + b i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = q(re)
        self.im = q(im)

    def __add__(self, o):
        o = _gq(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _gq(o)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, o):
        o = _gq(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, o):
        try:
            o = _gq(o)
        except InputError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return encode_scalar(self)


def _gq(x):
    return x if isinstance(x, GaussQ) else GaussQ(q(x), 0)


# ---------------------------------------------------------------- encoding

def _encode_q(x: fmpq) -> str:
    return f"{int(x.p)}/{int(x.q)}"


def encode_scalar(x) -> str:
    """Exact scalar as a string: "a/b", "a/b*i", "a/b+c/d*i", "a/b*r2"."""
    if isinstance(x, GaussQ):
        if x.im == 0:
            return _encode_q(x.re)
        if x.re == 0:
            return _encode_q(x.im) + "*i"
        im = _encode_q(x.im)
        sign = "" if im.startswith("-") else "+"
        return _encode_q(x.re) + sign + im + "*i"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return _encode_q(q(x))


def decode_scalar(s: str):
    s = s.strip()
    if s.endswith("*r2"):
        raise InputError("sqrt(2) multiples are not representable as rationals")
    if s.endswith("*i"):
        body = s[:-2]
        # split "a/b+c/d" at the last sign that is not leading
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-":
                return GaussQ(q(body[:k]), q(body[k:]))
        return GaussQ(0, q(body))
    return q(s)


def encode_matrix(M) -> list:
    if isinstance(M, GMat):
        return [[encode_scalar(M.entry(i, j)) for j in range(M.ncols())]
                for i in range(M.nrows())]
    return [[encode_scalar(x) for x in row] for row in M.tolist()]
