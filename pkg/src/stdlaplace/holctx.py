"""Holonomy contexts: a subalgebra hol of so(m) with exact structure data.

Bivectors are skew m x m matrices; e_a ^ e_b maps e_a to e_b.  The inner
product on bivectors is <A, B> = -1/2 tr(AB), so the e_a ^ e_b (a < b) are
orthonormal.  Bases of hol are orthogonal but not normalised; squared norms
are stored alongside, so every orthonormal-basis sum becomes a weighted sum
over the stored basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from flint import fmpq, fmpq_mat

from . import liealg
from .errors import InputError, StructuralError
from .exact import (commutator, encode_scalar, eye, gram_schmidt, hstack, nullspace,
                    zeros)
from .tensors import (biv_coords, biv_inner, bivector, form_vector, from_biv_coords,
                      hodge_star, pairs, wedge_action)


@dataclass(eq=False)
class HolonomyContext:
    m: int
    kind: str
    name: str
    basis: list                    # skew matrices spanning hol
    norms: list                    # their squared norms
    liealg_spec: liealg.LieAlgebraSpec
    t_weights: tuple               # highest weights of the constituents of T (x) C
    factor_ideals: list            # basis indices of each simple factor
    center: list = field(default_factory=list)
    structure: dict = field(default_factory=dict)
    spin_enabled: bool = False
    embedding_scale: tuple = ()

    def __post_init__(self):
        self.coords = hstack([biv_coords(X) for X in self.basis])
        # pr_hol = sum_a x_a x_a^T / |x_a|^2
        C = self.coords
        W = zeros(len(self.basis), len(self.basis))
        for j, n in enumerate(self.norms):
            W[j, j] = 1 / n
        self.pr_hol = C * W * C.transpose()
        self._validate()
        if not self.embedding_scale:
            self.embedding_scale = self._compute_scales()

    # ------------------------------------------------------------ basics
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nbiv(self) -> int:
        return comb(self.m, 2)

    def bivector(self, a: int, b: int) -> fmpq_mat:
        return bivector(self.m, a, b)

    def coefficients(self, A: fmpq_mat) -> list:
        """Coefficients of pr_hol(A) in the stored basis."""
        return [biv_inner(A, X) / n for X, n in zip(self.basis, self.norms)]

    def project(self, A: fmpq_mat) -> fmpq_mat:
        return from_biv_coords(self.m, self.pr_hol * biv_coords(A))

    def contains(self, A: fmpq_mat) -> bool:
        return self.project(A) == A

    def casimir(self, action) -> fmpq_mat:
        """Casimir -sum_a rho(X_a)^2 / |X_a|^2 of a representation."""
        n = action[0].nrows()
        C = zeros(n, n)
        for A, nrm in zip(action, self.norms):
            C -= (A * A) / nrm
        return C

    def casimir_ideal(self, action, idx) -> fmpq_mat:
        n = action[0].nrows()
        C = zeros(n, n)
        for i in idx:
            C -= (action[i] * action[i]) / self.norms[i]
        return C

    def structure_constants(self):
        """c[a][b] = coefficients of [X_a, X_b]."""
        return [[self.coefficients(commutator(X, Y)) for Y in self.basis] for X in self.basis]

    def perp_basis(self) -> list:
        """Orthogonal complement of hol in so(m), as skew matrices."""
        N = self.nbiv
        K = nullspace(self.coords.transpose()) if self.dim else eye(N)
        cols = [fmpq_mat(N, 1, [K[i, j] for i in range(N)]) for j in range(K.ncols())]
        vecs, _ = gram_schmidt(cols)
        return [from_biv_coords(self.m, v) for v in vecs]

    # ------------------------------------------------------------ checks
    def _validate(self):
        P = self.pr_hol
        if P * P != P or P != P.transpose():
            raise StructuralError("pr_hol is not an orthogonal projector")
        for i, X in enumerate(self.basis):
            if X.transpose() != -X:
                raise StructuralError("hol basis element is not skew")
            for j in range(i):
                if biv_inner(X, self.basis[j]) != 0:
                    raise StructuralError("hol basis is not orthogonal")
        for i, X in enumerate(self.basis):
            for Y in self.basis[i + 1:]:
                if not self.contains(commutator(X, Y)):
                    raise StructuralError("hol is not closed under the bracket")

    def _compute_scales(self) -> tuple:
        scales = []
        T = [X for X in self.basis]
        for f, (fac, idx) in enumerate(zip(self.liealg_spec.simple(), self.factor_ideals)):
            C = self.casimir_ideal(T, idx)
            c = C[0, 0]
            if C != eye(self.m) * c:
                raise StructuralError("ideal Casimir is not scalar on T")
            lam = self.liealg_spec.split(self.t_weights[0])[f]
            val = fac.inner(lam, tuple(x + 2 for x in lam))
            scales.append(Fraction(int(c.p), int(c.q)) / val)
        return tuple(scales)

    def casimir_from_weight(self, hw) -> Fraction:
        return liealg.casimir_l2(self.liealg_spec, hw, self.embedding_scale)

    # ------------------------------------------------------------ clifford
    def gammas(self):
        if not self.spin_enabled:
            raise InputError(f"{self.name} is not spin-enabled")
        from .matmodel.clifford import gamma_matrices
        return gamma_matrices(self.m)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "m": self.m,
            "dim": self.dim,
            "liealg": self.liealg_spec.name,
            "t_weights": [list(w) for w in self.t_weights],
            "embedding_scale": [encode_scalar(s) for s in self.embedding_scale],
            "spin": self.spin_enabled,
            "basis": [[encode_scalar(x) for x in biv_coords(X).entries()] for X in self.basis],
            "norms": [encode_scalar(n) for n in self.norms],
        }


# ---------------------------------------------------------------- constructions

def _orthogonalise(mats):
    vecs, norms = gram_schmidt([biv_coords(X) for X in mats])
    m = mats[0].nrows()
    return [from_biv_coords(m, v) for v in vecs], norms


def _stabiliser(m: int, forms) -> list:
    """Skew matrices annihilating every form in `forms` (vectors in Lambda^k)."""
    N = comb(m, 2)
    blocks = []
    for k, v in forms:
        cols = [wedge_action(bivector(m, a, b), k) * v for a, b in pairs(m)]
        blocks.append(hstack(cols))
    rows = []
    for B in blocks:
        rows.extend(B.tolist())
    A = fmpq_mat(rows)
    K = nullspace(A)
    return [from_biv_coords(m, [K[i, j] for i in range(N)]) for j in range(K.ncols())]


def _so_algebra(m: int):
    if m == 3:
        return liealg.LieAlgebraSpec.parse("A1"), ((2,),)
    if m == 4:
        return liealg.LieAlgebraSpec.parse("A1xA1"), ((1, 1),)
    n = m // 2
    fam = "B" if m % 2 else "D"
    return liealg.LieAlgebraSpec(((fam, n),)), ((1,) + (0,) * (n - 1),)


@lru_cache(maxsize=None)
def so(m: int, spin: bool = False) -> HolonomyContext:
    if m < 3:
        raise InputError("SO(m) contexts need m >= 3")
    spec, tw = _so_algebra(m)
    if m == 4:
        sd = [bivector(4, 0, 1) + bivector(4, 2, 3), bivector(4, 0, 2) - bivector(4, 1, 3),
              bivector(4, 0, 3) + bivector(4, 1, 2)]
        asd = [bivector(4, 0, 1) - bivector(4, 2, 3), bivector(4, 0, 2) + bivector(4, 1, 3),
               bivector(4, 0, 3) - bivector(4, 1, 2)]
        basis = sd + asd
        norms = [fmpq(2)] * 6
        ideals = [[0, 1, 2], [3, 4, 5]]
    else:
        basis = [bivector(m, a, b) for a, b in pairs(m)]
        norms = [fmpq(1)] * len(basis)
        ideals = [list(range(len(basis)))]
    return HolonomyContext(m, "SO", f"SO({m})", basis, norms, spec, tw, ideals,
                           spin_enabled=spin)


def complex_structure(n: int) -> fmpq_mat:
    J = zeros(2 * n, 2 * n)
    for j in range(n):
        J += bivector(2 * n, 2 * j, 2 * j + 1)
    return J


@lru_cache(maxsize=None)
def unitary(n: int) -> HolonomyContext:
    if n < 2:
        raise InputError("U(n) contexts need n >= 2")
    m = 2 * n
    J = complex_structure(n)
    N = comb(m, 2)
    cols = [biv_coords(commutator(bivector(m, a, b), J)) for a, b in pairs(m)]
    K = nullspace(hstack(cols))
    mats = [from_biv_coords(m, [K[i, j] for i in range(N)]) for j in range(K.ncols())]
    # centre first, then its complement inside u(n)
    basis, norms = _orthogonalise([J] + mats)
    spec = liealg.LieAlgebraSpec((("A", n - 1),))
    e1 = (1,) + (0,) * (n - 2)
    tw = (e1, tuple(reversed(e1)))
    ctx = HolonomyContext(m, "U", f"U({n})", basis, norms, spec, tw,
                          [list(range(1, len(basis)))], center=[0],
                          structure={"J": J}, spin_enabled=True)
    return ctx


def _su3_forms():
    omega = form_vector(6, {(0, 1): 1, (2, 3): 1, (4, 5): 1})
    re_psi = form_vector(6, {(0, 2, 4): 1, (0, 3, 5): -1, (1, 2, 5): -1, (1, 3, 4): -1})
    im_psi = form_vector(6, {(0, 2, 5): 1, (0, 3, 4): 1, (1, 2, 4): 1, (1, 3, 5): -1})
    return omega, re_psi, im_psi


@lru_cache(maxsize=None)
def su3_nearly_kaehler() -> HolonomyContext:
    omega, re_psi, im_psi = _su3_forms()
    mats = _stabiliser(6, [(2, omega), (3, re_psi)])
    basis, norms = _orthogonalise(mats)
    spec = liealg.LieAlgebraSpec.parse("A2")
    return HolonomyContext(6, "SU3", "SU(3)", basis, norms, spec, ((1, 0), (0, 1)),
                           [list(range(len(basis)))],
                           structure={"J": complex_structure(3), "omega": omega,
                                      "re_psi": re_psi, "im_psi": im_psi},
                           spin_enabled=True)


# Lines of the Fano plane with orientation: e_i e_j = e_k for (i, j, k) below.
OCTONION_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 7, 5), (3, 7, 4), (3, 6, 5))


def g2_form() -> fmpq_mat:
    return form_vector(7, {tuple(i - 1 for i in t): 1 for t in OCTONION_TRIPLES})


def cross_product(x: fmpq_mat, y: fmpq_mat) -> fmpq_mat:
    """Imaginary-octonion product x * y + <x, y> (the 7-dimensional cross product)."""
    out = zeros(7, 1)
    for t in OCTONION_TRIPLES:
        a, b, c = (i - 1 for i in t)
        for (i, j, k) in ((a, b, c), (b, c, a), (c, a, b)):
            out[k, 0] += x[i, 0] * y[j, 0] - x[j, 0] * y[i, 0]
    return out


@lru_cache(maxsize=None)
def g2() -> HolonomyContext:
    phi = g2_form()
    basis, norms = _orthogonalise(_stabiliser(7, [(3, phi)]))
    spec = liealg.LieAlgebraSpec.parse("G2")
    return HolonomyContext(7, "G2", "G2", basis, norms, spec, ((1, 0),),
                           [list(range(len(basis)))], structure={"phi": phi},
                           spin_enabled=True)


def cayley_form() -> fmpq_mat:
    """e^0 ^ phi + *phi on R^8 = R + R^7."""
    phi = g2_form()
    star = hodge_star(7, 3) * phi
    from .tensors import subsets
    terms = {}
    for (i, j, k), c in zip(subsets(7, 3), phi.entries()):
        if c != 0:
            terms[(0, i + 1, j + 1, k + 1)] = c
    for s, c in zip(subsets(7, 4), star.entries()):
        if c != 0:
            terms[tuple(i + 1 for i in s)] = c
    return form_vector(8, terms)


@lru_cache(maxsize=None)
def spin7() -> HolonomyContext:
    Phi = cayley_form()
    basis, norms = _orthogonalise(_stabiliser(8, [(4, Phi)]))
    spec = liealg.LieAlgebraSpec.parse("B3")
    return HolonomyContext(8, "Spin7", "Spin(7)", basis, norms, spec, ((0, 0, 1),),
                           [list(range(len(basis)))], structure={"cayley": Phi},
                           spin_enabled=True)


def _quaternion_right(n: int):
    """Right multiplications by i, j, k on H^n = R^(4n), basis (1, i, j, k) per block."""
    tables = {
        "i": {0: (1, 1), 1: (0, -1), 2: (3, -1), 3: (2, 1)},
        "j": {0: (2, 1), 1: (3, 1), 2: (0, -1), 3: (1, -1)},
        "k": {0: (3, 1), 1: (2, -1), 2: (1, 1), 3: (0, -1)},
    }
    out = []
    for name in "ijk":
        M = zeros(4 * n, 4 * n)
        for blk in range(n):
            for src, (dst, s) in tables[name].items():
                M[4 * blk + dst, 4 * blk + src] = s
        out.append(M)
    return out


@lru_cache(maxsize=None)
def sp_sp1(n: int) -> HolonomyContext:
    if n < 1:
        raise InputError("Sp(n)Sp(1) needs n >= 1")
    m = 4 * n
    R = _quaternion_right(n)
    N = comb(m, 2)
    rows = []
    for Rq in R:
        cols = [biv_coords(commutator(bivector(m, a, b), Rq)) for a, b in pairs(m)]
        rows.extend(hstack(cols).tolist())
    K = nullspace(fmpq_mat(rows))
    spn = [from_biv_coords(m, [K[i, j] for i in range(N)]) for j in range(K.ncols())]
    b1, n1 = _orthogonalise(R)
    b2, n2 = _orthogonalise(spn)
    basis, norms = b1 + b2, n1 + n2
    spec = liealg.LieAlgebraSpec((("A", 1), ("C", n))) if n >= 2 else \
        liealg.LieAlgebraSpec((("A", 1), ("A", 1)))
    tw = ((1, 1) + (0,) * (n - 1),)
    ideals = [list(range(3)), list(range(3, len(basis)))]
    return HolonomyContext(m, "SpSp1", f"Sp({n})Sp(1)", basis, norms, spec, tw, ideals,
                           structure={"right": R})


def context(name: str, spin: bool = False) -> HolonomyContext:
    """Parse "SO(5)", "U(2)", "SU(3)", "G2", "Spin(7)", "Sp(2)Sp(1)"."""
    key = name.replace(" ", "").upper()
    try:
        if key.startswith("SO(") and key.endswith(")"):
            return so(int(key[3:-1]), spin)
        if key.startswith("SO") and key[2:].isdigit():
            return so(int(key[2:]), spin)
        if key.startswith("U(") and key.endswith(")"):
            return unitary(int(key[2:-1]))
        if key in ("SU(3)", "SU3", "SU(3)NK", "NK"):
            return su3_nearly_kaehler()
        if key == "G2":
            return g2()
        if key in ("SPIN(7)", "SPIN7"):
            return spin7()
        if key.startswith("SP(") and key.endswith(")SP(1)"):
            return sp_sp1(int(key[3:key.index(")")]))
    except ValueError:
        pass
    raise InputError(f"unknown holonomy context {name!r}")
