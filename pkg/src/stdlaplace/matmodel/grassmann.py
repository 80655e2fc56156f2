"""Curvature endomorphism as an average over the Grassmannian of 2-planes.

Exact mode integrates the quartic plane moments symbolically: for independent
standard Gaussian vectors X, Y the direction of X ^ Y is uniform on Gr_2 and
independent of |X ^ Y|, so plane averages are Gaussian moments divided by
E|X ^ Y|^4 (computed with Isserlis' theorem).  Monte Carlo mode samples
orthonormal 2-frames with numpy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb

from flint import fmpq

from ..errors import InputError
from ..exact import GMat, encode_matrix, encode_scalar, q, zeros
from ..holctx import HolonomyContext
from ..tensors import pairs
from .curvature import CurvatureTensor, q_of_R
from .reps import MatrixRep

EXACT_MAX_DIM = 4
DISPLAYED_RICCI_COEFFICIENT = fmpq(1)
# Coefficient of the Ric0 double-projection sum that the exact plane moments
# actually produce (the same for every m tried, 3 <= m <= 5).
MOMENT_RICCI_COEFFICIENT = fmpq(1, 6)


@dataclass
class IntegralReport:
    mode: str
    ok: bool
    lhs: object
    rhs: object
    max_deviation: float
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {"mode": self.mode, "ok": self.ok, "max_deviation": self.max_deviation}
        if self.mode == "exact":
            out["lhs"] = encode_matrix(self.lhs)
            out["rhs"] = encode_matrix(self.rhs)
        out.update(self.details)
        return out


# ---------------------------------------------------------------- Gaussian moments

def _isserlis(idx) -> int:
    """E[x_{i1} ... x_{ik}] for a standard Gaussian vector."""
    if len(idx) % 2:
        return 0
    if not idx:
        return 1
    first, rest = idx[0], idx[1:]
    total = 0
    for j, b in enumerate(rest):
        if b == first:
            total += _isserlis(rest[:j] + rest[j + 1:])
    return total


def _omega_terms(m):
    """omega_I = X_a Y_b - X_b Y_a for I = (a, b)."""
    return [((a, b, 1), (b, a, -1)) for a, b in pairs(m)]


@lru_cache(maxsize=None)
def omega_moments(m: int, order: int) -> dict:
    """E[omega_I1 ... omega_Ik] on sorted index tuples, omega = X ^ Y for Gaussian X, Y."""
    terms = _omega_terms(m)
    N = len(terms)
    out = {}
    for key in combinations_with_replacement(range(N), order):
        total = 0
        for choice in product(*(terms[i] for i in key)):
            xs = tuple(sorted(c[0] for c in choice))
            ys = tuple(sorted(c[1] for c in choice))
            ex = _isserlis(xs)
            if not ex:
                continue
            ey = _isserlis(ys)
            if ey:
                sign = 1
                for c in choice:
                    sign *= c[2]
                total += sign * ex * ey
        if total:
            out[key] = total
    return out


def _moment(table, idx):
    return table.get(tuple(sorted(idx)), 0)


def plane_second_moments(m: int) -> dict:
    """Average of omega_K omega_L over unit decomposable omega (uniform plane)."""
    M2 = omega_moments(m, 2)
    norm = sum(_moment(M2, (i, i)) for i in range(comb(m, 2)))
    return {k: fmpq(v, norm) for k, v in M2.items()}, norm


def plane_fourth_moments(m: int):
    M4 = omega_moments(m, 4)
    N = comb(m, 2)
    norm = sum(_moment(M4, (i, i, j, j)) for i in range(N) for j in range(N))
    return M4, norm


# ---------------------------------------------------------------- both sides

def _P_list(rep: MatrixRep):
    return [rep.P(a, b) for a, b in pairs(rep.ctx.m)]


def _zero(rep):
    n = rep.dim
    return GMat.zeros(n, n) if rep.complex else zeros(n, n)


def lhs_weights(ctx: HolonomyContext, R: CurvatureTensor, lam) -> dict:
    """c_KL with LHS = sum_KL c_KL P_K P_L, exactly."""
    m = ctx.m
    if m > EXACT_MAX_DIM:
        raise InputError(f"exact Grassmann integration is available for m <= {EXACT_MAX_DIM}")
    N = comb(m, 2)
    lam = q(lam)
    pref = fmpq(comb(m + 2, 4))
    S = R.op.transpose() * (-1)  # sec(omega) = omega^T S omega with S = -op^T
    M4, n4 = plane_fourth_moments(m)
    M2, _ = plane_second_moments(m)
    c = {}
    for K in range(N):
        for L in range(N):
            s = fmpq(0)
            for I in range(N):
                for J in range(N):
                    if S[I, J] != 0:
                        mom = _moment(M4, (I, J, K, L))
                        if mom:
                            s += S[I, J] * mom
            val = s / n4 - lam * M2.get(tuple(sorted((K, L))), fmpq(0))
            if val != 0:
                c[(K, L)] = val * pref
    return c


def integral_lhs_exact(ctx, R, rep: MatrixRep, lam):
    P = _P_list(rep)
    out = _zero(rep)
    for (K, L), w in lhs_weights(ctx, R, lam).items():
        out = out + P[K] * P[L] * w
    return out


def casimir_lambda2(rep: MatrixRep):
    """-1/2 sum_{mu nu} P(mu,nu) P(mu,nu)."""
    out = _zero(rep)
    for Pk in _P_list(rep):
        out = out - Pk * Pk
    return out


def ricci_term(ctx: HolonomyContext, R: CurvatureTensor, rep: MatrixRep):
    """sum_{mu nu} pr(Ric0 e_mu ^ e_nu)* pr(e_mu ^ e_nu)*."""
    m = ctx.m
    ric0 = R.ricci() - _scalar_id(m, R.scalar() / m)
    out = _zero(rep)
    for mu in range(m):
        for nu in range(m):
            if mu == nu:
                continue
            left = _zero(rep)
            for k in range(m):
                if ric0[k, mu] != 0 and k != nu:
                    left = left + rep.P(k, nu) * ric0[k, mu]
            out = out + left * rep.P(mu, nu)
    return out


def integral_rhs(ctx: HolonomyContext, R: CurvatureTensor, rep: MatrixRep, lam,
                 ricci_coefficient=DISPLAYED_RICCI_COEFFICIENT):
    m = ctx.m
    lam = q(lam)
    kappa = R.scalar()
    coef = lam * (m + 2) * (m + 1) / 12 - kappa * (m + 4) / (12 * m)
    out = casimir_lambda2(rep) * coef
    out = out + ricci_term(ctx, R, rep) * q(ricci_coefficient)
    out = out - q_of_R(ctx, rep, R) * fmpq(1, 2)
    T = R.torsion
    if T is not None and not T.is_zero():
        # (1/48) sum over ordered quadruples of g(T^T) = 2 gtt; 4 orderings per pair of pairs
        P = _P_list(rep)
        prs = pairs(m)
        for i, (a, b) in enumerate(prs):
            for j, (c, d) in enumerate(prs):
                w = T.gtt(a, b, c, d) * 2 * 4 / 48
                if w != 0:
                    out = out + P[i] * P[j] * w
    return out


def fitted_ricci_coefficient(lhs, rhs, ricci):
    """c with lhs = rhs + (c - 1) ricci, or None if no such scalar exists."""
    D = lhs - rhs
    re = (lambda M: M.re) if isinstance(D, GMat) else (lambda M: M)
    d, r = re(D).entries(), re(ricci).entries()
    c = None
    for x, y in zip(d, r):
        if y != 0:
            c = x / y
            break
    if c is None:
        return fmpq(1) if all(x == 0 for x in d) else None
    return c + 1 if D == ricci * c else None


def _scalar_id(m, c):
    M = zeros(m, m)
    for i in range(m):
        M[i, i] = c
    return M


# ---------------------------------------------------------------- Monte Carlo

def _to_numpy(M):
    import numpy as np
    if isinstance(M, GMat):
        re = np.array([[float(x) for x in row] for row in M.re.tolist()])
        im = np.array([[float(x) for x in row] for row in M.im.tolist()])
        return re + 1j * im
    return np.array([[float(x) for x in row] for row in M.tolist()])


def integral_lhs_monte_carlo(ctx, R, rep, lam, samples: int, seed: int, chunk: int = 100_000):
    """Sample mean and standard error of the LHS integrand, entrywise."""
    import numpy as np
    m = ctx.m
    N = comb(m, 2)
    prs = pairs(m)
    ia = np.array([a for a, _ in prs])
    ib = np.array([b for _, b in prs])
    S = _to_numpy(R.op) * -1.0
    S = 0.5 * (S + S.T)
    P = np.stack([_to_numpy(Pk) for Pk in _P_list(rep)])  # N x n x n
    n = rep.dim
    PP = np.einsum("kij,ljs->klis", P, P).reshape(N * N, n * n)
    pref = comb(m + 2, 4)
    rng = np.random.default_rng(seed)
    total = np.zeros(n * n, dtype=PP.dtype)
    total_sq = np.zeros(n * n)
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        X = rng.standard_normal((k, m))
        Y = rng.standard_normal((k, m))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        Y -= np.sum(X * Y, axis=1, keepdims=True) * X
        Y /= np.linalg.norm(Y, axis=1, keepdims=True)
        w = X[:, ia] * Y[:, ib] - X[:, ib] * Y[:, ia]
        sec = np.einsum("si,ij,sj->s", w, S, w)
        ww = (w[:, :, None] * w[:, None, :]).reshape(k, N * N)
        f = pref * (sec - float(lam))[:, None] * (ww @ PP)
        total += f.sum(axis=0)
        total_sq += (np.abs(f) ** 2).sum(axis=0)
        done += k
    mean = total / samples
    var = np.maximum(total_sq / samples - np.abs(mean) ** 2, 0.0)
    stderr = np.sqrt(var / samples)
    return mean.reshape(n, n), stderr.reshape(n, n)


# ---------------------------------------------------------------- report

def grassmann_integral_check(ctx: HolonomyContext, R: CurvatureTensor, rep: MatrixRep,
                             lam=0, mode: str = "auto", samples: int = 10 ** 6,
                             seed: int = 0, sigmas: float = 5.0) -> IntegralReport:
    """Compare both sides of the Grassmannian integral formula for q(R)."""
    if mode == "auto":
        mode = "exact" if ctx.m <= EXACT_MAX_DIM else "monte_carlo"
    rhs = integral_rhs(ctx, R, rep, lam)
    ric = ricci_term(ctx, R, rep)
    alt = rhs + ric * (MOMENT_RICCI_COEFFICIENT - DISPLAYED_RICCI_COEFFICIENT)
    if mode == "exact":
        lhs = integral_lhs_exact(ctx, R, rep, lam)
        dev = _max_abs(lhs - rhs)
        ok = dev == 0
        fit = fitted_ricci_coefficient(lhs, rhs, ric)
        details = {"fitted_ricci_coefficient": None if fit is None else encode_scalar(fit),
                   "agrees_with_moment_coefficient": lhs == alt}
        if not ok:
            details["flag"] = ("exact integration disagrees with the displayed constants; "
                               "see fitted_ricci_coefficient")
        return IntegralReport("exact", ok, lhs, rhs, dev, details)
    if mode != "monte_carlo":
        raise InputError(f"unknown integration mode {mode!r}")
    if samples < 10 ** 4:
        raise InputError("Monte Carlo integration needs at least 10^4 samples")
    import numpy as np
    mean, err = integral_lhs_monte_carlo(ctx, R, rep, lam, samples, seed)

    def sigma_test(target):
        target = _to_numpy(target)
        dev = np.abs(mean - target)
        floor = 1e-9 * max(1.0, float(np.abs(target).max()))
        worst = float(np.max(dev / np.maximum(err, floor)))
        return bool(np.all(dev <= sigmas * err + floor)), worst, float(dev.max())

    ok, worst, dev = sigma_test(rhs)
    ok_alt, worst_alt, _ = sigma_test(alt)
    details = {"samples": samples, "seed": seed, "sigma_bound": sigmas, "worst_sigma": worst,
               "worst_sigma_moment_coefficient": worst_alt,
               "agrees_with_moment_coefficient": ok_alt}
    if not ok:
        details["flag"] = "sampled integral disagrees with the displayed constants"
    return IntegralReport("monte_carlo", ok, mean, rhs, dev, details)


def _max_abs(M):
    if isinstance(M, GMat):
        vals = [abs(x) for x in M.re.entries()] + [abs(x) for x in M.im.entries()]
    else:
        vals = [abs(x) for x in M.entries()]
    best = max(vals, default=fmpq(0))
    return float(best.p) / float(best.q) if best else 0.0
