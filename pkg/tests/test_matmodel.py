from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stdlaplace.errors import InputError
from stdlaplace.exact import commutator, eye, zeros
from stdlaplace.holctx import context
from stdlaplace.matmodel import (CurvatureTensor, conformal_weights, constant,
                                 curvature_identities_check, curvature_model, gradient_targets, grassmann_integral_check,
                                 q_of_R, random_bianchi, rep_functor, sphere, symmetric_pair,
                                 weight_trace)
from stdlaplace.matmodel.curvature import kaehler_const_hol_sec, q_is_self_adjoint
from stdlaplace.tensors import bivector

CONTEXTS = ["SO(3)", "SO(4)", "SO(5)", "U(2)", "U(3)", "SU(3)", "G2", "Spin(7)", "Sp(2)Sp(1)"]


@pytest.mark.parametrize("name,m,dim", [
    ("SO(5)", 5, 10), ("U(2)", 4, 4), ("U(3)", 6, 9), ("SU(3)", 6, 8), ("G2", 7, 14),
    ("Spin(7)", 8, 21), ("Sp(2)Sp(1)", 8, 13),
])
def test_context_dimensions(name, m, dim):
    ctx = context(name)
    assert (ctx.m, ctx.dim) == (m, dim)


@pytest.mark.parametrize("name", CONTEXTS)
def test_hol_is_a_subalgebra(name):
    ctx = context(name)
    for i, X in enumerate(ctx.basis):
        for Y in ctx.basis[i + 1:]:
            assert ctx.contains(commutator(X, Y))


@pytest.mark.parametrize("name", ["U(2)", "G2", "Spin(7)"])
def test_projection_is_idempotent(name):
    ctx = context(name)
    A = bivector(ctx.m, 0, 1) + bivector(ctx.m, 1, 3) * 2
    P = ctx.project(A)
    assert ctx.project(P) == P
    assert ctx.contains(P)


def test_unknown_context():
    with pytest.raises(InputError):
        context("E8")


@pytest.mark.parametrize("expr,dim", [
    ("t", 5), ("triv", 1), ("lambda:2", 10), ("sym:2", 15), ("sym0:2", 14), ("hol", 10),
    ("t*t", 25), ("t+triv", 6), ("cartan(t,t)", 14),
])
def test_rep_functor_so5(expr, dim):
    V = rep_functor(context("SO(5)"), expr)
    assert V.dim == dim
    assert V.is_consistent()


def test_qk_bundle_dimension():
    # Sym^2 H (x) Cartan(E, E) for sp(2): 3 * 10
    assert rep_functor(context("Sp(2)Sp(1)"), "qk:2,1,1").dim == 30


@pytest.mark.parametrize("expr", ["lambda:9", "nope", "t*", "qk:1,0,0", "sym0:-1"])
def test_rep_functor_rejects(expr):
    with pytest.raises(InputError):
        rep_functor(context("SO(5)"), expr)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_sphere_q_on_tangent_is_ricci(m):
    ctx = context(f"so{m}")
    for R in (constant(ctx, 1), sphere(m)):
        assert q_of_R(ctx, rep_functor(ctx, "t"), R) == eye(m) * (m - 1)


def test_constant_curvature_on_two_forms():
    # Hodge Laplacian curvature term on 2-forms of the unit sphere: 2(m-2)
    ctx = context("so5")
    assert q_of_R(ctx, rep_functor(ctx, "lambda:2"), constant(ctx, 1)) == eye(10) * 6


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["SO(4)", "U(2)", "SU(3)", "G2"]), st.integers(0, 2 ** 32))
def test_random_curvature_properties(name, seed):
    ctx = context(name)
    R = random_bianchi(ctx, seed)
    assert R.satisfies_bianchi() and R.pair_symmetric() and R.hol_valued(ctx)
    T = rep_functor(ctx, "t")
    assert q_of_R(ctx, T, R) == R.ricci()
    V = rep_functor(ctx, "lambda:2")
    assert q_is_self_adjoint(V, q_of_R(ctx, V, R))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32))
def test_q_is_linear_in_curvature(s1, s2):
    ctx = context("so4")
    V = rep_functor(ctx, "sym0:2")
    R1, R2 = random_bianchi(ctx, s1), random_bianchi(ctx, s2)
    total = CurvatureTensor(R1.m, R1.op + R2.op)
    assert q_of_R(ctx, V, total) == q_of_R(ctx, V, R1) + q_of_R(ctx, V, R2)


def test_kaehler_model_identities():
    ctx = context("U(2)")
    rep = curvature_identities_check(ctx, kaehler_const_hol_sec(ctx, 4))
    assert rep.ok
    assert rep.checks["kaehler_spin_difference"]


@pytest.mark.parametrize("expr", ["t", "lambda:2", "sym0:2"])
def test_gradient_projectors_resolve_identity(expr):
    V = rep_functor(context("so4"), expr)
    grads = gradient_targets(V)
    n = 4 * V.dim
    total = zeros(n, n)
    for g in grads:
        total += g.projector
        assert g.projector * g.projector == g.projector
    assert total == eye(n)
    assert sum(g.dim for g in grads) == n


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_tangent_conformal_weights(m):
    ws = conformal_weights(rep_functor(context(f"so{m}"), "t"))
    by_dim = sorted((w.target.dim, w.value) for w in ws)
    expected = sorted([((m - 1) * (m + 2) // 2, Fraction(1)), (m * (m - 1) // 2, Fraction(-1)),
                       (1, Fraction(-(m - 1)))])
    if m == 4:
        # Lambda^2 splits into self-dual and anti-self-dual halves, both with b = -1
        expected = sorted([(9, Fraction(1)), (3, Fraction(-1)), (3, Fraction(-1)),
                           (1, Fraction(-3))])
    assert by_dim == expected
    assert weight_trace(ws) == 0


@pytest.mark.parametrize("name,expr", [("G2", "t"), ("SO(5)", "sym0:2"), ("U(2)", "t"),
                                       ("Spin(7)", "t")])
def test_weight_trace_vanishes(name, expr):
    ws = conformal_weights(rep_functor(context(name), expr))
    assert weight_trace(ws) == 0
    assert all(w.casimir_check is None or w.casimir_check == w.value for w in ws)


def test_symmetric_pair_reproduces_sphere():
    m = 3
    n = m + 1
    k_basis = [bivector(n, a, b) for a in range(m) for b in range(a + 1, m)]
    p_basis = [bivector(n, a, m) for a in range(m)]
    R = curvature_model("symmetric_space", space="matrices", k_basis=k_basis, p_basis=p_basis)
    assert R.op == sphere(m).op


def test_symmetric_pair_rejects_non_symmetric_data():
    n = 4
    k_basis = [bivector(n, 0, 1)]
    p_basis = [bivector(n, 0, 2), bivector(n, 1, 2), bivector(n, 2, 3)]
    with pytest.raises(InputError):
        symmetric_pair(k_basis, p_basis)


def test_curvature_model_dispatch_errors():
    with pytest.raises(InputError):
        curvature_model("no_such_model")
    with pytest.raises(InputError):
        q_of_R(context("so4"), rep_functor(context("so4"), "t"), sphere(3))


@pytest.mark.parametrize("name", ["so3", "so4", "U(2)"])
def test_integral_exact_matches_plane_moments(name):
    ctx = context(name)
    for seed in range(3):
        r = grassmann_integral_check(ctx, random_bianchi(ctx, seed), rep_functor(ctx, "t"),
                                     mode="exact")
        assert r.details["agrees_with_moment_coefficient"]
        if not r.ok:
            assert r.details["fitted_ricci_coefficient"] == "1/6"


def test_integral_passes_when_trace_free_ricci_vanishes():
    ctx = context("so4")
    r = grassmann_integral_check(ctx, constant(ctx, 1), rep_functor(ctx, "lambda:2"),
                                 mode="exact")
    assert r.ok and r.max_deviation == 0


def test_integral_sample_floor():
    ctx = context("so5")
    with pytest.raises(InputError):
        grassmann_integral_check(ctx, constant(ctx, 1), rep_functor(ctx, "t"),
                                 mode="monte_carlo", samples=100)
