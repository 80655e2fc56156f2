import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stdlaplace import liealg, vanish
from stdlaplace.errors import InputError
from stdlaplace.holctx import context
from stdlaplace.matmodel import CurvatureDerivative, CurvatureTensor, gradient_targets, rep_functor


def _add(dR1, dR2):
    comps = [CurvatureTensor(a.m, a.op + b.op) for a, b in zip(dR1.components, dR2.components)]
    return CurvatureDerivative(dR1.m, comps)


@pytest.fixture(scope="module")
def g2_tangent():
    ctx = context("G2")
    V = rep_functor(ctx, "t")
    return ctx, V, gradient_targets(V), vanish.derivative_space(ctx)


@pytest.mark.parametrize("name", ["G2", "Spin(7)"])
def test_derivative_space_matches_weyl_dimension(name):
    ctx = context(name)
    dims = sum(liealg.dimension(ctx.liealg_spec, c) for c in vanish.derived_c(ctx))
    assert vanish.derivative_space(ctx).ncols() == dims


def test_random_derivative_satisfies_second_bianchi(g2_tangent):
    ctx, _, _, space = g2_tangent
    dR = vanish.random_curvature_derivative(ctx, 5, space=space)
    assert dR.second_bianchi_defect() == []
    assert all(c.hol_valued(ctx) for c in dR.components)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32))
def test_error_term_is_additive(g2_tangent, s1, s2):
    ctx, _, grads, space = g2_tangent
    dR1 = vanish.random_curvature_derivative(ctx, s1, space=space)
    dR2 = vanish.random_curvature_derivative(ctx, s2, space=space)
    both = _add(dR1, dR2)
    for g in grads:
        lhs = vanish.error_term(ctx, g, both).matrix
        assert lhs == vanish.error_term(ctx, g, dR1).matrix + vanish.error_term(ctx, g, dR2).matrix


@settings(max_examples=4, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_criterion_is_sound_on_sampled_derivatives(g2_tangent, seed):
    ctx, V, _, space = g2_tangent
    dR = vanish.random_curvature_derivative(ctx, seed, space=space)
    rep = vanish.survey_report(ctx, [V], vanish.derived_c(ctx), dR)
    for row in rep.rows:
        if row.verdict == "criterion":
            assert row.residual_rank == 0


def test_spin7_weights_recompute_to_golden():
    fresh = vanish.derivative_weights(context("Spin(7)")).to_json()
    assert fresh == vanish.load_golden("derivative_weights.json")["Spin(7)"]


def test_g2_table_matches_golden():
    assert vanish.g2_table() == vanish.load_golden("g2_table.json")


def test_criterion_witness():
    ctx = context("G2")
    res = vanish.vanishing_criterion(ctx, (1, 2), (0, 1), (1, 1))
    assert not res.holds and res.multiplicity >= 1
    assert res.witness[0][0] == (1, 2)
    assert vanish.vanishing_criterion(ctx, (1, 2), (1, 0), (2, 0)).holds


def test_hom_multiplicity_contains_identity_once():
    spec = liealg.LieAlgebraSpec.parse("B3")
    assert vanish.hom_multiplicity(spec, (0, 0, 0), (0, 0, 1), (0, 0, 1)) == 1


def test_rarita_schwinger_setup():
    r = vanish.rarita_schwinger(5)
    assert (r["dim_C"], r["dim_V"], r["mult"]) == (105, 16, 0)
    with pytest.raises(InputError):
        vanish.rarita_schwinger(6)


def test_spin7_form_block():
    assert vanish.form_block(context("Spin(7)")) == [
        (0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0), (1, 0, 0), (1, 0, 1), (2, 0, 0)]


def test_nearly_kaehler_survey_covers_all_pairs():
    rep = vanish.nearly_kaehler_survey()
    assert len(rep.rows) == 36
    assert rep.commutes


def test_qk_report_structure():
    r = vanish.qk_generator_errors(2, 2, 1, 1)
    assert r.ok
    assert len(r.degree_changing()) + len(r.residuals()) == len(r.to_json()["targets"])
    assert {t.rank for t in r.residuals()} == {2, 3}


def test_qk_parity_rule():
    with pytest.raises(InputError):
        vanish.qk_generator_errors(2, 1, 0, 0)


def test_qk_even_total_degree_is_accepted():
    r = vanish.qk_generator_errors(2, 1, 1, 0)
    assert r.ok and len(r.degree_changing()) == 6
