import json

import pytest
from flint import fmpq
from hypothesis import given, settings
from hypothesis import strategies as st

from stdlaplace import vanish
from stdlaplace.errors import InputError
from stdlaplace.exact import eye, is_zero, q
from stdlaplace.holctx import context
from stdlaplace.jetverify import (DegreeBudgetError, MetricJet, PolyJet, SectionJet,
                                  apply_operator, flat_jet, geometry_at_origin,
                                  metric_from_curvature, monomials, random_metric_jet,
                                  random_section, regauge, replay, run_suite, sphere_jet,
                                  verify_commutator, verify_forms, verify_gauge,
                                  verify_identities)
from stdlaplace.jetverify.poly import inv_series, sqrt_series
from stdlaplace.matmodel import gradient_targets, random_bianchi, rep_functor, sphere

# ---------------------------------------------------------------- truncated polynomials

MONO = monomials(2, 4)


@st.composite
def polyjets(draw, cap=4):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda e: sum(e) <= 4),
        st.fractions(min_value=-5, max_value=5, max_denominator=6), max_size=6))
    return PolyJet.from_terms(MONO, {e: fmpq(c.numerator, c.denominator)
                                     for e, c in terms.items()}, cap)


@settings(max_examples=60, deadline=None)
@given(polyjets(), polyjets(), polyjets())
def test_polyjet_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@settings(max_examples=60, deadline=None)
@given(polyjets(), polyjets(), st.integers(0, 1))
def test_polyjet_leibniz(a, b, v):
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


@settings(max_examples=30, deadline=None)
@given(polyjets())
def test_inverse_and_square_root_series(a):
    unit = a - PolyJet.const(MONO, a.at0(), 4) + PolyJet.const(MONO, 1, 4)
    one = PolyJet.const(MONO, 1, 4)
    assert inv_series(unit) * unit == one
    r = sqrt_series(unit)
    assert r * r == unit


def test_derivative_lowers_the_reliable_degree():
    x = PolyJet.var(MONO, 0, 1)
    assert x.diff(0).at0() == 1
    with pytest.raises(DegreeBudgetError):
        x.diff(0).diff(0).at0()


def test_polyjet_json_round_trip():
    a = PolyJet.from_terms(MONO, {(1, 1): fmpq(2, 3), (0, 3): fmpq(-1)}, 4)
    data = json.loads(json.dumps(a.to_json()))
    b = PolyJet.from_terms(MONO, {tuple(e): q(v) for e, v in data["terms"]}, data["cap"])
    assert a == b and data["cap"] == 4

# ---------------------------------------------------------------- metric jets


@pytest.mark.parametrize("m", [3, 4])
def test_normal_coordinates_recover_curvature(m):
    ctx = context(f"so{m}")
    R = random_bianchi(ctx, 11)
    dR = vanish.random_curvature_derivative(ctx, 12)
    R0, dR0 = geometry_at_origin(metric_from_curvature(R, dR))
    assert R0.op == R.op
    assert all(a.op == b.op for a, b in zip(dR0.components, dR.components))


def test_sphere_jet_has_constant_curvature():
    R0, dR = geometry_at_origin(sphere_jet(4))
    assert R0.op == sphere(4).op
    assert R0.ricci() == eye(4) * 3
    assert all(is_zero(c.op) for c in dR.components)


def test_flat_jet_is_flat():
    R0, dR = geometry_at_origin(flat_jet(3))
    assert is_zero(R0.op)
    assert all(is_zero(c.op) for c in dR.components)


def test_metric_jet_json_round_trip():
    jet = random_metric_jet(3, 5)
    back = MetricJet.from_json(json.loads(json.dumps(jet.to_json())))
    assert geometry_at_origin(back)[0].op == geometry_at_origin(jet)[0].op


def test_metric_jet_validation():
    data = random_metric_jet(3, 5).to_json()
    data["g"][0][1]["terms"].append([[1, 0, 0], "1"])
    with pytest.raises(InputError):
        MetricJet.from_json(data)
    with pytest.raises(InputError):
        random_metric_jet(9, 0)
    with pytest.raises(InputError):
        random_metric_jet(3, 0, cap=2)


def test_regauge_keeps_curvature():
    jet = random_metric_jet(3, 8)
    R0, dR = geometry_at_origin(jet)
    R1, dR1 = geometry_at_origin(regauge(jet, 9))
    assert R0.op == R1.op
    assert all(a.op == b.op for a, b in zip(dR.components, dR1.components))


# ---------------------------------------------------------------- operators

def test_flat_laplacian_is_minus_coordinate_laplacian():
    m = 3
    ctx = context("so3")
    jet = flat_jet(m)
    V = rep_functor(ctx, "t")
    s = random_section(m, V.dim, 4)
    out = apply_operator(jet, V, "laplacian", s)
    for got, comp in zip(out.values, s.values):
        expected = comp.diff(0).diff(0) + comp.diff(1).diff(1) + comp.diff(2).diff(2)
        assert got == expected.scale(-1)


def test_laplacian_twice_exhausts_the_budget():
    ctx = context("so3")
    jet = random_metric_jet(3, 1)
    V = rep_functor(ctx, "triv")
    s = apply_operator(jet, V, "laplacian", random_section(3, 1, 2))
    with pytest.raises(DegreeBudgetError):
        apply_operator(jet, V, "laplacian", s)


def test_d_of_d_vanishes_through_the_dispatcher():
    ctx = context("so4")
    jet = random_metric_jet(4, 3)
    f = random_section(4, 1, 6)
    df = apply_operator(jet, rep_functor(ctx, "lambda:0"), "d", f)
    ddf = apply_operator(jet, rep_functor(ctx, "lambda:1"), "d", df)
    assert all(v.at0() == 0 for v in ddf.values)


def test_operator_errors():
    ctx = context("so3")
    jet = random_metric_jet(3, 1)
    V = rep_functor(ctx, "t")
    s = random_section(3, 3, 1)
    with pytest.raises(InputError):
        apply_operator(jet, V, "wave", s)
    with pytest.raises(InputError):
        apply_operator(jet, V, "d", s)      # T is not given as a form representation
    with pytest.raises(InputError):
        apply_operator(random_metric_jet(4, 1), V, "nabla", s)
    unitary = rep_functor(context("U(2)"), "t")
    with pytest.raises(InputError, match="SO"):
        apply_operator(random_metric_jet(4, 1), unitary, "nabla", random_section(4, 4, 1))


def test_section_json_round_trip():
    s = random_section(3, 2, 7)
    back = SectionJet.from_json(json.loads(json.dumps(s.to_json())), 3)
    assert all(a == b for a, b in zip(s.values, back.values))


# ---------------------------------------------------------------- checks

@pytest.mark.parametrize("expr", ["t", "lambda:2", "sym0:2"])
def test_identities_on_one_jet(expr):
    V = rep_functor(context("so3"), expr)
    assert verify_identities(random_metric_jet(3, 21), V, 21).ok


def test_commutator_on_one_jet_records_error_ranks():
    V = rep_functor(context("so3"), "sym0:2")
    rep = verify_commutator(random_metric_jet(3, 2), V, gradient_targets(V), 1, 2, "auto")
    assert rep.ok
    assert any(r > 0 for r in rep.details["error_ranks"].values())


def test_forms_and_gauge():
    jet = random_metric_jet(3, 30)
    assert verify_forms(jet, context("so3"), 30).ok
    assert verify_gauge(jet, rep_functor(context("so3"), "t"), 30).ok


def test_wrong_error_term_is_detected_and_replayable(monkeypatch):
    from stdlaplace.jetverify import checks

    real = checks.error_term

    def doubled(ctx, g, dR):
        e = real(ctx, g, dR)
        e.matrix = e.matrix * 2
        return e

    monkeypatch.setattr(checks, "error_term", doubled)
    V = rep_functor(context("so3"), "t")
    rep = verify_commutator(random_metric_jet(3, 4), V, gradient_targets(V), 1, 4)
    assert not rep.ok and rep.failures
    monkeypatch.undo()
    dump = dict(rep.failures[0], rep_expr="t")
    res = replay(json.loads(json.dumps(dump)))
    assert res["equal"]


def test_suite_is_deterministic():
    a = run_suite(3, "t", 2, 99).to_json()
    b = run_suite(3, "t", 2, 99).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["ok"]
