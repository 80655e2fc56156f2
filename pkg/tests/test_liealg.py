import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stdlaplace import liealg
from stdlaplace.errors import InputError

G2 = liealg.LieAlgebraSpec.parse("G2")


@pytest.mark.parametrize("name,hw,dim", [
    ("A1", (3,), 4), ("A2", (1, 1), 8), ("A2", (3, 0), 10), ("B3", (0, 0, 1), 8),
    ("B3", (1, 0, 0), 7), ("D4", (0, 0, 0, 1), 8), ("C2", (1, 0), 4), ("C2", (0, 1), 5),
    ("G2", (1, 0), 7), ("G2", (0, 1), 14), ("G2", (2, 0), 27), ("G2", (3, 0), 77),
    ("B2", (0, 2), 10), ("A1xC2", (2, 1, 0), 12),
])
def test_weyl_dimension_known_values(name, hw, dim):
    assert liealg.dimension(liealg.LieAlgebraSpec.parse(name), hw) == dim


def test_weight_multiplicities_sum_to_dimension():
    spec = liealg.LieAlgebraSpec.parse("A2")
    mults = liealg.weight_multiplicities(spec, (1, 1))
    assert mults[(0, 0)] == 2
    assert sum(mults.values()) == 8


def test_g2_seven_times_seven():
    d = liealg.tensor_decompose(G2, (1, 0), (1, 0))
    assert d.text() == "[0,0] + [0,1] + [1,0] + [2,0]"
    assert d.dimension == 49


def test_exterior_cube_of_g2_vector():
    assert liealg.exterior_power(G2, [(1, 0)], 3).text() == "[0,0] + [1,0] + [2,0]"


def test_product_algebra_decomposes_factorwise():
    spec = liealg.LieAlgebraSpec.parse("A1xC2")
    d = liealg.tensor_decompose(spec, (1, 1, 0), (1, 1, 0))
    assert d.dimension == 64
    assert d.multiplicity((2, 0, 1)) == 1
    assert d.multiplicity((0, 0, 0)) == 1


@pytest.mark.parametrize("text", ["Z9", "G3", "A0", "", "B1x"])
def test_bad_algebra_names(text):
    with pytest.raises(InputError):
        liealg.LieAlgebraSpec.parse(text)


def test_weight_length_is_checked():
    with pytest.raises(InputError):
        G2.check_weight((1, 0, 0))
    with pytest.raises(InputError):
        G2.check_weight((-1, 0))


def test_parse_weight():
    assert liealg.parse_weight("1,0") == (1, 0)
    assert liealg.parse_weight("[2, 1]") == (2, 1)


def test_decomposition_json_round_trip():
    d = liealg.tensor_decompose(G2, (1, 0), (0, 1))
    data = d.to_json()
    assert [s["hw"] for s in data["summands"]] == [[1, 0], [1, 1], [2, 0]]
    assert all(s["mult"] == 1 for s in data["summands"])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_su2_clebsch_gordan(j1, j2):
    d = liealg.tensor_decompose(liealg.LieAlgebraSpec.parse("A1"), (j1,), (j2,))
    expected = {(k,): 1 for k in range(abs(j1 - j2), j1 + j2 + 1, 2)}
    assert {hw: mult for hw, mult in d.summands} == expected


ALGEBRAS = ["A2", "B2", "C3", "G2", "D4", "A1xA1"]


@st.composite
def algebra_and_weights(draw):
    spec = liealg.LieAlgebraSpec.parse(draw(st.sampled_from(ALGEBRAS)))
    w = st.tuples(*[st.integers(0, 2)] * spec.rank)
    return spec, draw(w), draw(w)


@settings(max_examples=30, deadline=None)
@given(algebra_and_weights())
def test_tensor_product_dimension_and_symmetry(data):
    spec, a, b = data
    d = liealg.tensor_decompose(spec, a, b)
    assert d.dimension == liealg.dimension(spec, a) * liealg.dimension(spec, b)
    assert d.summands == liealg.tensor_decompose(spec, b, a).summands
    # the Cartan summand occurs exactly once
    top = tuple(x + y for x, y in zip(a, b))
    assert d.multiplicity(top) == 1


@settings(max_examples=20, deadline=None)
@given(algebra_and_weights())
def test_trivial_summand_iff_dual(data):
    spec, a, b = data
    d = liealg.tensor_decompose(spec, a, b)
    trivial = tuple(0 for _ in a)
    assert d.multiplicity(trivial) == (1 if liealg.dual_hw(spec, a) == b else 0)
