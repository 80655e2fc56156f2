from fractions import Fraction

import pytest
from flint import fmpq
from hypothesis import given
from hypothesis import strategies as st

from stdlaplace.errors import InputError
from stdlaplace.exact import (GaussQ, decode_scalar, encode_scalar, eye, kron, mat, nullspace,
                              q, rank, solve_exact)


@given(st.fractions(max_denominator=10 ** 6))
def test_scalar_encoding_round_trip(x):
    assert decode_scalar(encode_scalar(q(x))) == q(x)


@given(st.fractions(max_denominator=100), st.fractions(max_denominator=100))
def test_gaussian_encoding_round_trip(re, im):
    z = GaussQ(q(re), q(im))
    assert encode_scalar(decode_scalar(encode_scalar(z))) == encode_scalar(z)


@pytest.mark.parametrize("bad", [0.5, "x", None, "1/0.5"])
def test_floats_and_junk_are_rejected(bad):
    with pytest.raises(InputError):
        q(bad)


def test_coercions():
    assert q("3/4") == fmpq(3, 4)
    assert q(Fraction(1, 3)) == fmpq(1, 3)
    assert q(2, 6) == fmpq(1, 3)


def test_nullspace_and_solve():
    M = mat([[1, 2], [2, 4]])
    K = nullspace(M)
    assert rank(M) == 1 and K.ncols() == 1
    assert M * K == mat([[0], [0]])
    assert solve_exact(mat([[2, 0], [0, 4]]), mat([[1], [1]])) == mat([[fmpq(1, 2)], [fmpq(1, 4)]])


def test_kron_with_identity():
    X = mat([[0, 1], [1, 0]])
    assert kron(eye(2), X) == mat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
