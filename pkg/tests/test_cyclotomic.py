from __future__ import annotations

import cmath

import pytest
from hypothesis import given, strategies as st

from rigidfourfolds.cyclotomic import Cyclotomic, cyclotomic_poly

small = st.integers(-6, 6)


@st.composite
def elements(draw, n=9):
    coeffs = draw(st.lists(small, min_size=1, max_size=8))
    return Cyclotomic(n, coeffs, draw(st.integers(1, 4)))


def close(a: Cyclotomic, z: complex) -> bool:
    return abs(complex(a) - z) < 1e-9


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(9) == (1, 0, 0, 1, 0, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity_sum_to_zero():
    for n in (3, 4, 8, 9, 12):
        assert sum((Cyclotomic.root(n, k) for k in range(n)), Cyclotomic.rational(n, 0)) == 0


@given(elements(), elements())
def test_ring_operations_agree_with_complex_values(a, b):
    assert close(a + b, complex(a) + complex(b))
    assert close(a * b, complex(a) * complex(b))
    assert close(a - b, complex(a) - complex(b))
    assert close(a.conj(), complex(a).conjugate())


@given(elements())
def test_inverse(a):
    if not any(a.num):
        with pytest.raises(ZeroDivisionError):
            a.inverse()
        return
    assert a * a.inverse() == 1


def test_lift_preserves_value():
    a = Cyclotomic.root(3, 1)
    assert a.lift(9) == Cyclotomic.root(9, 3)
    assert a + Cyclotomic.root(4, 1) == Cyclotomic.root(12, 4) + Cyclotomic.root(12, 3)
    assert close(a, cmath.exp(2j * cmath.pi / 3))


def test_galois_and_rationality():
    z = Cyclotomic.root(9, 1)
    trace = sum((z.galois(j) for j in (1, 2, 4, 5, 7, 8)), Cyclotomic.rational(9, 0))
    assert trace.is_rational() and trace.to_rational() == 0
    with pytest.raises(ValueError):
        z.galois(3)
    with pytest.raises(ValueError):
        z.to_rational()


def test_equal_values_hash_equal():
    assert hash(Cyclotomic.root(3, 1)) == hash(Cyclotomic.root(9, 3))
