from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rigidfourfolds.eisenstein import (
    LEVEL, ORIGIN, THIRD, T_POINT, UNITS, W, EisensteinInt, NormTooLargeError, TorsionPoint,
    all_points, fix_points, format_point, kernel_of, order_of, parse_point, pretty_point,
    scalar_mul, span,
)

ints = st.builds(EisensteinInt, st.integers(-30, 30), st.integers(-30, 30))
points = st.builds(TorsionPoint.make, st.integers(0, 26), st.integers(0, 26))
points9 = st.builds(lambda x, y: TorsionPoint.make(3 * x, 3 * y), st.integers(0, 8), st.integers(0, 8))


def complex_of(p: TorsionPoint) -> complex:
    w = complex(-0.5, 3 ** 0.5 / 2)
    return (p.x + p.y * w) / LEVEL


def test_units():
    assert len(set(UNITS)) == 6
    assert all(u.norm() == 1 for u in UNITS)
    assert W * W * W == EisensteinInt(1, 0)
    assert W * W == EisensteinInt(-1, -1)


@given(ints, ints)
def test_norm_is_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * a.conj()) == EisensteinInt(a.norm(), 0)


@given(ints, points)
def test_scalar_mul_matches_complex_multiplication(lam, p):
    w = complex(-0.5, 3 ** 0.5 / 2)
    z = (lam.a + lam.b * w) * complex_of(p)
    q = scalar_mul(lam, p)
    diff = z - complex_of(q)
    # the difference must be a lattice vector a + b w with integers a, b
    b = diff.imag / w.imag
    a = diff.real - b * w.real
    assert abs(a - round(a)) < 1e-9 and abs(b - round(b)) < 1e-9


@given(ints, ints, points9, points9)
def test_bilinearity_on_e9(lam, mu, p, q):
    assert scalar_mul(lam + mu, p) == scalar_mul(lam, p) + scalar_mul(mu, p)
    assert scalar_mul(lam * mu, p) == scalar_mul(lam, scalar_mul(mu, p))
    assert scalar_mul(lam, p + q) == scalar_mul(lam, p) + scalar_mul(lam, q)


@given(points)
def test_rotate_and_conj(p):
    assert p.rotate() == scalar_mul(W, p)
    assert p.conj().conj() == p
    assert (p.rotate()).conj() == scalar_mul(W * W, p.conj())


def test_torsion_brute_force():
    # E[27] as (Z/27)^2 and its subgroup orders from scratch
    pts = all_points()
    assert len(pts) == LEVEL ** 2 == len(set(pts))
    brute = {}
    for p in pts:
        n = next(k for k in range(1, 28) if (p.x * k) % 27 == 0 and (p.y * k) % 27 == 0)
        brute[n] = brute.get(n, 0) + 1
    assert brute == {1: 1, 3: 8, 9: 72, 27: 648}
    assert all(order_of(p) == next(k for k in (1, 3, 9, 27) if (p * k).is_zero()) for p in pts)
    assert len(all_points(9)) == 81 and all((p * 9).is_zero() for p in all_points(9))


def test_fix_points():
    assert fix_points() == {ORIGIN, T_POINT, -T_POINT}
    assert T_POINT == TorsionPoint.from_fraction(Fraction(1, 3), Fraction(2, 3))


def test_kernel_of_3_w_minus_1():
    ker = kernel_of(EisensteinInt(-3, 3))
    assert len(ker.elements) == 27
    assert ker.invariants == (3, 9)
    assert span([THIRD, TorsionPoint(3, 6)]) == ker.elements
    assert scalar_mul(EisensteinInt(3, 0), TorsionPoint(3, 6)) == T_POINT
    # brute force: points killed by 3(w - 1)
    lam = EisensteinInt(-3, 3)
    assert ker.elements == {p for p in all_points() if scalar_mul(lam, p).is_zero()}


def test_kernel_of_too_large():
    with pytest.raises(NormTooLargeError):
        kernel_of(EisensteinInt(81, 0))
    with pytest.raises(NormTooLargeError):
        kernel_of(EisensteinInt(0, 0))


@given(points)
def test_format_parse_round_trip(p):
    assert parse_point(format_point(p)) == p


def test_aliases():
    assert pretty_point(T_POINT) == "t"
    assert pretty_point(-T_POINT) == "-t"
    assert pretty_point(THIRD) == "1/3"
    assert format_point(T_POINT) == "1/3+2/3*w"
    assert pretty_point(TorsionPoint(1, 0)) == "1/27"
