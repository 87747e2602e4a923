"""Exact elements of the cyclotomic field Q(z_n).

A value is an integer coefficient vector over a positive common
denominator, reduced modulo the n-th cyclotomic polynomial (so the power
basis 1, z, ..., z^(phi(n)-1) is used) and normalised so the denominator
is as small as possible.  Equality of values is then equality of tuples.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for all proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _divide_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert not any(num), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """z^i in the power basis, for 0 <= i < n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by z, reducing z^deg = -sum phi[j] z^j (phi is monic)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(coeffs, n: int) -> list[int]:
    """Reduce an integer vector of any length (indices taken mod n) to the power basis."""
    table = _power_table(n)
    deg = len(table[0])
    out = [0] * deg
    for i, c in enumerate(coeffs):
        if c:
            if i < deg:
                out[i] += c
            else:
                for j, r in enumerate(table[i % n]):
                    if r:
                        out[j] += c * r
    return out


class Cyclotomic:
    """An element of Q(z_n), ``z_n = exp(2 pi i / n)``."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, coeffs, den: int = 1, *, _reduced: bool = False):
        self.n = n
        if type(den) is not int or any(type(c) is not int for c in coeffs):
            fr = [Fraction(c) / den for c in coeffs]
            den = 1
            for f in fr:
                den = den * f.denominator // gcd(den, f.denominator)
            coeffs = [int(f * den) for f in fr]
        num = list(coeffs) if _reduced else _reduce(coeffs, n)
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.num = tuple(num)
        self.den = den

    @classmethod
    def root(cls, n: int, k: int = 1) -> Cyclotomic:
        """z_n ** k."""
        return cls(n, _power_table(n)[k % n], _reduced=True)

    @classmethod
    def rational(cls, n: int, q) -> Cyclotomic:
        q = Fraction(q)
        return cls(n, [q.numerator], q.denominator)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def lift(self, m: int) -> Cyclotomic:
        """The same number viewed in Q(z_m), n | m."""
        if m % self.n:
            raise ValueError(f"cannot lift from modulus {self.n} to {m}")
        if m == self.n:
            return self
        step = m // self.n
        c = [0] * (step * (len(self.num) - 1) + 1)
        for i, a in enumerate(self.num):
            c[i * step] = a
        return Cyclotomic(m, c, self.den)

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(self.n, other)
        if other.n == self.n:
            return self, other
        m = self.n * other.n // gcd(self.n, other.n)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._common(other)
        if a.den == b.den:
            return Cyclotomic(a.n, [x + y for x, y in zip(a.num, b.num)], a.den, _reduced=True)
        return Cyclotomic(a.n, [x * b.den + y * a.den for x, y in zip(a.num, b.num)],
                          a.den * b.den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.num], self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            q = Fraction(other)
            return Cyclotomic(self.n, [x * q.numerator for x in self.num], self.den * q.denominator,
                              _reduced=True)
        a, b = self._common(other)
        prod = [0] * (len(a.num) + len(b.num) - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.n, prod, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        """1/self, as the product of the other Galois conjugates over the norm."""
        if not any(self.num):
            raise ZeroDivisionError("inverse of zero")
        others = Cyclotomic.rational(self.n, 1)
        for j in range(2, self.n):
            if gcd(j, self.n) == 1:
                others = others * self.galois(j)
        return others / (self * others).to_rational()

    def __truediv__(self, q):
        if isinstance(q, Cyclotomic):
            return self * q.inverse()
        q = Fraction(q)
        return Cyclotomic(self.n, [x * q.denominator for x in self.num], self.den * q.numerator,
                          _reduced=True)

    def galois(self, j: int) -> Cyclotomic:
        """The automorphism z_n -> z_n**j, gcd(j, n) = 1."""
        if gcd(j, self.n) != 1:
            raise ValueError(f"{j} is not a unit mod {self.n}")
        c = [0] * self.n
        for i, a in enumerate(self.num):
            c[i * j % self.n] += a
        return Cyclotomic(self.n, c, self.den)

    def conj(self) -> Cyclotomic:
        return self.galois(-1 % self.n if self.n > 1 else 1)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            try:
                other = Cyclotomic.rational(self.n, other)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        return a.den == b.den and a.num == b.num

    def __hash__(self):
        # equal values may live in different moduli, so hash the numeric value
        z = complex(self)
        return hash((round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0))

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(a * z**i for i, a in enumerate(self.num)) / self.den

    def __repr__(self):
        terms = [f"{Fraction(a, self.den)}*z{self.n}^{i}" if i else f"{Fraction(a, self.den)}"
                 for i, a in enumerate(self.num) if a]
        return " + ".join(terms) if terms else "0"
