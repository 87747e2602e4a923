"""Exact arithmetic in Z[w] (w a primitive cube root of unity) and in E[27].

E is the Fermat elliptic curve C/Z[w].  Every point we ever need lies in
E[27], so points are stored as residue pairs ``(x, y)`` standing for
``(x + y*w) / 27``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

LEVEL = 27


class NormTooLargeError(ValueError):
    """The kernel of a multiplication map does not fit inside E[27]."""


class EisensteinInt(NamedTuple):
    """``a + b*w`` with ``w**2 = -1 - w``."""

    a: int
    b: int

    def __add__(self, other):  # type: ignore[override]
        return EisensteinInt(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return EisensteinInt(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other):  # type: ignore[override]
        if isinstance(other, int):
            return EisensteinInt(self.a * other, self.b * other)
        if not isinstance(other, EisensteinInt):
            # lets TorsionPoint.__rmul__ handle lambda * point
            return NotImplemented
        a, b = self
        c, d = other
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conj(self) -> EisensteinInt:
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        a, b = self
        return a * a - a * b + b * b

    def __pow__(self, n: int) -> EisensteinInt:
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
W = EisensteinInt(0, 1)
W2 = W * W

#: the six units, indexed by k as (-w)**k
UNITS = tuple((-W) ** k for k in range(6))


def unit_index(u: EisensteinInt) -> int:
    return UNITS.index(u)


class TorsionPoint(NamedTuple):
    """The point ``(x + y*w)/27`` of E, residues kept in ``[0, 27)``."""

    x: int
    y: int

    @classmethod
    def make(cls, x: int, y: int) -> TorsionPoint:
        return cls(x % LEVEL, y % LEVEL)

    @classmethod
    def from_fraction(cls, a: Fraction | int, b: Fraction | int = 0) -> TorsionPoint:
        """The point ``a + b*w`` with ``27*a`` and ``27*b`` integral."""
        xa, xb = Fraction(a) * LEVEL, Fraction(b) * LEVEL
        if xa.denominator != 1 or xb.denominator != 1:
            raise ValueError(f"{a} + {b}*w is not a 27-torsion point")
        return cls.make(int(xa), int(xb))

    @property
    def index(self) -> int:
        return self.x * LEVEL + self.y

    def __add__(self, other):  # type: ignore[override]
        return TorsionPoint((self.x + other.x) % LEVEL, (self.y + other.y) % LEVEL)

    def __sub__(self, other):
        return TorsionPoint((self.x - other.x) % LEVEL, (self.y - other.y) % LEVEL)

    def __neg__(self):
        return TorsionPoint(-self.x % LEVEL, -self.y % LEVEL)

    def __mul__(self, n):  # type: ignore[override]
        if isinstance(n, EisensteinInt):
            return scalar_mul(n, self)
        return TorsionPoint(self.x * n % LEVEL, self.y * n % LEVEL)

    __rmul__ = __mul__

    def rotate(self) -> TorsionPoint:
        """Multiplication by w."""
        return TorsionPoint(-self.y % LEVEL, (self.x - self.y) % LEVEL)

    def conj(self) -> TorsionPoint:
        return TorsionPoint((self.x - self.y) % LEVEL, -self.y % LEVEL)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self) -> str:
        return format_point(self)


ORIGIN = TorsionPoint(0, 0)
#: t = (1 + 2w)/3, the generator of the fixed locus of w
T_POINT = TorsionPoint(9, 18)
THIRD = TorsionPoint(9, 0)


def scalar_mul(lam: EisensteinInt, p: TorsionPoint) -> TorsionPoint:
    """``(a + b*w) * (x + y*w)/27``."""
    a, b = lam
    x, y = p
    return TorsionPoint((a * x - b * y) % LEVEL, (a * y + b * x - b * y) % LEVEL)


def all_points(level: int = LEVEL) -> list[TorsionPoint]:
    """E[level] for level dividing 27, in lexicographic order."""
    if LEVEL % level:
        raise ValueError(f"level {level} does not divide {LEVEL}")
    step = LEVEL // level
    return [TorsionPoint(x, y) for x in range(0, LEVEL, step) for y in range(0, LEVEL, step)]


def order_of(p: TorsionPoint) -> int:
    n, q = 1, p
    while not q.is_zero():
        q = q + p
        n += 1
    return n


def fix_points() -> set[TorsionPoint]:
    """Points of E fixed by w; they all lie in E[3]."""
    return {p for p in all_points() if p.rotate() == p}


class Subgroup(NamedTuple):
    elements: frozenset
    generators: tuple
    invariants: tuple


def _abelian_invariants(elements: Iterable[TorsionPoint]) -> tuple[int, ...]:
    elements = list(elements)
    n = len(elements)
    if n == 1:
        return ()
    exponent = max(order_of(p) for p in elements)
    rest = n // exponent
    return ((rest,) if rest > 1 else ()) + (exponent,)


def kernel_of(lam: EisensteinInt) -> Subgroup:
    """``{p in E : lam*p = 0}``, which must sit inside E[27]."""
    if lam == ZERO or LEVEL**2 % lam.norm():
        raise NormTooLargeError(f"kernel of multiplication by {lam} is not inside E[27]")
    elems = frozenset(p for p in all_points() if scalar_mul(lam, p).is_zero())
    if len(elems) != lam.norm():
        raise NormTooLargeError(f"kernel of multiplication by {lam} is not inside E[27]")
    gens = _generating_pair(elems)
    return Subgroup(elems, gens, _abelian_invariants(elems))


def span(gens: Iterable[TorsionPoint]) -> frozenset:
    out = {ORIGIN}
    frontier = [ORIGIN]
    gens = list(gens)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = p + g
                if q not in out:
                    out.add(q)
                    nxt.append(q)
        frontier = nxt
    return frozenset(out)


def _generating_pair(elems: frozenset) -> tuple:
    # prefer the lexicographically smallest generators of maximal order
    ordered = sorted(elems, key=lambda p: (-order_of(p), p))
    gens: list[TorsionPoint] = []
    current = frozenset({ORIGIN})
    for p in ordered:
        if len(current) == len(elems):
            break
        if p not in current:
            gens.append(p)
            current = span(gens)
    return tuple(gens)


def format_point(p: TorsionPoint) -> str:
    """Serialise as ``"x/27+y/27*w"`` with both fractions reduced."""
    a, b = Fraction(p.x, LEVEL), Fraction(p.y, LEVEL)
    parts = []
    if a:
        parts.append(str(a))
    if b:
        parts.append(f"{b}*w")
    return "+".join(parts) if parts else "0"


def parse_point(text: str) -> TorsionPoint:
    text = text.strip()
    if text == "0":
        return ORIGIN
    a = b = Fraction(0)
    for part in text.split("+"):
        if part.endswith("*w"):
            b += Fraction(part[:-2])
        else:
            a += Fraction(part)
    return TorsionPoint.from_fraction(a, b)


_ALIASES = {
    ORIGIN: "0",
    T_POINT: "t",
    -T_POINT: "-t",
    THIRD: "1/3",
    TorsionPoint(18, 0): "2/3",
    TorsionPoint(0, 9): "w/3",
    TorsionPoint(18, 18): "w^2/3",
    TorsionPoint(0, 18): "2w/3",
    TorsionPoint(9, 9): "-w^2/3",
}


def pretty_point(p: TorsionPoint) -> str:
    """Human alias (t, 1/3, w/3, ...) when one exists, else the serial form."""
    return _ALIASES.get(p, format_point(p))
