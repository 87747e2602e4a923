"""Kernels K <= Fix(w)^4, torus points of E^4/K and semilinear maps of E^4.

A kernel is stored over F_3 with the basis t -> 1, -t -> 2.  The lattice
belonging to K is Z[w]^4 + K, and the torus is T = E^4/K.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .eisenstein import (
    LEVEL, ORIGIN, T_POINT, UNITS, EisensteinInt, TorsionPoint, fix_points,
)

F3Vector = tuple  # four entries in {0, 1, 2}
PointVector = tuple  # four TorsionPoints

MINUS_T = -T_POINT
_ENCODE = {ORIGIN: 0, T_POINT: 1, MINUS_T: 2}
_DECODE = (ORIGIN, T_POINT, MINUS_T)


class LatticeViolation(ValueError):
    """A map does not send the source lattice into the target lattice."""


class LevelError(ValueError):
    """A block map sent a point outside E[27]."""


# --- F_3 helpers ---------------------------------------------------------------

def vadd(u: F3Vector, v: F3Vector) -> F3Vector:
    return tuple((a + b) % 3 for a, b in zip(u, v))


def vscale(c: int, v: F3Vector) -> F3Vector:
    return tuple(c * a % 3 for a in v)


def f3_span(gens: Iterable[F3Vector], n: int = 4) -> frozenset:
    out = {(0,) * n}
    for g in gens:
        out |= {vadd(v, vscale(c, g)) for v in out for c in (1, 2)}
    return frozenset(out)


def encode(p: PointVector) -> F3Vector | None:
    """The F_3 vector of a point of Fix(w)^4, or None if some coordinate is not fixed."""
    try:
        return tuple(_ENCODE[c] for c in p)
    except KeyError:
        return None


def decode(v: F3Vector) -> PointVector:
    return tuple(_DECODE[a] for a in v)


def parse_vector(text: str) -> F3Vector:
    """``"0,t,-t,t"`` -> (0, 1, 2, 1)."""
    table = {"0": 0, "t": 1, "-t": 2, "1": 1, "2": 2}
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 4 or any(p not in table for p in parts):
        raise ValueError(f"bad kernel vector {text!r}")
    return tuple(table[p] for p in parts)


def format_vector(v: F3Vector) -> str:
    return "(" + ",".join(("0", "t", "-t")[a] for a in v) + ")"


# --- kernels -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Kernel:
    """A subgroup of Fix(w)^4 = F_3^4."""

    generators: tuple
    label: str = ""

    @cached_property
    def elements(self) -> frozenset:
        return f3_span(self.generators)

    @cached_property
    def key(self) -> tuple:
        return tuple(sorted(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return {1: 0, 3: 1, 9: 2, 27: 3, 81: 4}[self.order]

    @cached_property
    def points(self) -> tuple:
        """The elements as vectors of TorsionPoints, zero first."""
        return tuple(decode(v) for v in self.key)

    @cached_property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def contains(self, p: PointVector) -> bool:
        return p in self.point_set

    def __eq__(self, other):
        return isinstance(other, Kernel) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        if not self.generators:
            return "{0}"
        return "<" + ", ".join(format_vector(g) for g in self.generators) + ">"

    def __repr__(self):
        return f"Kernel({self.label or str(self)})"

    def relabel(self, label: str) -> Kernel:
        return Kernel(self.generators, label)

    @classmethod
    def parse(cls, text: str, label: str = "") -> Kernel:
        """``"0,t,t,t;0,t,-t,0"`` (``"0"`` or empty for the zero kernel)."""
        text = text.strip()
        if text in ("", "0", "{0}"):
            return cls((), label)
        return cls(tuple(parse_vector(s) for s in text.split(";")), label)


def _reduced_basis(elements: frozenset) -> tuple:
    """Reduced row echelon basis of an F_3 subspace, pivots normalised to 1."""
    rows: list[list[int]] = []
    for v in sorted(elements):
        r = list(v)
        for b in rows:
            p = next(i for i, a in enumerate(b) if a)
            if r[p]:
                c = r[p]
                r = [(x - c * y) % 3 for x, y in zip(r, b)]
        if any(r):
            p = next(i for i, a in enumerate(r) if a)
            inv = r[p]  # 1 and 2 are self-inverse mod 3
            r = [x * inv % 3 for x in r]
            rows = [[(x - b[p] * y) % 3 for x, y in zip(b, r)] for b in rows]
            rows.append(r)
    rows.sort(key=lambda b: next(i for i, a in enumerate(b) if a))
    return tuple(tuple(b) for b in rows)


def is_admissible(elements: frozenset) -> bool:
    """No non-zero multiple of a unit vector."""
    return all(sum(1 for a in v if a) != 1 for v in elements)


def enumerate_kernels() -> list[Kernel]:
    """All subgroups of F_3^4 without non-zero multiples of unit vectors, by dimension then content."""
    spaces = {frozenset({(0, 0, 0, 0)})}
    frontier = list(spaces)
    vectors = list(product(range(3), repeat=4))
    while frontier:
        nxt = []
        for s in frontier:
            for v in vectors:
                if v not in s:
                    t = frozenset(s | {vadd(a, vscale(c, v)) for a in s for c in (1, 2)})
                    if t not in spaces:
                        spaces.add(t)
                        nxt.append(t)
        frontier = nxt
    good = [s for s in spaces if is_admissible(s)]
    good.sort(key=lambda s: (len(s), sorted(s)))
    return [label_kernel(Kernel(_reduced_basis(s))) for s in good]


def shift_234(v: F3Vector) -> F3Vector:
    """rho(g) on Fix^4: (z1, z2, z3, z4) -> (z1, z4, z2, z3)."""
    return (v[0], v[3], v[1], v[2])


def heis_invariant_kernels() -> list[Kernel]:
    return [K for K in enumerate_kernels() if {shift_234(v) for v in K.elements} == K.elements]


def mu_signature(K: Kernel) -> tuple[int, ...]:
    """Number of elements of K with exactly m non-zero entries, m = 0..4."""
    mu = [0] * 5
    for v in K.elements:
        mu[sum(1 for a in v if a)] += 1
    return tuple(mu)


#: kernels of the z3z3 classification table, in table order
TABLE_KERNELS = {
    "K1": "0",
    "K2": "0,0,t,t",
    "K3": "0,t,t,t",
    "K4": "t,0,0,t",
    "K5": "t,0,t,t",
    "K6": "t,t,t,t",
    "K7": "0,t,t,t;0,t,-t,0",
    "K8": "0,0,t,t;t,0,-t,0",
    "K9": "t,t,0,0;0,0,t,t",
    "K10": "0,0,t,t;t,t,0,t",
    "K11": "t,0,0,t;t,t,t,-t",
    "Kexc": "t,-t,0,t;t,t,-t,0",
    "K12": "-t,t,0,0;t,0,t,t;t,t,t,0",
}
TABLE_ORDER = tuple(TABLE_KERNELS)

#: the two lattices carrying free Heis(3) actions
HEIS_KERNELS = {"L1": "0,t,t,t", "L2": "0,t,t,t;0,t,-t,0"}

_NAMED = {**{k: Kernel.parse(v, k) for k, v in TABLE_KERNELS.items()},
          **{k: Kernel.parse(v, k) for k, v in HEIS_KERNELS.items()}}


def table_kernel(label: str) -> Kernel:
    return _NAMED[label]


def label_kernel(K: Kernel) -> Kernel:
    """Attach the table label if K is one of the named kernels."""
    for name in TABLE_ORDER:
        if _NAMED[name] == K:
            return K.relabel(name)
    return K


def resolve_kernel(text: str) -> Kernel:
    """Kernel from a table label (K1..K12, Kexc, L1, L2) or a generator list."""
    if text in _NAMED:
        return _NAMED[text]
    return Kernel.parse(text)


# --- torus points ----------------------------------------------------------------

def vec_add(p: PointVector, q: PointVector) -> PointVector:
    return tuple(a + b for a, b in zip(p, q))


def vec_sub(p: PointVector, q: PointVector) -> PointVector:
    return tuple(a - b for a, b in zip(p, q))


def vec_neg(p: PointVector) -> PointVector:
    return tuple(-a for a in p)


def reduce_mod(p: PointVector, K: Kernel) -> PointVector:
    """Lexicographically minimal representative of p + K."""
    return min(vec_add(p, k) for k in K.points)


@dataclass(frozen=True)
class TorusPoint:
    """An element of E^4/K, stored by its lexicographically minimal representative."""

    coords: tuple
    kernel: Kernel = field(compare=False)

    @classmethod
    def make(cls, coords: Sequence[TorsionPoint], K: Kernel) -> TorusPoint:
        return cls(reduce_mod(tuple(coords), K), K)

    def __add__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint.make(vec_add(self.coords, other.coords), self.kernel)

    def __sub__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint.make(vec_sub(self.coords, other.coords), self.kernel)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)


# --- semilinear maps -------------------------------------------------------------

def _conj_if(p: TorsionPoint, flag: int) -> TorsionPoint:
    return p.conj() if flag else p


def _unit_mul(e: int, p: TorsionPoint) -> TorsionPoint:
    return UNITS[e % 6] * p


class SemilinearMap:
    """Common interface of monomial and block maps of C^4."""

    kind = ""

    def apply_vector(self, p: PointVector) -> PointVector:
        raise NotImplementedError

    def compose(self, other: SemilinearMap) -> SemilinearMap:
        raise NotImplementedError

    def inverse(self) -> SemilinearMap:
        raise NotImplementedError

    def image_of_basis(self) -> list[PointVector]:
        """Images of the real basis e_j, w e_j of Z[w]^4, as points of E^4."""
        raise NotImplementedError

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, SemilinearMap) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __matmul__(self, other: SemilinearMap) -> SemilinearMap:
        return self.compose(other)

    def maps_lattice(self, K: Kernel, K2: Kernel) -> bool:
        """Whether A(Z[w]^4 + K) is contained in Z[w]^4 + K2."""
        try:
            images = self.image_of_basis() + [self.apply_vector(k) for k in K.points]
        except LevelError:
            return False
        return all(K2.contains(p) for p in images)

    def apply_kernel(self, K: Kernel) -> Kernel:
        """The image A(K) + Z[w]^4 as a kernel (A must map Z[w]^4 into itself)."""
        if not all(all(c.is_zero() for c in p) for p in self.image_of_basis()):
            raise LatticeViolation("map does not preserve Z[w]^4")
        vecs = [encode(self.apply_vector(k)) for k in K.points]
        if any(v is None for v in vecs):
            raise LatticeViolation("image of K leaves Fix(w)^4")
        return label_kernel(Kernel(_reduced_basis(frozenset(vecs))))

    def apply(self, p: TorusPoint, target: Kernel | None = None) -> TorusPoint:
        target = p.kernel if target is None else target
        if not self.maps_lattice(p.kernel, target):
            raise LatticeViolation(f"map does not send {p.kernel} into {target}")
        return TorusPoint.make(self.apply_vector(p.coords), target)

    def is_linear(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class MonomialMap(SemilinearMap):
    """``w_i = (-w)^units[i] * sigma_i(z_perm[i])`` with sigma_i conjugation iff flags[i]."""

    perm: tuple = (0, 1, 2, 3)
    units: tuple = (0, 0, 0, 0)
    flags: tuple = (0, 0, 0, 0)

    kind = "monomial"

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(e % 6 for e in self.units))
        object.__setattr__(self, "flags", tuple(f % 2 for f in self.flags))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")

    @property
    def key(self) -> tuple:
        return ("m", self.perm, self.units, self.flags)

    def apply_vector(self, p: PointVector) -> PointVector:
        return tuple(_unit_mul(e, _conj_if(p[j], f)) for j, e, f in zip(self.perm, self.units, self.flags))

    def compose(self, other: SemilinearMap) -> SemilinearMap:
        """``self o other``."""
        if isinstance(other, BlockMap):
            return self.as_block().compose(other)
        pa, ea, fa = self.perm, self.units, self.flags
        pb, eb, fb = other.perm, other.units, other.flags
        n = len(pa)
        return MonomialMap(
            tuple(pb[pa[i]] for i in range(n)),
            tuple(ea[i] + (-1) ** fa[i] * eb[pa[i]] for i in range(n)),
            tuple(fa[i] ^ fb[pa[i]] for i in range(n)),
        )

    def inverse(self) -> MonomialMap:
        n = len(self.perm)
        perm, units, flags = [0] * n, [0] * n, [0] * n
        for i, j in enumerate(self.perm):
            # z_j = sigma_i((-w)^-e_i) sigma_i(w_i)
            perm[j] = i
            units[j] = (-1) ** self.flags[i] * -self.units[i]
            flags[j] = self.flags[i]
        return MonomialMap(tuple(perm), tuple(units), tuple(flags))

    def image_of_basis(self) -> list[PointVector]:
        return [(ORIGIN,) * 4] * 8

    def det_sign(self) -> int:
        return (-1) ** sum(self.flags)

    def is_linear(self) -> bool:
        return not any(self.flags)

    def on_f3(self, v: F3Vector) -> F3Vector:
        """Action on Fix(w)^4: units act by (-1)^e and conjugation by -1."""
        return tuple(v[j] * (-1) ** (e + f) % 3 for j, e, f in zip(self.perm, self.units, self.flags))

    def as_block(self) -> BlockMap:
        if self.perm[0] != 0 or len(set(self.flags[1:])) != 1:
            raise ValueError("map does not preserve the 1 + 3 splitting")
        mat = [[EisensteinInt(0, 0)] * 3 for _ in range(3)]
        for i in range(1, 4):
            mat[i - 1][self.perm[i] - 1] = UNITS[self.units[i]] * 3
        return BlockMap(self.units[0], self.flags[0], tuple(tuple(r) for r in mat), self.flags[1])

    def __repr__(self):
        terms = []
        for i, (j, e, f) in enumerate(zip(self.perm, self.units, self.flags)):
            z = f"conj(z{j + 1})" if f else f"z{j + 1}"
            terms.append(z if e == 0 else f"(-w)^{e}*{z}")
        return "M(" + ", ".join(terms) + ")"


def _conj_e(x: EisensteinInt, flag: int) -> EisensteinInt:
    return x.conj() if flag else x


@dataclass(frozen=True, eq=False)
class BlockMap(SemilinearMap):
    """``w_1 = (-w)^u1 sigma(z_1)`` and ``(w_2,w_3,w_4) = (1/3) mat . sigma'(z_2,z_3,z_4)``.

    ``mat`` holds Eisenstein integer numerators over the common denominator 3.
    """

    u1: int = 0
    f1: int = 0
    mat: tuple = ()
    fd: int = 0

    kind = "block"

    def __post_init__(self):
        object.__setattr__(self, "u1", self.u1 % 6)
        object.__setattr__(self, "f1", self.f1 % 2)
        object.__setattr__(self, "fd", self.fd % 2)
        object.__setattr__(self, "mat", tuple(tuple(EisensteinInt(*x) for x in r) for r in self.mat))

    @property
    def key(self) -> tuple:
        return ("b", self.u1, self.f1, self.mat, self.fd)

    @classmethod
    def identity(cls) -> BlockMap:
        three, zero = EisensteinInt(3, 0), EisensteinInt(0, 0)
        return cls(0, 0, tuple(tuple(three if i == j else zero for j in range(3)) for i in range(3)), 0)

    def _apply_numerators(self, nums: Sequence[EisensteinInt]) -> list[EisensteinInt]:
        """(mat . sigma(nums)) for numerator vectors of length 3."""
        src = [_conj_e(x, self.fd) for x in nums]
        out = []
        for row in self.mat:
            acc = EisensteinInt(0, 0)
            for m, x in zip(row, src):
                acc = acc + m * x
            out.append(acc)
        return out

    def apply_vector(self, p: PointVector) -> PointVector:
        first = _unit_mul(self.u1, _conj_if(p[0], self.f1))
        # canonical lifts (x + y w)/27; the block adds a factor 1/3
        nums = self._apply_numerators([EisensteinInt(c.x, c.y) for c in p[1:]])
        rest = []
        for v in nums:
            if v.a % 3 or v.b % 3:
                raise LevelError("image is not a 27-torsion point")
            rest.append(TorsionPoint.make(v.a // 3, v.b // 3))
        return (first,) + tuple(rest)

    def image_of_basis(self) -> list[PointVector]:
        out = []
        for j in range(4):
            for base in (EisensteinInt(1, 0), EisensteinInt(0, 1)):
                if j == 0:
                    out.append((ORIGIN,) * 4)
                    continue
                col = [EisensteinInt(0, 0)] * 3
                col[j - 1] = base
                img = self._apply_numerators(col)
                # numerators over 3 -> over 27
                out.append((ORIGIN,) + tuple(TorsionPoint.make(9 * v.a, 9 * v.b) for v in img))
        return out

    def compose(self, other: SemilinearMap) -> BlockMap:
        """``self o other``."""
        if isinstance(other, MonomialMap):
            other = other.as_block()
        u1 = self.u1 + (-1) ** self.f1 * other.u1
        mat = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = EisensteinInt(0, 0)
                for k in range(3):
                    acc = acc + self.mat[i][k] * _conj_e(other.mat[k][j], self.fd)
                if acc.a % 3 or acc.b % 3:
                    raise LevelError("composite leaves (1/3)Z[w]")
                row.append(EisensteinInt(acc.a // 3, acc.b // 3))
            mat.append(tuple(row))
        return BlockMap(u1, self.f1 ^ other.f1, tuple(mat), self.fd ^ other.fd)

    def inverse(self) -> BlockMap:
        ident = BlockMap.identity()
        # unitary blocks: the inverse of M (resp. M o conj) is M^* (resp. M^T o conj)
        mat = tuple(tuple(_conj_e(self.mat[j][i], 1 - self.fd) for j in range(3)) for i in range(3))
        cand = BlockMap(self.u1 if self.f1 else -self.u1, self.f1, mat, self.fd)
        try:
            if self.compose(cand) == ident:
                return cand
        except LevelError:
            pass
        powers = [self]
        while powers[-1] != ident:
            powers.append(powers[-1].compose(self))
            if len(powers) > 10000:
                raise ValueError("map has infinite order")
        return powers[-2] if len(powers) > 1 else ident

    def det_sign(self) -> int:
        """Sign of the real determinant; the block must be unimodular."""
        m = self.mat
        det = EisensteinInt(0, 0)
        for (a, b, c), s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                             ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
            det = det + m[0][a] * m[1][b] * m[2][c] * s
        if det.norm() != 27 ** 2:
            raise ValueError("block is not unimodular")
        return (-1) ** (self.f1 + 3 * self.fd)

    def is_linear(self) -> bool:
        return not self.f1 and not self.fd

    def __repr__(self):
        return f"B(u1={self.u1}, f1={self.f1}, mat={[[tuple(x) for x in r] for r in self.mat]}, fd={self.fd})"


def monomial_group_closure(gens: Iterable[SemilinearMap], limit: int = 10 ** 6) -> set:
    """Closure under composition of a finite set of invertible maps."""
    gens = list(gens)
    if not gens:
        return set()
    ident = gens[0].compose(gens[0].inverse())
    out = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a.compose(g)
                if b not in out:
                    out.add(b)
                    nxt.append(b)
                    if len(out) > limit:
                        raise ValueError("closure exceeds limit")
        frontier = nxt
    return out


def kernel_orbits(kernels: Sequence[Kernel], maps: Iterable[MonomialMap]) -> list[list[Kernel]]:
    """Orbits of ``kernels`` under ``maps`` (which should generate or be a group).

    Each orbit is sorted with the canonical (smallest) member first; orbits
    are sorted by that representative.
    """
    maps = list(maps)
    index = {K.key: K for K in kernels}
    seen: set = set()
    orbits = []
    for K in kernels:
        if K.key in seen:
            continue
        orbit = {K.key}
        frontier = [K]
        while frontier:
            nxt = []
            for L in frontier:
                for A in maps:
                    img = frozenset(A.on_f3(v) for v in L.elements)
                    key = tuple(sorted(img))
                    if key not in index:
                        raise ValueError("maps do not preserve the kernel family")
                    if key not in orbit:
                        orbit.add(key)
                        nxt.append(index[key])
            frontier = nxt
        seen |= orbit
        members = sorted((index[k] for k in orbit), key=lambda L: (L.order, L.key))
        orbits.append(members)
    orbits.sort(key=lambda o: (o[0].order, o[0].key))
    return orbits


def level_points(level: int) -> list[TorsionPoint]:
    step = LEVEL // level
    return [TorsionPoint(x, y) for x in range(0, LEVEL, step) for y in range(0, LEVEL, step)]


FIX = tuple(sorted(fix_points()))
