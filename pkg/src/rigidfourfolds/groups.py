"""Finite groups stored by multiplication table, and their automorphisms.

Only tiny groups occur here (order at most 432), so everything is brute
force over the Cayley table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Callable, Hashable, Sequence

MAX_ORDER = 432


class GroupError(ValueError):
    pass


@dataclass(eq=False)
class FiniteGroup:
    """A finite group given by its elements and a full multiplication table.

    ``family`` records how the group was built ("cyclic", "abelian",
    "dihedral", "heis3") so that character tables can be written down
    directly; ``params`` carries the family parameters.
    """

    name: str
    elements: list
    table: list[list[int]]
    generators: dict[str, int]
    family: str = ""
    params: tuple = ()
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        ident = [i for i in range(n) if all(self.table[i][j] == j for j in range(n))]
        if len(ident) != 1:
            raise GroupError(f"{self.name}: no unique identity")
        self.identity = ident[0]
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise GroupError(f"{self.name}: table is not a Latin square")
        if n <= MAX_ORDER:
            self._check_associative()
        if len(self.closure(self.generators.values())) != n:
            raise GroupError(f"{self.name}: generators do not generate")

    def _check_associative(self):
        t = self.table
        n = len(t)
        gens = list(self.generators.values())
        # associativity against a generating set implies associativity
        for a in range(n):
            ta = t[a]
            for b in range(n):
                ab = ta[b]
                for g in gens:
                    if t[ab][g] != ta[t[b][g]]:
                        raise GroupError(f"{self.name}: table is not associative")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, element: Hashable) -> int:
        return self._index[element]

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def gen(self, name: str) -> int:
        return self.generators[name]

    @cached_property
    def inverses(self) -> list[int]:
        inv = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == self.identity:
                    inv[a] = b
                    break
        return inv

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, n: int) -> int:
        n %= self.element_orders[a]
        out = self.identity
        for _ in range(n):
            out = self.table[out][a]
        return out

    def word(self, *letters: str) -> int:
        """Product of named generators; a trailing ``^-1`` inverts a letter."""
        out = self.identity
        for letter in letters:
            if letter.endswith("^-1"):
                out = self.table[out][self.inv(self.generators[letter[:-3]])]
            else:
                out = self.table[out][self.generators[letter]]
        return out

    def commutator(self, a: int, b: int) -> int:
        """``a b a^-1 b^-1``."""
        t = self.table
        return t[t[t[a][b]][self.inv(a)]][self.inv(b)]

    @cached_property
    def element_orders(self) -> list[int]:
        orders = []
        for a in range(self.order):
            n, x = 1, a
            while x != self.identity:
                x = self.table[x][a]
                n += 1
            orders.append(n)
        return orders

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in self.element_orders:
            e = e * o // gcd(e, o)
        return e

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def conjugacy_classes(self) -> list[list[int]]:
        seen: set[int] = set()
        classes = []
        for a in range(self.order):
            if a in seen:
                continue
            cls = sorted({self.table[self.table[g][a]][self.inv(g)] for g in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    @cached_property
    def class_of(self) -> list[int]:
        out = [0] * self.order
        for i, cls in enumerate(self.conjugacy_classes):
            for a in cls:
                out[a] = i
        return out

    @cached_property
    def center(self) -> list[int]:
        t = self.table
        return [a for a in range(self.order) if all(t[a][b] == t[b][a] for b in range(self.order))]

    def closure(self, gens) -> set[int]:
        gens = list(gens)
        out = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.table[a][g]
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        return out

    def words(self) -> dict[int, tuple[str, ...]]:
        """A shortest word in the named generators for every element."""
        names = sorted(self.generators)
        out: dict[int, tuple[str, ...]] = {self.identity: ()}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for name in names:
                    b = self.table[a][self.generators[name]]
                    if b not in out:
                        out[b] = out[a] + (name,)
                        nxt.append(b)
            frontier = nxt
        return out


def group_from_mul(name: str, elements: Sequence, mul: Callable, generators: dict[str, Hashable],
                   family: str = "", params: tuple = ()) -> FiniteGroup:
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    gens = {k: index[v] for k, v in generators.items()}
    return FiniteGroup(name, elements, table, gens, family, params)


# --- concrete groups -------------------------------------------------------

def make_cyclic(n: int) -> FiniteGroup:
    return group_from_mul(f"Z{n}", list(range(n)), lambda a, b: (a + b) % n, {"a": 1 % n},
                          family="cyclic", params=(n,))


def make_abelian(d1: int, d2: int) -> FiniteGroup:
    """Z_d1 x Z_d2, elements ``(a, b)``."""
    elems = [(a, b) for a in range(d1) for b in range(d2)]
    mul = lambda x, y: ((x[0] + y[0]) % d1, (x[1] + y[1]) % d2)
    return group_from_mul(f"Z{d1}xZ{d2}", elems, mul, {"a": (1 % d1, 0), "b": (0, 1 % d2)},
                          family="abelian", params=(d1, d2))


def make_z3z3() -> FiniteGroup:
    """Z3^2 with generators h = (1,0) and k = (0,1)."""
    elems = [(a, b) for a in range(3) for b in range(3)]
    mul = lambda x, y: ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3)
    return group_from_mul("Z3xZ3", elems, mul, {"h": (1, 0), "k": (0, 1)},
                          family="abelian", params=(3, 3))


def make_dihedral(n: int = 4) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; ``(i, e)`` stands for r^i s^e."""
    elems = [(i, e) for e in range(2) for i in range(n)]

    def mul(x, y):
        i, e = x
        j, f = y
        return ((i + (-j if e else j)) % n, (e + f) % 2)

    return group_from_mul(f"D{n}", elems, mul, {"r": (1, 0), "s": (0, 1)},
                          family="dihedral", params=(n,))


def heis_mul(x, y):
    # (a,b,c) is g^a h^b k^c; h^b g^a' = g^a' h^b k^(-b a') since g h g^-1 h^-1 = k
    a, b, c = x
    a2, b2, c2 = y
    return ((a + a2) % 3, (b + b2) % 3, (c + c2 - b * a2) % 3)


def make_heis3() -> FiniteGroup:
    """The Heisenberg group of order 27 with [g, h] = g h g^-1 h^-1 = k central."""
    elems = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    return group_from_mul("Heis3", elems, heis_mul, {"g": (1, 0, 0), "h": (0, 1, 0), "k": (0, 0, 1)},
                          family="heis3")


def make_catalog(max_n: int = 12) -> list[FiniteGroup]:
    """The groups the screening runs over.

    Cyclic groups Z_n (2 <= n <= max_n), Z_d1 x Z_d2 with 1 < d1 | d2 <= max_n
    (this includes Z2^2 and Z3^2), the dihedral group D4 and Heis(3).
    """
    cat = [make_cyclic(n) for n in range(2, max_n + 1)]
    for d2 in range(2, max_n + 1):
        for d1 in range(2, d2 + 1):
            if d2 % d1 == 0:
                cat.append(make_z3z3() if (d1, d2) == (3, 3) else make_abelian(d1, d2))
    cat.append(make_dihedral(4))
    cat.append(make_heis3())
    return cat


# --- automorphisms -----------------------------------------------------------

@dataclass(frozen=True)
class GroupAutomorphism:
    """An automorphism as the permutation ``i -> perm[i]`` of element indices."""

    perm: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.perm[a]

    def compose(self, other: GroupAutomorphism) -> GroupAutomorphism:
        """``self o other``."""
        return GroupAutomorphism(tuple(self.perm[b] for b in other.perm))

    def inverse(self) -> GroupAutomorphism:
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return GroupAutomorphism(tuple(inv))


def extend_hom(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    """The homomorphism G -> H sending gens to images, or None if there is none."""
    f = {G.identity: H.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            fa = f[a]
            for g, img in zip(gens, images):
                b = G.table[a][g]
                fb = H.table[fa][img]
                old = f.get(b)
                if old is None:
                    f[b] = fb
                    nxt.append(b)
                elif old != fb:
                    return None
        frontier = nxt
    if len(f) != G.order:
        return None
    # every edge checked above, so f respects right multiplication by generators
    return [f[a] for a in range(G.order)]


def automorphisms(G: FiniteGroup) -> list[GroupAutomorphism]:
    """Aut(G), enumerated over images of the named generating tuple."""
    if G.order > MAX_ORDER:
        raise GroupError(f"{G.name} is too large")
    gens = [G.generators[k] for k in sorted(G.generators)]
    orders = G.element_orders
    cls_size = [len(G.conjugacy_classes[G.class_of[a]]) for a in range(G.order)]
    candidates = [
        [b for b in range(G.order) if orders[b] == orders[g] and cls_size[b] == cls_size[g]]
        for g in gens
    ]
    out = []
    for images in product(*candidates):
        f = extend_hom(G, G, gens, images)
        if f is not None and len(set(f)) == G.order:
            out.append(GroupAutomorphism(tuple(f)))
    out.sort(key=lambda a: a.perm)
    return out


def automorphism_lookup(G: FiniteGroup, autos: Sequence[GroupAutomorphism]) -> dict[tuple[int, ...], GroupAutomorphism]:
    """Map the tuple of images of the named generators to the automorphism."""
    gens = [G.generators[k] for k in sorted(G.generators)]
    return {tuple(a(g) for g in gens): a for a in autos}


def character_stabilizer(G: FiniteGroup, autos: Sequence[GroupAutomorphism], chars) -> list[GroupAutomorphism]:
    """Automorphisms phi with chi o phi = chi for every chi in ``chars``."""
    chars = list(chars)
    out = []
    for phi in autos:
        if all(chi.values_on_elements()[phi(a)] == chi.values_on_elements()[a]
               for chi in chars for a in range(G.order)):
            out.append(phi)
    return out
