"""Exact character theory for the catalog groups.

Includes the four-condition screening of degree-4 representations
(faithful, eigenvalue 1 everywhere, integral on the decomplexification,
no constituent shared with the conjugate) and the Hodge numbers of the
two rigid holonomies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from math import gcd

from .cyclotomic import Cyclotomic
from .groups import FiniteGroup, make_heis3, make_z3z3


class UnsupportedGroupError(ValueError):
    pass


class InvalidCharacterError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Character:
    """A class function: one cyclotomic value per conjugacy class of ``group``."""

    group: FiniteGroup
    values: tuple
    label: str = ""

    @property
    def degree(self) -> int:
        v = self.values[self.group.class_of[self.group.identity]]
        d = v.to_rational()
        if d.denominator != 1:
            raise InvalidCharacterError(f"non-integral degree {d}")
        return int(d)

    def __call__(self, a: int) -> Cyclotomic:
        return self.values[self.group.class_of[a]]

    def values_on_elements(self) -> list[Cyclotomic]:
        return self._elementwise

    @cached_property
    def _elementwise(self) -> list[Cyclotomic]:
        return [self.values[c] for c in self.group.class_of]

    def _check(self, other):
        if other.group is not self.group:
            raise ValueError("characters of different groups")

    def __add__(self, other: Character) -> Character:
        self._check(other)
        return Character(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def __mul__(self, other):
        if isinstance(other, Character):
            self._check(other)
            return Character(self.group, tuple(a * b for a, b in zip(self.values, other.values)))
        return Character(self.group, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def conj(self) -> Character:
        return self._conj

    @cached_property
    def _conj(self) -> Character:
        return Character(self.group, tuple(v.conj() for v in self.values),
                         f"conj({self.label})" if self.label else "")

    @cached_property
    def values_key(self) -> tuple:
        """Hashable exact key: all values lifted to the group's modulus."""
        n = _modulus(self.group)
        return tuple((v.lift(n).num, v.lift(n).den) for v in self.values)

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.group is other.group and self.values_key == other.values_key

    def __hash__(self):
        return hash(self.values_key)

    def __repr__(self):
        return f"Character({self.label or self.values})"


def _modulus(G: FiniteGroup) -> int:
    return G.exponent


def class_function(G: FiniteGroup, f, label: str = "") -> Character:
    """Build a character from a function of the element index (evaluated on class reps)."""
    return Character(G, tuple(f(cls[0]) for cls in G.conjugacy_classes), label)


def trivial_character(G: FiniteGroup) -> Character:
    n = _modulus(G)
    return class_function(G, lambda a: Cyclotomic.rational(n, 1), "triv")


def irreducible_characters(G: FiniteGroup) -> list[Character]:
    """All irreducible characters of a cyclic, abelian Z_d1 x Z_d2, dihedral or Heis(3) group."""
    n = _modulus(G)
    z = lambda k: Cyclotomic.root(n, k)
    elems = G.elements
    out: list[Character] = []
    if G.family == "cyclic":
        (m,) = G.params
        for j in range(m):
            out.append(class_function(G, lambda a, j=j: z(j * elems[a] * (n // m)), f"chi{j}"))
    elif G.family == "abelian":
        d1, d2 = G.params
        for i in range(d1):
            for j in range(d2):
                out.append(class_function(
                    G, lambda a, i=i, j=j: z(i * elems[a][0] * (n // d1) + j * elems[a][1] * (n // d2)),
                    f"chi({i},{j})"))
    elif G.family == "dihedral":
        (m,) = G.params
        # linear characters: r -> +-1 (sign only if m even), s -> +-1
        for er in ((0, 1) if m % 2 == 0 else (0,)):
            for es in (0, 1):
                out.append(class_function(
                    G, lambda a, er=er, es=es: Cyclotomic.rational(
                        n, (-1) ** (er * elems[a][0] + es * elems[a][1])),
                    f"lin({er},{es})"))
        for j in range(1, (m - 1) // 2 + 1):
            out.append(class_function(
                G, lambda a, j=j: (z(j * elems[a][0] * (n // m)) + z(-j * elems[a][0] * (n // m)))
                if elems[a][1] == 0 else Cyclotomic.rational(n, 0),
                f"psi{j}"))
    elif G.family == "heis3":
        for i in range(3):
            for j in range(3):
                out.append(class_function(
                    G, lambda a, i=i, j=j: z(i * elems[a][0] + j * elems[a][1]), f"lin({i},{j})"))
        for e in (1, 2):
            out.append(class_function(
                G, lambda a, e=e: z(e * elems[a][2]) * 3 if elems[a][:2] == (0, 0) else Cyclotomic.rational(n, 0),
                "chi3" if e == 1 else "conj(chi3)"))
    else:
        raise UnsupportedGroupError(f"no character table for {G.name}")
    return out


def inner_product(chi: Character, psi: Character) -> Fraction:
    """(1/|G|) sum_g chi(g) conj(psi(g)), exact."""
    chi._check(psi)
    G = chi.group
    total = Cyclotomic.rational(_modulus(G), 0)
    for cls, a, b in zip(G.conjugacy_classes, chi.values, psi.values):
        total = total + a * b.conj() * len(cls)
    return (total / G.order).to_rational()


def power_map(G: FiniteGroup, i: int) -> list[int]:
    """Class index of g**i for a representative g of each class."""
    return [G.class_of[G.power(cls[0], i)] for cls in G.conjugacy_classes]


def exterior_power(chi: Character, k: int) -> Character:
    """k-th exterior power via k e_k(g) = sum_i (-1)^(i-1) e_(k-i)(g) chi(g^i)."""
    G = chi.group
    if k < 0:
        raise ValueError("negative exterior power")
    if k == 0:
        return trivial_character(G)
    n = _modulus(G)
    powers = [None] + [power_map(G, i) for i in range(1, k + 1)]
    e = [trivial_character(G).values]
    for m in range(1, k + 1):
        vals = []
        for c in range(len(G.conjugacy_classes)):
            acc = Cyclotomic.rational(n, 0)
            for i in range(1, m + 1):
                term = e[m - i][c] * chi.values[powers[i][c]]
                acc = acc + term if i % 2 == 1 else acc - term
            vals.append(acc / m)
        e.append(tuple(vals))
    return Character(G, e[k])


def eigenvalue_multiplicities(chi: Character, a: int) -> dict[int, int]:
    """Multiplicity of z_m**k as an eigenvalue at element ``a``, m = ord(a); keys are k."""
    G = chi.group
    m = G.element_orders[a]
    vals = [chi(G.power(a, j)) for j in range(m)]
    out = {}
    for k in range(m):
        acc = Cyclotomic.rational(m, 0)
        for j, v in enumerate(vals):
            acc = acc + v * Cyclotomic.root(m, -j * k)
        q = (acc / m)
        if not q.is_rational():
            raise InvalidCharacterError(f"irrational eigenvalue multiplicity at {a}")
        r = q.to_rational()
        if r.denominator != 1 or r < 0:
            raise InvalidCharacterError(f"eigenvalue multiplicity {r} at {a}")
        out[k] = int(r)
    return out


def _linear_multiplicities(chi: Character, a: int) -> tuple[int, ...]:
    """Shortcut for degree 1: the value itself is the only eigenvalue."""
    G = chi.group
    n, m = _modulus(G), G.element_orders[a]
    value = chi(a)
    hits = [k for k in range(m) if value == Cyclotomic.root(n, k * (n // m))]
    if len(hits) != 1:
        raise InvalidCharacterError(f"value {value} of a linear character is not an {m}-th root of unity")
    return tuple(int(k == hits[0]) for k in range(m))


def kernel(chi: Character) -> list[int]:
    d = chi.degree
    return [a for a in range(chi.group.order) if chi(a) == d]


# --- screening ----------------------------------------------------------------

@dataclass
class CandidateResult:
    constituents: tuple[str, ...]
    faithful: bool
    eigenvalue_one: bool
    integral: bool
    no_common_constituent: bool

    @property
    def passed(self) -> bool:
        return self.faithful and self.eigenvalue_one and self.integral and self.no_common_constituent

    def violated(self) -> list[str]:
        names = ["faithful", "eigenvalue_one", "integral", "no_common_constituent"]
        return [n for n in names if not getattr(self, n)]


@dataclass
class ScreeningReport:
    group: str
    candidates: list[CandidateResult] = field(default_factory=list)
    witnesses: list[tuple[str, ...]] = field(default_factory=list)
    closest_failure: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.witnesses)


def multiplicity_table(irr: list[Character]) -> list[list[tuple[int, ...]]]:
    """``table[i][a][k]``: multiplicity of z_m**k at element a in irreducible i, m = ord(a)."""
    G = irr[0].group
    out = []
    for chi in irr:
        row: list = [None] * G.order
        # eigenvalues only depend on the conjugacy class
        for cls in G.conjugacy_classes:
            if chi.degree == 1:
                vec = _linear_multiplicities(chi, cls[0])
            else:
                m = eigenvalue_multiplicities(chi, cls[0])
                vec = tuple(m[k] for k in range(len(m)))
            for a in cls:
                row[a] = vec
        out.append(row)
    return out


def conjugate_indices(irr: list[Character]) -> list[int]:
    """Position of conj(chi) in ``irr`` for each chi."""
    pos = {c.values_key: i for i, c in enumerate(irr)}
    return [pos[c.conj().values_key] for c in irr]


def check_conditions(G: FiniteGroup, irr: list[Character], multiset: tuple[int, ...],
                     mults: list | None = None) -> CandidateResult:
    """Evaluate the four screening conditions on the sum of the irreducibles in ``multiset``.

    They are: faithful, eigenvalue 1 at every element, rational trace of
    rho + conj(rho), and no constituent shared by rho and conj(rho).

    Eigenvalue multiplicities are additive over constituents, and those of
    the conjugate character are the multiplicities at the inverse roots.
    """
    if mults is None:
        mults = multiplicity_table(irr)
    degree = sum(irr[i].degree for i in multiset)
    faithful = eig_one = integral = True
    for a in range(G.order):
        m = G.element_orders[a]
        mult = [sum(mults[i][a][k] for i in multiset) for k in range(m)]
        if mult[0] == 0:
            eig_one = False
        if a != G.identity and mult[0] == degree:
            faithful = False
        real = [mult[k] + mult[-k % m] for k in range(m)]
        # z_m**k and z_m**j are Galois conjugate iff gcd(k, m) = gcd(j, m)
        if any(real[k] != real[gcd(k, m) % m] for k in range(m)):
            integral = False
    conj = conjugate_indices(irr)
    consts = set(multiset)
    no_common = not (consts & {conj[i] for i in consts})
    return CandidateResult(tuple(irr[i].label for i in multiset), faithful, eig_one, integral, no_common)


def _candidate_multisets(G: FiniteGroup, irr: list[Character], degree: int,
                         strict: bool = True, mults: list | None = None) -> list[tuple[int, ...]]:
    """Multisets of irreducibles of total degree ``degree`` having eigenvalue 1 everywhere.

    With ``strict`` the multisets must also share no constituent with their
    conjugate, so real irreducibles and conjugate pairs are excluded up
    front.  The eigenvalue condition is used as a covering constraint: every element must get eigenvalue 1 from some
    constituent, so we always branch on the constituents covering the first
    uncovered element and fill any leftover degree freely at the end.
    """
    conj = conjugate_indices(irr)
    allowed = [i for i in range(len(irr)) if not strict or conj[i] != i]
    degs = [c.degree for c in irr]
    if mults is None:
        mults = multiplicity_table(irr)
    covers = {i: frozenset(a for a in range(G.order) if mults[i][a][0] > 0) for i in allowed}
    results: set[tuple[int, ...]] = set()

    def clash(ms) -> bool:
        return strict and any(conj[i] in ms for i in ms)

    def fill(chosen: list[int], budget: int):
        if budget == 0:
            results.add(tuple(sorted(chosen)))
            return
        opts = [i for i in allowed if degs[i] <= budget and not clash(chosen + [i])]
        for size in range(1, budget + 1):
            for extra in combinations_with_replacement(opts, size):
                ms = chosen + list(extra)
                if sum(degs[i] for i in extra) == budget and not clash(ms):
                    results.add(tuple(sorted(ms)))

    def cover(chosen: list[int], covered: frozenset, budget: int):
        uncovered = next((a for a in range(G.order) if a not in covered), None)
        if uncovered is None:
            fill(chosen, budget)
            return
        for i in allowed:
            if degs[i] <= budget and uncovered in covers[i] and not clash(chosen + [i]):
                cover(chosen + [i], covered | covers[i], budget - degs[i])

    cover([], frozenset({G.identity}), degree)
    return sorted(results)


def screen(G: FiniteGroup, degree: int = 4) -> ScreeningReport:
    irr = irreducible_characters(G)
    mults = multiplicity_table(irr)
    report = ScreeningReport(G.name)
    for ms in _candidate_multisets(G, irr, degree, mults=mults):
        res = check_conditions(G, irr, ms, mults)
        report.candidates.append(res)
        if res.passed:
            report.witnesses.append(res.constituents)
    if not report.passed:
        report.closest_failure = _closest_failure(G, irr, report, degree, mults)
    return report


def _closest_failure(G, irr, report, degree, mults) -> list[str]:
    """Conditions to blame when no candidate passes, for error messages.

    If the eigenvalue and conjugate conditions already admit no common
    solution, say so: either every irreducible is real (so the conjugate
    condition fails for every character) or the two conditions are jointly
    unsatisfiable.
    """
    pool = report.candidates
    if pool:
        return min(pool, key=lambda r: (len(r.violated()), r.constituents)).violated()
    if all(c.conj() == c for c in irr):
        return ["no_common_constituent"]
    return ["eigenvalue_one", "no_common_constituent"]


# --- Hodge numbers -------------------------------------------------------------

@dataclass
class HodgeDiamond:
    h: dict[tuple[int, int], int]
    dim: int = 4

    def __getitem__(self, pq: tuple[int, int]) -> int:
        return self.h[pq]

    def rows(self) -> list[list[int]]:
        """Rows of the diamond, top row h^{0,0}."""
        n = self.dim
        out = []
        for s in range(2 * n + 1):
            out.append([self.h[(p, s - p)] for p in range(max(0, s - n), min(n, s) + 1)])
        return out

    def __str__(self) -> str:
        rows = self.rows()
        width = 4 * len(rows[len(rows) // 2])
        return "\n".join(" ".join(f"{v:>3}" for v in r).center(width).rstrip() for r in rows)


def _chi_rho_heis(G: FiniteGroup) -> tuple[Character, Character]:
    """chi_1 (g -> 1, h -> w) and chi_3 of Heis(3)."""
    irr = irreducible_characters(G)
    chi1 = next(c for c in irr if c.label == "lin(0,1)")
    chi3 = next(c for c in irr if c.label == "chi3")
    return chi1, chi3


def hodge_character(parts: list[Character], p: int, q: int) -> Character:
    """Character of H^{p,q} of the torus when rho splits as the sum of ``parts``.

    Sum over splittings p = sum s_i, q = sum t_i of
    prod_i wedge^{s_i}(conj chi_i) wedge^{t_i}(chi_i).
    """
    G = parts[0].group
    total = None

    def splits(n, k):
        if k == 1:
            yield (n,)
            return
        for i in range(n + 1):
            for rest in splits(n - i, k - 1):
                yield (i,) + rest

    for s in splits(p, len(parts)):
        for t in splits(q, len(parts)):
            term = trivial_character(G)
            for chi, si, ti in zip(parts, s, t):
                if si > chi.degree or ti > chi.degree:
                    term = None
                    break
                term = term * exterior_power(chi.conj(), si) * exterior_power(chi, ti)
            if term is None:
                continue
            total = term if total is None else total + term
    if total is None:
        total = trivial_character(G) * 0
    return total


def restrict(chi: Character, H: FiniteGroup, embed) -> Character:
    """Restriction along the injective homomorphism ``embed``: H-index -> G-index."""
    return class_function(H, lambda a: chi(embed(a)).lift(_modulus(H)) if _modulus(H) % chi(embed(a)).n == 0
                          else chi(embed(a)))


def hodge_numbers(tag: str) -> HodgeDiamond:
    """h^{p,q} of the rigid quotients with holonomy Heis(3) ('heis3') or Z3^2 ('z3z3')."""
    G = make_heis3()
    chi1, chi3 = _chi_rho_heis(G)
    h = {}
    if tag == "heis3":
        triv = trivial_character(G)
        for p in range(5):
            for q in range(5):
                h[(p, q)] = _as_int(inner_product(hodge_character([chi1, chi3], p, q), triv))
    elif tag == "z3z3":
        H = make_z3z3()
        # h -> (1, 0), k -> (0, 1)
        embed = lambda a: G.index((0, H.elements[a][0], H.elements[a][1]))
        triv = trivial_character(H)
        for p in range(5):
            for q in range(5):
                chi = hodge_character([chi1, chi3], p, q)
                h[(p, q)] = _as_int(inner_product(restrict(chi, H, embed), triv))
    else:
        raise ValueError(f"unknown holonomy tag {tag!r}")
    return HodgeDiamond(h)


def _as_int(q: Fraction) -> int:
    if q.denominator != 1 or q < 0:
        raise InvalidCharacterError(f"Hodge number {q} is not a non-negative integer")
    return int(q)
