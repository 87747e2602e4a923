"""Normalizers of the holonomy representations, transporters between lattices
and orbits of special cohomology classes.

A map A normalizing rho(G) induces the automorphism phi_A of G with
A rho(u) A^-1 = rho(phi_A(u)).  It acts on cocycles by
(A * tau)(u) = A tau(phi_A^-1(u)).  Cocycles are stored by their values on
the named generators, reduced modulo the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

from .actions import (
    E3, W_MINUS_ONE, StandardAction, free_actions, holonomy, is_free, is_well_defined,
    reduced_tau,
)
from .characters import irreducible_characters
from .cyclotomic import Cyclotomic
from .eisenstein import ORIGIN, UNITS, EisensteinInt, kernel_of
from .expected import HEIS_REPRESENTATIVES, Z32_REPRESENTATIVES, parse_vector4
from .groups import GroupAutomorphism, automorphism_lookup, automorphisms, character_stabilizer
from .lattice import (
    TABLE_ORDER, BlockMap, Kernel, LevelError, MonomialMap, PointVector, SemilinearMap,
    reduce_mod, table_kernel, vec_add, vec_neg, vec_sub,
)

Cocycle = tuple  # reduced values on the named generators, in gen_names order


class ConstructionMismatch(RuntimeError):
    """Two independent constructions of a normalizer group disagree."""


class RepresentativeMismatch(RuntimeError):
    """A known class representative is missing from the computed classes."""


# --- phi_A ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _rho_keys(tag: str) -> dict:
    """Keys of rho(u), in monomial and in block form, -> u."""
    out = {}
    for u, m in enumerate(holonomy(tag).rho):
        out[m.key] = u
        out[m.as_block().key] = u
    return out


@lru_cache(maxsize=None)
def _automorphisms(tag: str) -> tuple[list[GroupAutomorphism], dict]:
    G = holonomy(tag).group
    autos = automorphisms(G)
    return autos, automorphism_lookup(G, autos)


def phi_of(A: SemilinearMap, tag: str) -> GroupAutomorphism | None:
    """phi_A, or None when A does not normalize rho(G)."""
    H = holonomy(tag)
    G = H.group
    keys = _rho_keys(tag)
    Ainv = A.inverse()
    images = []
    for name in sorted(G.generators):
        conj = A.compose(H.rho[G.gen(name)]).compose(Ainv)
        u = keys.get(conj.key)
        if u is None:
            return None
        images.append(u)
    return _automorphisms(tag)[1].get(tuple(images))


# --- normalizer groups -------------------------------------------------------------

@dataclass(eq=False)
class NormalizerGroup:
    """A finite group of semilinear maps normalizing rho(G), with phi_A for each map."""

    name: str
    tag: str
    maps: tuple
    generators: tuple
    _keys: frozenset = field(default=frozenset(), repr=False)
    _phi: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._keys = frozenset(A.key for A in self.maps)

    @property
    def order(self) -> int:
        return len(self.maps)

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __contains__(self, A: SemilinearMap) -> bool:
        return A.key in self._keys

    def phi(self, A: SemilinearMap) -> GroupAutomorphism:
        out = self._phi.get(A.key)
        if out is None:
            out = phi_of(A, self.tag)
            if out is None:
                raise ValueError(f"{A} does not normalize rho")
            self._phi[A.key] = out
        return out

    def phis(self) -> list[GroupAutomorphism]:
        return [self.phi(A) for A in self.maps]


def closure(gens: Iterable[SemilinearMap]) -> list[SemilinearMap]:
    """The group generated by ``gens``, sorted by key."""
    gens = list(gens)
    ident = gens[0].compose(gens[0].inverse())
    seen = {ident.key: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a.compose(g)
                if b.key not in seen:
                    seen[b.key] = b
                    nxt.append(b)
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


def _agree(name: str, from_gens: Sequence, structural: Sequence) -> None:
    a = {A.key for A in from_gens}
    b = {A.key for A in structural}
    if a != b:
        raise ConstructionMismatch(
            f"{name}: generator closure has {len(a)} maps, structural construction {len(b)}, "
            f"{len(a ^ b)} differ")


Z32_AUT_GENERATORS = (
    MonomialMap(units=(1, 0, 0, 0)),
    MonomialMap(units=(0, 1, 0, 0)),
    MonomialMap(perm=(0, 2, 3, 1)),
)
Z32_AFF_GENERATORS = (
    MonomialMap(perm=(0, 1, 3, 2), flags=(1, 0, 0, 0)),
    MonomialMap(perm=(1, 2, 3, 0), flags=(0, 1, 0, 0)),
    MonomialMap(units=(1, 0, 0, 0)),
)
_PERMS = tuple(permutations(range(4)))


@lru_cache(maxsize=None)
def n_aut0_z32() -> NormalizerGroup:
    """C-linear monomial maps normalizing rho(Z3^2): generator closure and a full filter agree."""
    from_gens = closure(Z32_AUT_GENERATORS)
    structural = [A for perm in _PERMS for units in product(range(6), repeat=4)
                  if phi_of(A := MonomialMap(perm, units), "z3z3") is not None]
    _agree("n_aut0_z32", from_gens, structural)
    return NormalizerGroup("n_aut0_z32", "z3z3", tuple(from_gens), Z32_AUT_GENERATORS)


@lru_cache(maxsize=None)
def n_aff0_z32() -> NormalizerGroup:
    """Semilinear monomial maps normalizing rho(Z3^2).

    Structurally: the (permutation, flag) patterns normalizing rho, one per
    automorphism of Z3^2, times all 6^4 diagonal unit choices (diagonal maps
    commute with the diagonal image of rho, so units never matter).
    """
    patterns = [MonomialMap(perm, flags=flags) for perm in _PERMS
                for flags in product(range(2), repeat=4)]
    patterns = [A for A in patterns if phi_of(A, "z3z3") is not None]
    if len(patterns) != len(_automorphisms("z3z3")[0]):
        raise ConstructionMismatch(f"{len(patterns)} normalizing patterns, expected one per automorphism")
    structural = [MonomialMap(units=u).compose(A) for A in patterns for u in product(range(6), repeat=4)]
    from_gens = closure(Z32_AFF_GENERATORS)
    _agree("n_aff0_z32", from_gens, structural)
    return NormalizerGroup("n_aff0_z32", "z3z3", tuple(from_gens), Z32_AFF_GENERATORS)


# --- Heis(3) ------------------------------------------------------------------------

def _e(a: int, b: int = 0) -> EisensteinInt:
    return EisensteinInt(a, b)


_Z, _3 = _e(0), _e(3)
_ID3 = ((_3, _Z, _Z), (_Z, _3, _Z), (_Z, _Z, _3))
_P, _Q = _e(2, 1), _e(-1, -2)  # 2 + w and (2 + w) w^2, numerators over 3

D1 = BlockMap(mat=((_e(0, 3), _Z, _Z), (_Z, _e(-3, -3), _Z), (_Z, _Z, _3)))
D2 = BlockMap(mat=((_P, _Q, _Q), (_Q, _P, _Q), (_Q, _Q, _P)))
D3 = BlockMap(mat=((_3, _Z, _Z), (_Z, _Z, _3), (_Z, _3, _Z)))
D4 = BlockMap(mat=_ID3, fd=1)
D_GENERATORS = (D1, D2, D3, D4)

HEIS_NC_GENERATORS = (BlockMap(u1=1, mat=_ID3), D1, D2)
HEIS_NR_GENERATORS = HEIS_NC_GENERATORS + (
    BlockMap(f1=1, mat=D3.mat), BlockMap(f1=1, mat=_ID3, fd=1))


def _cyc(x: EisensteinInt) -> Cyclotomic:
    return Cyclotomic(3, [x.a, x.b])


def _tail_matrix(m: MonomialMap, conj: bool = False) -> list[list[Cyclotomic]]:
    """rho on coordinates 2..4 as a 3x3 matrix over Q(w)."""
    R = [[Cyclotomic(3, [0]) for _ in range(3)] for _ in range(3)]
    for i in range(1, 4):
        c = _cyc(UNITS[m.units[i]])
        R[i - 1][m.perm[i] - 1] = c.conj() if conj else c
    return R


def _nullspace(rows: list[list[Cyclotomic]], ncols: int) -> list[list[Cyclotomic]]:
    """Basis of the right null space, by reduced row echelon form."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Cyclotomic(3, [0]) for _ in range(ncols)]
        v[free] = Cyclotomic(3, [1])
        for i, c in enumerate(pivots):
            v[c] = -rows[i][free]
        basis.append(v)
    return basis


def _intertwiner(phi: GroupAutomorphism) -> tuple[list[list[Cyclotomic]], int]:
    """M (up to scalar) with M rho3(u) = rho3(phi(u)) M, or the antilinear version."""
    H = holonomy("heis3")
    G = H.group
    for fd in (0, 1):
        eqs = []
        for name in ("g", "h"):
            u = G.gen(name)
            R = _tail_matrix(H.rho[u], conj=bool(fd))
            R2 = _tail_matrix(H.rho[phi(u)])
            for i in range(3):
                for j in range(3):
                    row = [Cyclotomic(3, [0]) for _ in range(9)]
                    for k in range(3):
                        row[3 * i + k] = row[3 * i + k] + R[k][j]
                        row[3 * k + j] = row[3 * k + j] - R2[i][k]
                    eqs.append(row)
        basis = _nullspace(eqs, 9)
        if len(basis) == 1:
            v = basis[0]
            lead = next(x for x in v if x != 0)
            inv = lead.inverse()
            return [[v[3 * i + j] * inv for j in range(3)] for i in range(3)], fd
        if basis:
            raise ConstructionMismatch("intertwiner space is not one-dimensional")
    raise ConstructionMismatch("automorphism has no intertwiner")


def _det3(M) -> Cyclotomic:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _icbrt(n: int) -> int | None:
    r = round(n ** (1 / 3))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** 3 == n:
            return c
    return None


def _eisenstein_of_norm(n: int) -> list[EisensteinInt]:
    bound = int(2 * (n ** 0.5)) + 2
    return [_e(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)
            if a * a - a * b + b * b == n]


def _lattice_scalings(M0, fd: int, lattices: Sequence[Kernel]) -> list[BlockMap]:
    """All scalar multiples mu M0 that map each lattice onto itself.

    M0 has an entry 1 and the image of a lattice vector lies in (1/3)Z[w]^3,
    so mu = nu/3 with nu in Z[w]; |det| = 1 fixes N(nu).
    """
    d = _det3(M0)
    q = (d * d.conj()).to_rational()
    # N(nu/3)^3 * q = 1  ->  N(nu)^3 = 729 / q
    target = Fraction(729) / q
    num, den = _icbrt(target.numerator), _icbrt(target.denominator)
    if num is None or den is None or den != 1:
        return []
    out = []
    for nu in _eisenstein_of_norm(num):
        rows = []
        for r in M0:
            row = []
            for x in r:
                y = x * _cyc(nu)
                if y.den != 1:
                    break
                row.append(_e(*y.num))
            else:
                rows.append(tuple(row))
                continue
            break
        if len(rows) != 3:
            continue
        B = BlockMap(mat=tuple(rows), fd=fd)
        if all(B.maps_lattice(L, L) for L in lattices):
            out.append(B)
    return out


def stab_chi1_real() -> list[GroupAutomorphism]:
    """Automorphisms of Heis(3) fixing the real character chi_1 + conj(chi_1)."""
    G = holonomy("heis3").group
    chi1 = next(c for c in irreducible_characters(G) if c.label == "lin(0,1)")
    return character_stabilizer(G, _automorphisms("heis3")[0], [chi1 + chi1.conj()])


@lru_cache(maxsize=None)
def d_group_heis() -> NormalizerGroup:
    """The 648 lattice-preserving representatives of the classes [D_phi] on coordinates 2..4.

    Built as the closure of D1..D4 and, independently, by solving the
    intertwining equations for every phi in Stab(chi_1R) and keeping the
    scalar multiples that preserve both lattices.
    """
    lattices = [table_kernel("L1"), table_kernel("L2")]
    from_gens = closure(D_GENERATORS)
    structural = []
    for phi in stab_chi1_real():
        M0, fd = _intertwiner(phi)
        found = _lattice_scalings(M0, fd, lattices)
        if len(found) != 6:
            raise ConstructionMismatch(f"{len(found)} lattice-preserving representatives for one class")
        structural += found
    _agree("d_group_heis", from_gens, structural)
    return NormalizerGroup("d_group_heis", "heis3", tuple(from_gens), D_GENERATORS)


def _with_first(u1: int, f1: int, D: BlockMap) -> BlockMap:
    return BlockMap(u1, f1, D.mat, D.fd)


@lru_cache(maxsize=None)
def n_r_heis() -> NormalizerGroup:
    """Real normalizer of rho(Heis(3)) preserving Lambda_1 and Lambda_2.

    Structurally: the twelve maps z1 -> c z1, c conj(z1) paired with every
    D-group element, keeping the pairs that normalize rho.
    """
    D = d_group_heis()
    structural = [A for u1 in range(6) for f1 in range(2) for B in D.maps
                  if phi_of(A := _with_first(u1, f1, B), "heis3") is not None]
    from_gens = closure(HEIS_NR_GENERATORS)
    _agree("n_r_heis", from_gens, structural)
    return NormalizerGroup("n_r_heis", "heis3", tuple(from_gens), HEIS_NR_GENERATORS)


@lru_cache(maxsize=None)
def n_c_heis() -> NormalizerGroup:
    """The C-linear part of n_r_heis, also generated by (-w) z1, D1 and D2."""
    structural = [A for A in n_r_heis().maps if A.is_linear()]
    from_gens = closure(HEIS_NC_GENERATORS)
    _agree("n_c_heis", from_gens, structural)
    return NormalizerGroup("n_c_heis", "heis3", tuple(from_gens), HEIS_NC_GENERATORS)


def d_group_linear() -> list[BlockMap]:
    """<D1, D2>."""
    return closure((D1, D2))


# --- transporters -----------------------------------------------------------------

@dataclass(frozen=True)
class TransporterSet:
    """{A in the ambient group : A(Lambda_source) = Lambda_target}, counted by real determinant sign."""

    source: str
    target: str
    plus: int
    minus: int
    witness: SemilinearMap | None = None

    @property
    def size(self) -> int:
        return self.plus + self.minus

    def is_empty(self) -> bool:
        return self.size == 0


def _name(K: Kernel) -> str:
    return K.label or str(K)


def transporter_table(kernels: Sequence[Kernel], ambient: NormalizerGroup) -> dict:
    """TransporterSet for every ordered pair of ``kernels``."""
    index = {K.key: i for i, K in enumerate(kernels)}
    counts: dict = {}
    witness: dict = {}
    images: dict = {}
    for A in ambient.maps:
        if isinstance(A, MonomialMap):
            # the action on Fix^4 only sees the permutation and the signs (-1)^(e + f)
            sig = (A.perm, tuple((e + f) % 2 for e, f in zip(A.units, A.flags)))
            row = images.get(sig)
            if row is None:
                row = [index.get(tuple(sorted(A.on_f3(v) for v in K.elements))) for K in kernels]
                images[sig] = row
        else:
            row = [next((j for j, L in enumerate(kernels)
                         if L.order == K.order and A.maps_lattice(K, L)), None) for K in kernels]
        s = A.det_sign()
        for i, j in enumerate(row):
            if j is not None:
                c = counts.setdefault((i, j), [0, 0])
                c[0 if s > 0 else 1] += 1
                witness.setdefault((i, j), A)
    out = {}
    for i, K in enumerate(kernels):
        for j, L in enumerate(kernels):
            plus, minus = counts.get((i, j), (0, 0))
            out[(_name(K), _name(L))] = TransporterSet(_name(K), _name(L), plus, minus, witness.get((i, j)))
    return out


def transporter(Ki: Kernel, Kj: Kernel, ambient: NormalizerGroup) -> TransporterSet:
    return transporter_table([Ki, Kj], ambient)[(_name(Ki), _name(Kj))]


def stabilizer(group: NormalizerGroup, K: Kernel) -> list[SemilinearMap]:
    if all(isinstance(A, MonomialMap) for A in group.maps):
        return [A for A in group.maps if {A.on_f3(v) for v in K.elements} == K.elements]
    return [A for A in group.maps if A.maps_lattice(K, K)]


def stabilizer_generators(group: NormalizerGroup, K: Kernel) -> list[SemilinearMap]:
    """Schreier generators of the stabilizer of K (monomial groups) or the group generators."""
    gens = list(group.generators)
    if not all(isinstance(A, MonomialMap) for A in gens):
        if not all(A.maps_lattice(K, K) for A in gens):
            raise ValueError(f"generators of {group.name} do not preserve {K}")
        return gens
    ident = MonomialMap()
    start = K.elements
    trans = {start: ident}
    queue = [start]
    for L in queue:
        for s in gens:
            L2 = frozenset(s.on_f3(v) for v in L)
            if L2 not in trans:
                trans[L2] = s.compose(trans[L])
                queue.append(L2)
    out = {}
    for L in queue:
        for s in gens:
            L2 = frozenset(s.on_f3(v) for v in L)
            g = trans[L2].inverse().compose(s).compose(trans[L])
            if g != ident:
                out[g.key] = g
    return [out[k] for k in sorted(out)]


# --- cocycles and coboundaries --------------------------------------------------------

def cocycle_value(tag: str, values: Cocycle, u: int) -> PointVector:
    """tau(u) (unreduced) for the cocycle with the given generator values."""
    from .actions import _words

    H = holonomy(tag)
    G = H.group
    by_name = dict(zip(H.gen_names, values))
    out, prefix = (ORIGIN,) * 4, G.identity
    for name in _words(tag)[u]:
        out = vec_add(out, H.rho[prefix].apply_vector(by_name[name]))
        prefix = G.mul(prefix, G.gen(name))
    return out


def coboundary_value(tag: str, d: PointVector, u: int) -> PointVector:
    """(rho(u) - 1) d."""
    return vec_sub(holonomy(tag).rho[u].apply_vector(d), d)


def first_coordinate_domain() -> tuple:
    """ker 3(w - 1) on E, 27 points."""
    return tuple(sorted(kernel_of(_e(-3, 3)).elements))


def tail_domain(K: Kernel) -> tuple:
    """(d2, d3, d4) in E[3]^3 with (w - 1)(d2, d3, d4) in p(Lambda_K).

    (w - 1) x lies in Fix^3 and (w - 1)^2 = -3w, so 3x = 0: E[3]^3 is enough.
    """
    tails = {k[1:] for k in K.points}
    return tuple(x for x in product(E3, repeat=3) if tuple(W_MINUS_ONE * c for c in x) in tails)


@lru_cache(maxsize=None)
def coboundary_grid(K: Kernel) -> tuple:
    """Candidate origin shifts d, one per class modulo Lambda_K."""
    seen = {}
    for d1 in first_coordinate_domain():
        for x in tail_domain(K):
            d = (d1,) + x
            seen.setdefault(reduce_mod(d, K), d)
    return tuple(seen[k] for k in sorted(seen))


def shift_cocycle(tag: str, K: Kernel, values: Cocycle, d: PointVector) -> Cocycle:
    """tau + (rho - 1) d, reduced."""
    H = holonomy(tag)
    return tuple(reduce_mod(vec_add(v, coboundary_value(tag, d, H.gen(n))), K)
                 for v, n in zip(values, H.gen_names))


def coboundary_equivalent(tau: Cocycle, tau2: Cocycle, tag: str, K: Kernel) -> PointVector | None:
    """Some d with (rho(u) - 1) d = tau(u) - tau2(u) on the generators, or None."""
    target = tuple(reduce_mod(v, K) for v in tau2)
    tau = tuple(reduce_mod(v, K) for v in tau)
    for d in coboundary_grid(K):
        if shift_cocycle(tag, K, tau, d) == target:
            return reduce_mod(vec_neg(d), K)
    return None


def _solve_w_minus_1(y):
    """Some x with (w - 1) x = y; y must lie in E[9] so that y/3 exists in E[27]."""
    if y.x % 3 or y.y % 3:
        raise LevelError("cannot divide a point outside E[9] by 3")
    # (w - 1)(w^2 - 1) = 3
    return _e(-2, -1) * type(y)(y.x // 3, y.y // 3)


def standardize(tag: str, K: Kernel, tau: Cocycle) -> Cocycle:
    """A cohomologous cocycle with tau(h) = (0, *, *, *) and tau(k) = (*, 0, 0, 0).

    Uses rho(h) = w on the first coordinate and rho(k) = w on the last three.
    """
    H = holonomy(tag)
    vals = dict(zip(H.gen_names, tau))
    th, tk = vals["h"], vals["k"]
    d = (_solve_w_minus_1(-th[0]),) + tuple(_solve_w_minus_1(-c) for c in tk[1:])
    return shift_cocycle(tag, K, tau, d)


def act_on_cocycle(A: SemilinearMap, tau: Cocycle, tag: str, target: Kernel,
                   phi: GroupAutomorphism | None = None) -> Cocycle:
    """(A * tau)(u) = A tau(phi_A^-1(u)) on the generators, reduced modulo the target kernel."""
    H = holonomy(tag)
    if phi is None:
        phi = phi_of(A, tag)
        if phi is None:
            raise ValueError(f"{A} does not normalize rho")
    inv = phi.inverse()
    return tuple(reduce_mod(A.apply_vector(cocycle_value(tag, tau, inv(H.gen(n)))), target)
                 for n in H.gen_names)


# --- special classes -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CocycleClass:
    """A special class: the free standard-form cocycles cohomologous to ``representative``."""

    tag: str
    kernel: Kernel
    class_id: int
    representative: StandardAction
    members: tuple  # distinct reduced cocycles, sorted; members[0] is the representative's

    @property
    def cocycle(self) -> Cocycle:
        return self.members[0]


@dataclass(eq=False)
class ClassIndex:
    tag: str
    kernel: Kernel
    mode: str
    classes: list
    lookup: dict  # every coboundary translate of every class -> class id

    def class_of(self, tau: Cocycle) -> int | None:
        return self.lookup.get(tau)


@lru_cache(maxsize=None)
def class_index(tag: str, K: Kernel, mode: str = "normalized") -> ClassIndex:
    acts: dict = {}
    for act in free_actions(tag, K, mode):
        acts.setdefault(reduced_tau(act), act)
    lookup: dict = {}
    classes = []
    for tau in sorted(acts):
        if tau in lookup:
            continue
        cid = len(classes)
        coset = {shift_cocycle(tag, K, tau, d) for d in coboundary_grid(K)}
        for s in coset:
            lookup[s] = cid
        members = tuple(sorted(t for t in acts if t in coset))
        classes.append(CocycleClass(tag, K, cid, acts[members[0]], members))
    return ClassIndex(tag, K, mode, classes, lookup)


def special_classes(K: Kernel, tag: str, mode: str = "normalized") -> list[CocycleClass]:
    return class_index(tag, K, mode).classes


# --- classification ---------------------------------------------------------------------

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> list[tuple]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return _sorted_groups(out.values())


def _sorted_groups(groups) -> list[tuple]:
    groups = [tuple(sorted(g, key=_node_key)) for g in groups]
    return sorted(groups, key=lambda g: _node_key(g[0]))


def _node_key(node):
    label, cid = node
    return (_label_rank(label), cid)


def _label_rank(label: str):
    order = list(TABLE_ORDER) + ["L1", "L2"]
    return order.index(label) if label in order else len(order)


@dataclass
class ClassificationOutcome:
    tag: str
    equivalence: str
    kernels: tuple
    classes: dict  # label -> list of CocycleClass
    merged: list  # each entry: tuple of (label, class_id)
    representatives: dict  # name -> (label, class_id)
    transporters: dict  # (label, label) -> TransporterSet, i < j
    orbit_counts: dict = field(default_factory=dict)  # label -> orbits within that kernel
    mismatches: dict = field(default_factory=dict)  # representative name -> reason

    @property
    def class_count(self) -> int:
        return len(self.merged)

    def merged_kernels(self) -> list[tuple[str, ...]]:
        out = []
        for grp in self.merged:
            labels = []
            for label, _ in grp:
                if label not in labels:
                    labels.append(label)
            out.append(tuple(labels))
        return out


def _z32_representative(label: str) -> StandardAction:
    th, tk = (parse_vector4(s) for s in Z32_REPRESENTATIVES[label])
    return StandardAction("z3z3", table_kernel(label), tk[0], th[1:])


def heis_representative(name: str, label: str) -> StandardAction:
    from .actions import ONE_MINUS_W

    tg, th = (parse_vector4(s) for s in HEIS_REPRESENTATIVES[name])
    return StandardAction("heis3", table_kernel(label), ONE_MINUS_W * tg[0], th[1:], tg)


def _match(act: StandardAction, index: ClassIndex) -> tuple[int | None, str]:
    """Class id of a known representative, or None with the reason it has none."""
    if not is_well_defined(act):
        return None, "not well defined"
    if not is_free(act):
        return None, "not free"
    cid = index.class_of(reduced_tau(act))
    if cid is None:
        return None, "in no computed class"
    return cid, ""


def _union_orbits(uf: _UnionFind, tag: str, label: str, index: ClassIndex, maps, phi, target_label=None,
                  target_index: ClassIndex | None = None) -> None:
    target_index = target_index or index
    target_label = target_label or label
    for A in maps:
        ph = phi(A)
        for c in index.classes:
            img = act_on_cocycle(A, c.cocycle, tag, target_index.kernel, ph)
            j = target_index.class_of(img)
            if j is None:
                j = target_index.class_of(standardize(tag, target_index.kernel, img))
            if j is None:
                raise RuntimeError(f"image of class {c.class_id} on {label} is not a special class")
            uf.union((label, c.class_id), (target_label, j))


def classify(tag: str, equivalence: str = "bihol", strict: bool = False) -> ClassificationOutcome:
    """Orbits of special classes under the holomorphic (bihol) or real (diffeo) normalizer.

    With ``strict`` a known representative that lands in no class raises
    RepresentativeMismatch; otherwise it is listed in ``mismatches``.
    """
    out = _classify(tag, equivalence)
    if strict and out.mismatches:
        raise RepresentativeMismatch(
            "; ".join(f"{k}: {v}" for k, v in sorted(out.mismatches.items())))
    return out


@lru_cache(maxsize=None)
def _classify(tag: str, equivalence: str) -> ClassificationOutcome:
    if equivalence not in ("bihol", "diffeo"):
        raise ValueError(f"unknown equivalence {equivalence!r}")
    if tag == "z3z3":
        return _classify_z32(equivalence)
    if tag == "heis3":
        return _classify_heis(equivalence)
    raise ValueError(f"unknown holonomy tag {tag!r}")


def _classify_z32(equivalence: str) -> ClassificationOutcome:
    group = n_aut0_z32() if equivalence == "bihol" else n_aff0_z32()
    labels = tuple(TABLE_ORDER)
    kernels = [table_kernel(l) for l in labels]
    indices = {l: class_index("z3z3", table_kernel(l)) for l in labels}
    uf = _UnionFind([(l, c.class_id) for l in labels for c in indices[l].classes])
    orbit_counts = {}
    for l in labels:
        local = _UnionFind([(l, c.class_id) for c in indices[l].classes])
        gens = stabilizer_generators(group, table_kernel(l))
        _union_orbits(local, "z3z3", l, indices[l], gens, group.phi)
        _union_orbits(uf, "z3z3", l, indices[l], gens, group.phi)
        orbit_counts[l] = len(local.groups())
    table = transporter_table(kernels, group)
    pairs = {}
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if "Kexc" in (a, b):
                continue
            T = table[(a, b)]
            pairs[(a, b)] = T
            if T.witness is not None:
                _union_orbits(uf, "z3z3", a, indices[a], [T.witness], group.phi, b, indices[b])
    reps, bad = {}, {}
    for l in labels:
        if l != "Kexc":
            cid, why = _match(_z32_representative(l), indices[l])
            reps[l] = None if cid is None else (l, cid)
            if why:
                bad[l] = why
    return ClassificationOutcome("z3z3", equivalence, labels,
                                 {l: indices[l].classes for l in labels}, uf.groups(), reps, pairs,
                                 orbit_counts, bad)


def _classify_heis(equivalence: str) -> ClassificationOutcome:
    group = n_c_heis() if equivalence == "bihol" else n_r_heis()
    labels = ("L1", "L2")
    full = {l: class_index("heis3", table_kernel(l), "exhaustive") for l in labels}
    normal = {l: class_index("heis3", table_kernel(l), "normalized") for l in labels}
    uf = _UnionFind([(l, c.class_id) for l in labels for c in full[l].classes])
    for l in labels:
        _union_orbits(uf, "heis3", l, full[l], stabilizer_generators(group, table_kernel(l)), group.phi)
    T = transporter(table_kernel("L1"), table_kernel("L2"), group)
    if T.witness is not None:
        _union_orbits(uf, "heis3", "L1", full["L1"], [T.witness], group.phi, "L2", full["L2"])
    # report orbits through the normalized classes
    to_full = {}
    for l in labels:
        for c in normal[l].classes:
            j = full[l].class_of(c.cocycle)
            if j is None:
                raise RuntimeError(f"normalized class {c.class_id} on {l} missing from the exhaustive list")
            to_full[(l, c.class_id)] = uf.find((l, j))
    merged: dict = {}
    for node, root in to_full.items():
        merged.setdefault(root, []).append(node)
    groups = _sorted_groups(merged.values())
    orbit_counts = {l: len({r for (m, _), r in to_full.items() if m == l}) for l in labels}
    reps, bad = {}, {}
    for name in HEIS_REPRESENTATIVES:
        for l in labels:
            cid, why = _match(heis_representative(name, l), normal[l])
            reps[f"{name}@{l}"] = None if cid is None else (l, cid)
            if why:
                bad[f"{name}@{l}"] = why
    return ClassificationOutcome("heis3", equivalence, labels,
                                 {l: normal[l].classes for l in labels}, groups, reps,
                                 {("L1", "L2"): T}, orbit_counts, bad)
