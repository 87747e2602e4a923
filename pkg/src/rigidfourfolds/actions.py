"""Standard-form actions of Z3^2 and Heis(3) on T = E^4/K.

An action is given by its translation part: tau(h) = (0, b2, b3, b4),
tau(k) = (c1, 0, 0, 0) and, for Heis(3), tau(g) = (a1, a2, a3, a4).  The
linear part is the fixed representation rho.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .eisenstein import ORIGIN, T_POINT, THIRD, UNITS, W, EisensteinInt, TorsionPoint, all_points
from .groups import FiniteGroup, make_heis3, make_z3z3
from .lattice import (
    FIX, Kernel, MonomialMap, PointVector, encode, reduce_mod, vec_add,
)

TAGS = ("z3z3", "heis3")

ONE_MINUS_W = EisensteinInt(1, -1)
W_MINUS_ONE = EisensteinInt(-1, 1)
ONE_MINUS_W2 = EisensteinInt(2, 1)  # 1 - w^2 = 2 + w
E3 = tuple(all_points(3))
E3_NONZERO = tuple(p for p in E3 if not p.is_zero())
#: a1 candidates for Heis(3): x in E[9] with 3x fixed by w
A1_DOMAIN = tuple(p for p in all_points(9) if encode((p * 3,) * 4) is not None)


def _wpow(j: int) -> int:
    """Exponent e with (-w)^e = w^j."""
    return 4 * j % 6


def _diag(*js: int) -> MonomialMap:
    return MonomialMap(units=tuple(_wpow(j) for j in js))


@dataclass(frozen=True, eq=False)
class Holonomy:
    """A holonomy group with its analytic representation on C^4."""

    tag: str
    group: FiniteGroup
    rho: tuple  # MonomialMap per element index
    gen_names: tuple
    free_reps: tuple  # one element per conjugacy class of cyclic subgroups

    def rho_of(self, u: int) -> MonomialMap:
        return self.rho[u]

    def gen(self, name: str) -> int:
        return self.group.gen(name)


def _rho_table(G: FiniteGroup, gens: dict) -> tuple:
    """rho on every element, by BFS over right multiplication by generators."""
    out = {G.identity: MonomialMap()}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for name, m in gens.items():
                b = G.mul(a, G.gen(name))
                if b not in out:
                    out[b] = out[a].compose(m)
                    nxt.append(b)
        frontier = nxt
    return tuple(out[a] for a in range(G.order))


@lru_cache(maxsize=None)
def holonomy(tag: str) -> Holonomy:
    if tag == "z3z3":
        G = make_z3z3()
        gens = {"h": _diag(1, 0, 2, 1), "k": _diag(0, 1, 1, 1)}
        rho = _rho_table(G, gens)
        for a in range(G.order):
            x, y = G.elements[a]
            # (a, b) -> diag(w^a, w^b, w^(2a+b), w^(a+b))
            assert rho[a] == _diag(x, y, 2 * x + y, x + y)
        reps = tuple(G.index(e) for e in [(1, 0), (0, 1), (1, 1), (1, 2)])
        return Holonomy(tag, G, rho, ("h", "k"), reps)
    if tag == "heis3":
        G = make_heis3()
        gens = {"g": MonomialMap(perm=(0, 3, 1, 2)), "h": _diag(1, 0, 2, 1), "k": _diag(0, 1, 1, 1)}
        rho = _rho_table(G, gens)
        reps = tuple(G.word(*w) for w in [("k",), ("g",), ("h",), ("g", "h"), ("g", "h", "h")])
        return Holonomy(tag, G, rho, ("g", "h", "k"), reps)
    raise ValueError(f"unknown holonomy tag {tag!r}")


def rho(tag: str, u) -> MonomialMap:
    """rho(u) for an element index or an element tuple of the holonomy group."""
    H = holonomy(tag)
    if not isinstance(u, int):
        u = H.group.index(tuple(u))
    return H.rho[u]


# --- standard actions --------------------------------------------------------------

@dataclass(frozen=True)
class StandardAction:
    tag: str
    kernel: Kernel
    c1: TorsionPoint
    b: tuple  # (b2, b3, b4)
    a: tuple = ()  # (a1, a2, a3, a4) for heis3

    def tau_gens(self) -> dict[str, PointVector]:
        """Unreduced translation parts of the named generators."""
        out = {"h": (ORIGIN,) + tuple(self.b), "k": (self.c1, ORIGIN, ORIGIN, ORIGIN)}
        if self.tag == "heis3":
            out["g"] = tuple(self.a)
        return out

    def params(self) -> tuple:
        return (self.c1,) + tuple(self.b) + tuple(self.a)


def apply_affine(m: MonomialMap, t: PointVector, p: PointVector) -> PointVector:
    return vec_add(m.apply_vector(p), t)


def tau_all(act: StandardAction) -> list[PointVector]:
    """tau on every group element (unreduced), using tau(x s) = tau(x) + rho(x) tau(s)."""
    H = holonomy(act.tag)
    G = H.group
    tg = act.tau_gens()
    out: dict[int, PointVector] = {G.identity: (ORIGIN,) * 4}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for name in H.gen_names:
                y = G.mul(x, G.gen(name))
                if y not in out:
                    out[y] = vec_add(out[x], H.rho[x].apply_vector(tg[name]))
                    nxt.append(y)
        frontier = nxt
    return [out[a] for a in range(G.order)]


@lru_cache(maxsize=None)
def _words(tag: str) -> dict:
    return holonomy(tag).group.words()


def tau_of(act: StandardAction, u: int) -> PointVector:
    """tau(u) (unreduced) along a shortest word s1...sn: sum_i rho(s1...s_{i-1}) tau(s_i)."""
    H = holonomy(act.tag)
    G = H.group
    tg = act.tau_gens()
    out, prefix = (ORIGIN,) * 4, G.identity
    for name in _words(act.tag)[u]:
        out = vec_add(out, H.rho[prefix].apply_vector(tg[name]))
        prefix = G.mul(prefix, G.gen(name))
    return out


def relation_residues(act: StandardAction) -> list[PointVector]:
    """The vectors v1..v3 (and v4..v6 for Heis(3)) whose vanishing in T is well-definedness."""
    c1 = act.c1
    b2, b3, b4 = act.b
    s = [
        (W_MINUS_ONE * c1, ONE_MINUS_W * b2, ONE_MINUS_W * b3, ONE_MINUS_W * b4),
        (ORIGIN, b2 * 3, ORIGIN, ORIGIN),
        (c1 * 3, ORIGIN, ORIGIN, ORIGIN),
    ]
    if act.tag == "heis3":
        a1, a2, a3, a4 = act.a
        sa = a2 + a3 + a4
        s.append((ONE_MINUS_W * a1 - c1,
                  b4 - W * b2 + ONE_MINUS_W * a2,
                  b2 - W * b3,
                  b3 - W * b4 + ONE_MINUS_W2 * a4))
        s.append((a1 * 3, sa, sa, sa))
        s.append((ORIGIN, ONE_MINUS_W * a2, ONE_MINUS_W * a3, ONE_MINUS_W * a4))
    return s


def is_well_defined(act: StandardAction) -> bool:
    """All relation residues lie in K (residues outside Fix(w)^4 are never in K)."""
    return all(act.kernel.contains(v) for v in relation_residues(act))


def _relator_words(tag: str) -> list[tuple[str, ...]]:
    if tag == "z3z3":
        return [("h",) * 3, ("k",) * 3, ("h", "k", "h", "h", "k", "k")]
    return [("g",) * 3, ("h",) * 3, ("k",) * 3,
            ("g", "k", "g", "g", "k", "k"), ("h", "k", "h", "h", "k", "k"),
            ("g", "h", "g", "g", "h", "h", "k", "k")]


def relator_translations(act: StandardAction) -> list[PointVector]:
    """Translation parts of the affine maps of the defining relators (their linear parts are 1)."""
    H = holonomy(act.tag)
    tg = act.tau_gens()
    out = []
    for word in _relator_words(act.tag):
        lin, tr = MonomialMap(), (ORIGIN,) * 4
        for name in word:
            tr = vec_add(tr, lin.apply_vector(tg[name]))
            lin = lin.compose(H.rho[H.gen(name)])
        assert lin == MonomialMap()
        out.append(tr)
    return out


def is_well_defined_generic(act: StandardAction) -> bool:
    """Well-definedness straight from the group relations (independent of the residue formulas)."""
    return all(act.kernel.contains(v) for v in relator_translations(act))


# --- freeness ---------------------------------------------------------------------

def _cycles(perm: tuple) -> list[list[int]]:
    seen, out = set(), []
    for i in range(len(perm)):
        if i not in seen:
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = perm[j]
            out.append(cyc)
    return out


def affine_has_fixed_point(m: MonomialMap, tr: PointVector, K: Kernel) -> bool:
    """Whether z -> m z + tr has a fixed point on E^4/K (m complex linear monomial).

    For each kappa in K solve (m - 1) z = kappa - tr in E^4 cycle by cycle:
    along a cycle i1 -> i2 = perm(i1) -> ... the system collapses to
    (prod c - 1) z_i1 = sum_m (prod_{l<m} c_il) y_im, which is solvable for
    every right hand side unless prod c = 1, where the sum must vanish.
    """
    assert m.is_linear()
    cycles = _cycles(m.perm)
    for kappa in K.points:
        y = tuple(k - t for k, t in zip(kappa, tr))
        ok = True
        for cyc in cycles:
            if sum(m.units[i] for i in cyc) % 6:
                continue
            acc, e = ORIGIN, 0
            for i in cyc:
                acc = acc + UNITS[e % 6] * y[i]
                e += m.units[i]
            if not acc.is_zero():
                ok = False
                break
        if ok:
            return True
    return False


def is_free_generic(act: StandardAction, elements=None) -> bool:
    """No element in ``elements`` (default: all non-identity ones) has a fixed point on T."""
    H = holonomy(act.tag)
    G = H.group
    if elements is None:
        elements = [u for u in range(G.order) if u != G.identity]
    return not any(affine_has_fixed_point(H.rho[u], tau_of(act, u), act.kernel) for u in elements)


def _first_coords(K: Kernel, i: int) -> set:
    return {k[i] for k in K.points}


def is_free_explicit(act: StandardAction) -> bool:
    """The explicit freeness criteria for standard-form actions.

    For Heis(3) these assume every element of K has t2 + t3 + t4 = 0.
    """
    K = act.kernel
    b2, b3, b4 = act.b
    if act.c1 in _first_coords(K, 0):
        return False
    if act.tag == "z3z3":
        return all(b not in _first_coords(K, j) for j, b in ((1, b2), (2, b3), (3, b4)))
    a1, a2, a3, a4 = act.a
    W2 = W * W
    return (not (W_MINUS_ONE * a1).is_zero()
            and b2 not in _first_coords(K, 1)
            and not (W2 * (a2 + a3) + a4 + W2 * (b2 + b4) + b3).is_zero()
            and not (W * (a2 + a3) + a4 - W * (b2 + b3) - b4).is_zero())


def heis_explicit_applies(K: Kernel) -> bool:
    return all((k[1] + k[2] + k[3]).is_zero() for k in K.points)


def is_free(act: StandardAction) -> bool:
    """Exact freeness test for a well-defined standard-form action."""
    if act.tag == "heis3" and not heis_explicit_applies(act.kernel):
        return is_free_generic(act, holonomy("heis3").free_reps)
    return is_free_explicit(act)


# --- enumeration ------------------------------------------------------------------

def enumerate_free_z32(K: Kernel) -> list[StandardAction]:
    out = []
    for c1 in E3_NONZERO:
        for b2 in E3_NONZERO:
            for b3 in E3_NONZERO:
                for b4 in E3_NONZERO:
                    act = StandardAction("z3z3", K, c1, (b2, b3, b4))
                    if is_well_defined(act) and is_free(act):
                        out.append(act)
    return out


def _heis_candidates(K: Kernel, mode: str) -> Iterator[StandardAction]:
    """Parameter tuples passing the relation checks in pruning order: v1, then v4/v6, then v5 and a1."""
    if mode == "normalized":
        c1s, b2s = (T_POINT,), (THIRD,)
        b34 = tuple(THIRD * UNITS[_wpow(j)] for j in range(3))
        b3s = b4s = b34
        a1s = (THIRD,)
    elif mode == "exhaustive":
        c1s = b2s = b3s = b4s = E3_NONZERO
        a1s = A1_DOMAIN
    else:
        raise ValueError(f"unknown mode {mode!r}")
    # tails (x2, x3, x4) of K elements -> possible first coordinates
    heads: dict = {}
    for k in K.points:
        heads.setdefault(k[1:], set()).add(k[0])
    a1_data = [(a1, ONE_MINUS_W * a1, a1 * 3) for a1 in a1s]
    for c1 in c1s:
        for b2 in b2s:
            for b3 in b3s:
                for b4 in b4s:
                    v1 = (W_MINUS_ONE * c1, ONE_MINUS_W * b2, ONE_MINUS_W * b3, ONE_MINUS_W * b4)
                    if not K.contains(v1):
                        continue
                    y3 = b2 - W * b3
                    base2, base4 = b4 - W * b2, b3 - W * b4
                    for a2 in E3:
                        y2 = base2 + ONE_MINUS_W * a2
                        for a4 in E3:
                            y4 = base4 + ONE_MINUS_W2 * a4
                            xs = heads.get((y2, y3, y4))
                            if not xs:
                                continue
                            for a3 in E3:
                                if not K.contains((ORIGIN, ONE_MINUS_W * a2, ONE_MINUS_W * a3,
                                                   ONE_MINUS_W * a4)):
                                    continue
                                s = a2 + a3 + a4
                                ys = heads.get((s, s, s))
                                if not ys:
                                    continue
                                for a1, la1, ta1 in a1_data:
                                    if la1 - c1 in xs and ta1 in ys:
                                        yield StandardAction("heis3", K, c1, (b2, b3, b4), (a1, a2, a3, a4))


def enumerate_free_heis(K: Kernel, mode: str = "normalized") -> list[StandardAction]:
    out = []
    for act in _heis_candidates(K, mode):
        if is_well_defined(act) and is_free(act):
            out.append(act)
    return out


def enumerate_free(tag: str, K: Kernel, mode: str = "normalized") -> list[StandardAction]:
    if tag == "z3z3":
        return enumerate_free_z32(K)
    return enumerate_free_heis(K, mode)


@lru_cache(maxsize=None)
def free_actions(tag: str, K: Kernel, mode: str = "normalized") -> tuple:
    """Cached ``enumerate_free``."""
    return tuple(enumerate_free(tag, K, mode))


def reduced_tau(act: StandardAction) -> tuple:
    """Generator values of tau reduced mod K: the action as maps on T."""
    tg = act.tau_gens()
    return tuple(reduce_mod(tg[n], act.kernel) for n in holonomy(act.tag).gen_names)


def distinct_maps(actions: list[StandardAction]) -> int:
    """Number of pairwise different actions on T among ``actions``."""
    return len({reduced_tau(a) for a in actions})
