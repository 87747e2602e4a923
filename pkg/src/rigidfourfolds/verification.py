"""The acceptance checks, grouped by criterion.

Each criterion function returns a list of Check records comparing the
golden value from ``expected`` with what the pipeline computes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable

from . import expected as X
from .actions import free_actions, holonomy
from .characters import (
    exterior_power, hodge_numbers, irreducible_characters, screen, trivial_character,
)
from .eisenstein import (
    UNITS, EisensteinInt, THIRD, T_POINT, TorsionPoint, all_points, kernel_of, scalar_mul, span,
)
from .groups import automorphisms, character_stabilizer, make_catalog
from .lattice import (
    TABLE_ORDER, enumerate_kernels, heis_invariant_kernels, kernel_orbits, mu_signature,
    reduce_mod, table_kernel, vec_sub,
)
from .normalizers import (
    act_on_cocycle, class_index, classify, coboundary_equivalent, coboundary_grid,
    coboundary_value, d_group_heis, d_group_linear, n_aff0_z32, n_aut0_z32, n_c_heis,
    n_r_heis, shift_cocycle, stabilizer, special_classes, transporter_table,
)


@dataclass
class Check:
    id: str
    expected: Any
    actual: Any
    passed: bool

    def as_dict(self) -> dict:
        return {"id": self.id, "expected": self.expected, "actual": self.actual, "pass": self.passed}


def check(id: str, expected, actual) -> Check:
    return Check(id, expected, actual, expected == actual)


# --- 1: screening ------------------------------------------------------------------

def screening_results() -> dict[str, bool]:
    return {G.name: screen(G).passed for G in make_catalog()}


def criterion_1() -> list[Check]:
    res = screening_results()
    out = [check("c1.screen.passing", sorted(X.SCREEN_PASSING), sorted(n for n, ok in res.items() if ok))]
    for name in ("D4", "Z2xZ2"):
        out.append(check(f"c1.screen.{name}", False, res[name]))
    return out


# --- 2: kernels ----------------------------------------------------------------------

def table_orbits():
    return kernel_orbits(enumerate_kernels(), n_aut0_z32().generators)


def heis_exhaustive_counts() -> dict[str, int]:
    out = {}
    for K in heis_invariant_kernels():
        name = next((n for n in X.HEIS_FREE_LATTICES if table_kernel(n) == K), str(K))
        out[name] = len(free_actions("heis3", K, "exhaustive"))
    return out


def criterion_2() -> list[Check]:
    kernels = enumerate_kernels()
    orbits = table_orbits()
    where = {}
    for i, orb in enumerate(orbits):
        for K in orb:
            where[K.key] = i
    table_hits = sorted(where[table_kernel(l).key] for l in TABLE_ORDER)
    heis = heis_exhaustive_counts()
    return [
        check("c2.kernels.admissible", X.KERNEL_COUNTS["admissible"], len(kernels)),
        check("c2.kernels.orbits", X.KERNEL_COUNTS["orbits"], len(orbits)),
        check("c2.kernels.table_orbits", list(range(len(orbits))), table_hits),
        check("c2.kernels.heis_stable", X.KERNEL_COUNTS["heis_stable"], len(heis_invariant_kernels())),
        check("c2.kernels.heis_free", sorted(X.HEIS_FREE_LATTICES), sorted(n for n, c in heis.items() if c)),
    ]


# --- 3: free actions -----------------------------------------------------------------

def criterion_3() -> list[Check]:
    out = []
    for label in TABLE_ORDER:
        n = len(free_actions("z3z3", table_kernel(label)))
        out.append(check(f"c3.z3z3_table.{label}.free_actions", X.Z32_TABLE[label][0], n))
    for label, n in X.HEIS_FREE_NORMALIZED.items():
        got = len(free_actions("heis3", table_kernel(label), "normalized"))
        out.append(check(f"c3.heis3.{label}.normalized", n, got))
    others = {k: v for k, v in heis_exhaustive_counts().items() if k not in X.HEIS_FREE_LATTICES}
    out.append(check("c3.heis3.other_stable_kernels", [0] * 7, sorted(others.values())))
    return out


# --- 4: special classes --------------------------------------------------------------

def criterion_4() -> list[Check]:
    out = []
    for label in TABLE_ORDER:
        n = len(special_classes(table_kernel(label), "z3z3"))
        out.append(check(f"c4.z3z3_table.{label}.special_classes", X.Z32_TABLE[label][1], n))
    for label, n in X.HEIS_SPECIAL_CLASSES.items():
        out.append(check(f"c4.heis3.{label}.special_classes", n,
                         len(special_classes(table_kernel(label), "heis3"))))
    return out


# --- 5 and 6: classification -----------------------------------------------------------

def _per_kernel(outcome) -> dict[str, int]:
    counts: dict = {}
    for grp in outcome.merged:
        for label in {l for l, _ in grp}:
            counts[label] = counts.get(label, 0) + 1
    return counts


def criterion_5() -> list[Check]:
    out = []
    z = classify("z3z3", "bihol")
    out.append(check("c5.z3z3.bihol.classes", X.CLASS_COUNTS[("z3z3", "bihol")], z.class_count))
    out.append(check("c5.z3z3.bihol.one_per_kernel", [1] * 12,
                     [_per_kernel(z).get(l, 0) for l in TABLE_ORDER if l != "Kexc"]))
    for label in TABLE_ORDER:
        if label != "Kexc":
            out.append(check(f"c5.z3z3.representative.{label}", "in a special class",
                             "in a special class" if z.representatives[label] else z.mismatches[label]))
    h = classify("heis3", "bihol")
    out.append(check("c5.heis3.bihol.classes", X.CLASS_COUNTS[("heis3", "bihol")], h.class_count))
    out.append(check("c5.heis3.bihol.per_lattice", {"L1": 2, "L2": 2}, _per_kernel(h)))
    for label in X.HEIS_FREE_LATTICES:
        cls = [h.representatives.get(f"{n}@{label}") for n in X.HEIS_REPRESENTATIVES]
        roots = []
        for c in cls:
            roots.append(None if c is None else next(i for i, g in enumerate(h.merged) if c in g))
        out.append(check(f"c5.heis3.representatives.{label}", "tau1, tau2 in distinct classes",
                         "tau1, tau2 in distinct classes" if None not in roots and len(set(roots)) == 2
                         else f"classes {roots}"))
    return out


def transporter_sizes(group=None) -> dict:
    group = group or n_aff0_z32()
    labels = [l for l in TABLE_ORDER if l != "Kexc"]
    table = transporter_table([table_kernel(l) for l in labels], group)
    return {(a, b): (table[(a, b)].plus, table[(a, b)].minus)
            for i, a in enumerate(labels) for b in labels[i + 1:] if table[(a, b)].size}


def criterion_6() -> list[Check]:
    z = classify("z3z3", "diffeo")
    merges = [tuple(g) for g in z.merged_kernels() if len(g) > 1]
    sizes = transporter_sizes()
    h = classify("heis3", "diffeo")
    D = d_group_heis()
    fixes = all(A.maps_lattice(table_kernel(l), table_kernel(l)) for A in D.maps for l in ("L1", "L2"))
    return [
        check("c6.z3z3.diffeo.classes", X.CLASS_COUNTS[("z3z3", "diffeo")], z.class_count),
        check("c6.z3z3.diffeo.merges", list(X.DIFFEO_MERGES), merges),
        check("c6.transporters", {f"{a}-{b}": list(v) for (a, b), v in X.TRANSPORTERS.items()},
              {f"{a}-{b}": list(v) for (a, b), v in sizes.items()}),
        check("c6.heis3.diffeo.classes", X.CLASS_COUNTS[("heis3", "diffeo")], h.class_count),
        check("c6.heis3.diffeo.per_lattice", {"L1": 2, "L2": 2}, _per_kernel(h)),
        check("c6.heis3.transporter_L1_L2", 0, h.transporters[("L1", "L2")].size),
        check("c6.heis3.d_group_fixes_lattices", True, fixes),
    ]


# --- 7: group orders -----------------------------------------------------------------

def stabilizer_orders() -> dict[str, int]:
    G = holonomy("heis3").group
    irr = irreducible_characters(G)
    chi1 = next(c for c in irr if c.label == "lin(0,1)")
    chi3 = next(c for c in irr if c.label == "chi3")
    autos = automorphisms(G)
    return {
        "aut_heis3": len(autos),
        "stab_chi1": len(character_stabilizer(G, autos, [chi1])),
        "stab_chi1_chi3": len(character_stabilizer(G, autos, [chi1, chi3])),
        "stab_chi1_real": len(character_stabilizer(G, autos, [chi1 + chi1.conj()])),
    }


def criterion_7() -> list[Check]:
    out = [check(f"c7.orders.{k}", X.GROUP_ORDERS[k], v) for k, v in stabilizer_orders().items()]
    # each builder raises ConstructionMismatch unless both constructions agree
    builders: dict[str, Callable] = {
        "n_aut0_z32": n_aut0_z32, "n_aff0_z32": n_aff0_z32, "d_group_heis": d_group_heis,
        "n_r_heis": n_r_heis, "n_c_heis": n_c_heis,
    }
    for k, f in builders.items():
        out.append(check(f"c7.orders.{k}", X.GROUP_ORDERS[k], f().order))
    out.append(check("c7.orders.d_group_linear", X.GROUP_ORDERS["d_group_linear"], len(d_group_linear())))
    return out


# --- 8: Hodge numbers ----------------------------------------------------------------

def criterion_8() -> list[Check]:
    out = []
    for tag, want in X.HODGE.items():
        d = hodge_numbers(tag)
        got = {f"h{p}{q}": d[(p, q)] for p, q in ((1, 1), (2, 1), (2, 2), (1, 0), (2, 0), (3, 0), (4, 0))}
        out.append(check(f"c8.hodge.{tag}", dict(want), got))
    return out


# --- 9: property suites --------------------------------------------------------------

def _exterior_checks() -> list[Check]:
    G = holonomy("heis3").group
    chi3 = next(c for c in irreducible_characters(G) if c.label == "chi3")
    return [
        check("c9.exterior.wedge2_chi3", True, exterior_power(chi3, 2) == chi3.conj()),
        check("c9.exterior.wedge3_chi3", True, exterior_power(chi3, 3) == trivial_character(G)),
    ]


def _bilinearity() -> bool:
    pts = all_points(9)
    lams = list(UNITS) + [EisensteinInt(1, -1), EisensteinInt(2, 1), EisensteinInt(3, 0)]
    for lam in lams:
        for mu in lams:
            for p in pts:
                if scalar_mul(lam * mu, p) != scalar_mul(lam, scalar_mul(mu, p)):
                    return False
                if scalar_mul(lam + mu, p) != scalar_mul(lam, p) + scalar_mul(mu, p):
                    return False
        for p in pts:
            for q in pts:
                if scalar_mul(lam, p + q) != scalar_mul(lam, p) + scalar_mul(lam, q):
                    return False
    return True


def _round_trips(rng: random.Random, per_class: int = 3) -> bool:
    """Shift a class cocycle by a random coboundary and recover the shift."""
    H = holonomy("z3z3")
    for label in ("K1", "K7", "K12"):
        K = table_kernel(label)
        for c in class_index("z3z3", K).classes:
            for _ in range(per_class):
                d0 = rng.choice(coboundary_grid(K))
                tau2 = shift_cocycle("z3z3", K, c.cocycle, d0)
                d = coboundary_equivalent(c.cocycle, tau2, "z3z3", K)
                if d is None:
                    return False
                # (rho - 1) d must equal tau - tau2 on each generator
                for n, v, w in zip(H.gen_names, c.cocycle, tau2):
                    if reduce_mod(coboundary_value("z3z3", d, H.gen(n)), K) != reduce_mod(vec_sub(v, w), K):
                        return False
    return True


def _functoriality(rng: random.Random, samples: int = 30) -> bool:
    G = n_aut0_z32()
    K = table_kernel("K6")
    stab = stabilizer(G, K)
    classes = class_index("z3z3", K).classes
    for _ in range(samples):
        A, B = rng.choice(stab), rng.choice(stab)
        tau = rng.choice(classes).cocycle
        lhs = act_on_cocycle(A.compose(B), tau, "z3z3", K, G.phi(A.compose(B)))
        rhs = act_on_cocycle(A, act_on_cocycle(B, tau, "z3z3", K, G.phi(B)), "z3z3", K, G.phi(A))
        if lhs != rhs:
            return False
    return True


def _mu_invariance() -> bool:
    gens = n_aff0_z32().generators
    for K in enumerate_kernels():
        for A in gens:
            img = frozenset(A.on_f3(v) for v in K.elements)
            mu = [0] * 5
            for v in img:
                mu[sum(1 for a in v if a)] += 1
            if tuple(mu) != mu_signature(K):
                return False
    return True


def criterion_9(seed: int = 20240601) -> list[Check]:
    rng = random.Random(seed)
    ker = kernel_of(EisensteinInt(-3, 3))
    t_third = TorsionPoint(3, 6)
    return _exterior_checks() + [
        check("c9.bilinearity.E9", True, _bilinearity()),
        check("c9.ker3w.invariants", [3, 9], list(ker.invariants)),
        check("c9.ker3w.span", True, scalar_mul(EisensteinInt(3, 0), t_third) == T_POINT
              and span([THIRD, t_third]) == ker.elements),
        check("c9.coboundary_round_trip", True, _round_trips(rng)),
        check("c9.action_functoriality", True, _functoriality(rng)),
        check("c9.mu_signature_invariance", True, _mu_invariance()),
    ]


CRITERIA: dict[int, Callable[[], list[Check]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_all() -> dict[int, list[Check]]:
    return {n: f() for n, f in CRITERIA.items()}
