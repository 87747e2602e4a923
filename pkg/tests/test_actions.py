from __future__ import annotations

from itertools import islice, product

import pytest
from hypothesis import given, strategies as st

from rigidfourfolds.actions import (
    A1_DOMAIN, E3, _heis_candidates, E3_NONZERO, ONE_MINUS_W, StandardAction, distinct_maps, enumerate_free,
    free_actions, heis_explicit_applies, holonomy, is_free, is_free_generic, is_free_explicit,
    is_well_defined, is_well_defined_generic, reduced_tau, tau_all, tau_of,
)
from rigidfourfolds.eisenstein import ORIGIN, UNITS, all_points, fix_points
from rigidfourfolds.expected import Z32_REPRESENTATIVES, parse_vector4
from rigidfourfolds.lattice import (
    TABLE_ORDER, enumerate_kernels, heis_invariant_kernels, reduce_mod, table_kernel, vec_add,
)

ALL27 = all_points()
# image of z -> (c - 1) z on E[27] for c = (-w)^e; complete for targets in E[9]
IMAGES = {e: {UNITS[e] * z - z for z in ALL27} for e in range(6)}

p3 = st.sampled_from(E3)
p3nz = st.sampled_from(E3_NONZERO)
a1s = st.sampled_from(A1_DOMAIN)
z32_kernel = st.sampled_from([table_kernel(l) for l in TABLE_ORDER])
HEIS_STABLE = heis_invariant_kernels()
Z32_WELL_DEFINED = [
    act for l in ("K1", "K2", "K6", "K9", "K11", "K12")
    for act in (StandardAction("z3z3", table_kernel(l), c, (x, y, z))
                for c, x, y, z in product(E3, repeat=4))
    if is_well_defined_generic(act)
]
# well-defined Heis(3) parameter tuples on every stable kernel (freeness not yet tested)
HEIS_WELL_DEFINED = [act for K in HEIS_STABLE for act in islice(_heis_candidates(K, "exhaustive"), 0, 4000, 40)]


def brute_fixed_point(m, tr, K) -> bool:
    """z -> m z + tr with m diagonal: a fixed point on E^4/K, by search over E[27]."""
    assert m.perm == (0, 1, 2, 3) and m.is_linear()
    for kappa in K.points:
        if all(k - t in IMAGES[e] for k, t, e in zip(kappa, tr, m.units)):
            return True
    return False


@st.composite
def z32_actions(draw):
    K = draw(z32_kernel)
    return StandardAction("z3z3", K, draw(p3), (draw(p3), draw(p3), draw(p3)))


@st.composite
def heis_actions(draw):
    K = draw(st.sampled_from(HEIS_STABLE))
    return StandardAction("heis3", K, draw(p3nz), (draw(p3nz), draw(p3nz), draw(p3nz)),
                          (draw(a1s), draw(p3), draw(p3), draw(p3)))


def test_a1_domain_oracle():
    fix = fix_points()
    assert set(A1_DOMAIN) == {p for p in ALL27 if p * 3 in fix}
    assert len(A1_DOMAIN) == 27


def test_standard_form_coordinates_live_in_e3():
    # (3c, 0, 0, 0) in K forces 3c = 0 for admissible K, whence c in E[3]
    for K in enumerate_kernels():
        assert [k for k in K.points if all(c.is_zero() for c in k[1:])] == [(ORIGIN,) * 4]
    assert {p for p in ALL27 if (p * 3).is_zero()} == set(E3)


@given(z32_actions())
def test_well_defined_z32_agrees_with_relators(act):
    assert is_well_defined(act) == is_well_defined_generic(act)


@given(heis_actions())
def test_well_defined_heis_agrees_with_relators(act):
    assert is_well_defined(act) == is_well_defined_generic(act)


@given(st.sampled_from(Z32_WELL_DEFINED))
def test_free_z32_matches_brute_force(act):
    H = holonomy("z3z3")
    brute = not any(brute_fixed_point(H.rho[u], tau_of(act, u), act.kernel)
                    for u in range(9) if u != H.group.identity)
    assert is_free(act) == is_free_explicit(act) == is_free_generic(act) == brute


def test_heis_candidates_are_well_defined():
    assert len({a.kernel for a in HEIS_WELL_DEFINED}) == len(HEIS_STABLE)
    assert all(is_well_defined_generic(a) for a in HEIS_WELL_DEFINED)


@given(st.sampled_from(HEIS_WELL_DEFINED))
def test_free_heis_explicit_agrees_with_generic(act):
    assert is_free(act) == is_free_generic(act)
    if heis_explicit_applies(act.kernel):
        assert is_free_explicit(act) == is_free_generic(act)


@given(st.sampled_from(Z32_WELL_DEFINED))
def test_tau_is_a_cocycle(act):
    H = holonomy("z3z3")
    G = H.group
    taus = tau_all(act)
    for u in range(G.order):
        assert reduce_mod(taus[u], act.kernel) == reduce_mod(tau_of(act, u), act.kernel)
        for v in range(G.order):
            lhs = taus[G.mul(u, v)]
            rhs = vec_add(taus[u], H.rho[u].apply_vector(taus[v]))
            assert reduce_mod(lhs, act.kernel) == reduce_mod(rhs, act.kernel)


@pytest.mark.parametrize("label", TABLE_ORDER)
def test_enumerated_z32_actions_are_free(label):
    acts = free_actions("z3z3", table_kernel(label))
    for act in acts[::7]:
        assert is_well_defined_generic(act) and is_free_generic(act)
    assert 0 < distinct_maps(list(acts)) <= len(acts) or not acts


def test_heis_counts_and_distinct_maps():
    L1, L2 = table_kernel("L1"), table_kernel("L2")
    assert len(free_actions("heis3", L1)) == 108
    assert len(free_actions("heis3", L2)) == 324
    # parameter tuples differing by elements of K give the same maps on T
    assert distinct_maps(list(free_actions("heis3", L1))) == 36
    for act in free_actions("heis3", L2)[::17]:
        assert is_free_generic(act)


def test_unknown_mode():
    with pytest.raises(ValueError):
        enumerate_free("heis3", table_kernel("L1"), "fast")


def test_published_k2_representative_has_a_fixed_point():
    # tau(h) = (0, t, t, t), tau(k) = (t, 0, 0, 0) on K2 = <(0, 0, t, t)>
    th, tk = (parse_vector4(s) for s in Z32_REPRESENTATIVES["K2"])
    act = StandardAction("z3z3", table_kernel("K2"), tk[0], th[1:])
    assert is_well_defined(act)
    H = holonomy("z3z3")
    hk = H.group.index((1, 1))
    # rho(hk) = diag(w, w, 1, w^2): coordinate 3 is fixed and tau(hk) matches kappa = (0, 0, t, t) there
    assert brute_fixed_point(H.rho[hk], tau_of(act, hk), act.kernel)
    assert not is_free(act) and not is_free_generic(act)


def test_reduced_tau_order():
    act = free_actions("heis3", table_kernel("L1"))[0]
    g, h, k = reduced_tau(act)
    assert k[1:] == (ORIGIN,) * 3 and h[0] == ORIGIN
