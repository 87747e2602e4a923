from __future__ import annotations

from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from rigidfourfolds.actions import rho
from rigidfourfolds.eisenstein import ORIGIN, T_POINT, TorsionPoint, all_points
from rigidfourfolds.lattice import (
    TABLE_ORDER, BlockMap, Kernel, LevelError, MonomialMap, TorusPoint, decode, encode,
    enumerate_kernels, f3_span, format_vector, heis_invariant_kernels, is_admissible,
    kernel_orbits, mu_signature, parse_vector, reduce_mod, resolve_kernel, table_kernel,
)
from rigidfourfolds.normalizers import D1, D2, D3, D4, Z32_AFF_GENERATORS

KERNELS = enumerate_kernels()

monomials = st.builds(
    MonomialMap,
    st.permutations(range(4)).map(tuple),
    st.tuples(*[st.integers(0, 5)] * 4),
    st.tuples(*[st.integers(0, 1)] * 4),
)
linear_monomials = st.builds(MonomialMap, st.permutations(range(4)).map(tuple),
                             st.tuples(*[st.integers(0, 5)] * 4))
pt = st.builds(TorsionPoint.make, st.integers(0, 26), st.integers(0, 26))
vec4 = st.tuples(pt, pt, pt, pt)
e3 = st.sampled_from([p for p in all_points(3)])


def rref_subspaces():
    """All subspaces of F_3^4 from their reduced row echelon bases."""
    out = [frozenset({(0, 0, 0, 0)})]
    for r in range(1, 5):
        for pivots in combinations(range(4), r):
            free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, 4) if j not in pivots]
            for vals in product(range(3), repeat=len(free)):
                rows = [[0] * 4 for _ in range(r)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, j), v in zip(free, vals):
                    rows[i][j] = v
                elems = frozenset(
                    tuple(sum(c * row[k] for c, row in zip(cs, rows)) % 3 for k in range(4))
                    for cs in product(range(3), repeat=r))
                out.append(elems)
    return out


def test_kernel_enumeration_matches_row_echelon_oracle():
    spaces = rref_subspaces()
    assert len(spaces) == len(set(spaces)) == 1 + 40 + 130 + 40 + 1
    admissible = {s for s in spaces if all(sum(1 for a in v if a) != 1 for v in s)}
    assert len(admissible) == 129
    assert {K.elements for K in KERNELS} == admissible
    assert [K.order for K in KERNELS] == sorted(K.order for K in KERNELS)


def test_table_kernels():
    for label in TABLE_ORDER:
        K = table_kernel(label)
        assert is_admissible(K.elements)
        assert K in KERNELS
    assert [table_kernel(l).order for l in TABLE_ORDER] == [1] + [3] * 5 + [9] * 6 + [27]
    assert table_kernel("L1") == table_kernel("K3")


def test_heis_invariant_kernels_oracle():
    g = rho("heis3", (1, 0, 0))
    brute = [K for K in KERNELS if {g.on_f3(v) for v in K.elements} == K.elements]
    assert heis_invariant_kernels() == brute
    assert len(brute) == 9


def test_kernel_parse_and_format():
    K = Kernel.parse("0,t,t,t;0,t,-t,0")
    assert K.order == 9 and K.dim == 2
    assert str(Kernel.parse(str(K).strip("<>").replace("(", "").replace("), ", ";").rstrip(")"))) == str(K)
    assert Kernel.parse("0").order == 1
    assert format_vector(parse_vector("t,-t,0,t")) == "(t,-t,0,t)"
    assert resolve_kernel("K7") == K
    with pytest.raises(ValueError):
        parse_vector("t,t")


def test_encode_decode():
    for v in product(range(3), repeat=4):
        assert encode(decode(v)) == v
    assert encode((TorsionPoint(1, 0),) + (ORIGIN,) * 3) is None


@given(vec4)
def test_reduce_mod_is_a_class_function(p):
    K = table_kernel("K12")
    r = reduce_mod(p, K)
    assert all(reduce_mod(tuple(a + b for a, b in zip(p, k)), K) == r for k in K.points)
    assert reduce_mod(r, K) == r


@given(vec4, vec4)
def test_torus_points(p, q):
    K = table_kernel("K7")
    a, b = TorusPoint.make(p, K), TorusPoint.make(q, K)
    assert (a + b) - b == a
    assert (a - a).is_zero()


@given(monomials, monomials, vec4)
def test_monomial_composition(A, B, p):
    assert A.compose(B).apply_vector(p) == A.apply_vector(B.apply_vector(p))
    assert A.inverse().apply_vector(A.apply_vector(p)) == p
    assert A.compose(A.inverse()) == MonomialMap()


@given(monomials, st.sampled_from(KERNELS))
def test_mu_signature_is_invariant_under_signed_permutations(A, K):
    image = Kernel(tuple(A.on_f3(v) for v in K.elements))
    assert image.elements == frozenset(A.on_f3(v) for v in K.elements)
    assert mu_signature(image) == mu_signature(K)


def test_mu_signature_table():
    assert mu_signature(table_kernel("K12")) == (1, 0, 12, 8, 6)
    assert mu_signature(table_kernel("Kexc")) == (1, 0, 0, 8, 0)
    assert sum(mu_signature(table_kernel("K9"))) == 9


@given(st.sampled_from([D1, D2, D3, D4]), st.sampled_from([D1, D2, D3, D4]), e3, e3, e3, e3)
def test_block_composition(A, B, a, b, c, d):
    # non-integral blocks are only well defined on the tori E^4/Lambda they preserve
    p = (a, b, c, d)
    lhs, rhs = A.compose(B).apply_vector(p), A.apply_vector(B.apply_vector(p))
    for label in ("L1", "L2"):
        K = table_kernel(label)
        assert reduce_mod(lhs, K) == reduce_mod(rhs, K)
    Ai = A.inverse()
    assert A.compose(Ai) == BlockMap.identity()


def test_block_map_lattice_conditions():
    ident = BlockMap.identity()
    for D in (D1, D2, D3, D4):
        assert D.maps_lattice(table_kernel("L1"), table_kernel("L1"))
        assert D.maps_lattice(table_kernel("L2"), table_kernel("L2"))
    assert not ident.compose(D2).maps_lattice(table_kernel("K1"), table_kernel("K1"))
    with pytest.raises(LevelError):
        D2.apply_vector((ORIGIN, TorsionPoint(1, 0), ORIGIN, ORIGIN))


def test_monomial_as_block_agrees():
    A = MonomialMap((0, 2, 3, 1), (1, 2, 3, 4), (0, 1, 1, 1))
    B = A.as_block()
    for p in product([ORIGIN, T_POINT, TorsionPoint(9, 0)], repeat=4):
        assert A.apply_vector(p) == B.apply_vector(p)
    with pytest.raises(ValueError):
        MonomialMap((1, 0, 2, 3)).as_block()


def test_kernel_orbits_partition():
    orbits = kernel_orbits(KERNELS, Z32_AFF_GENERATORS)
    assert sum(len(o) for o in orbits) == 129
    for o in orbits:
        assert len({mu_signature(K) for K in o}) == 1
