from __future__ import annotations

from itertools import product

import pytest

from rigidfourfolds.groups import (
    GroupError, automorphism_lookup, automorphisms, extend_hom, group_from_mul, make_abelian,
    make_catalog, make_cyclic, make_dihedral, make_heis3, make_z3z3,
)


def brute_classes(G):
    seen, out = set(), []
    for a in range(G.order):
        if a in seen:
            continue
        cls = {G.mul(G.mul(x, a), G.inv(x)) for x in range(G.order)}
        seen |= cls
        out.append(cls)
    return out


def gl2_f3_order() -> int:
    return sum(1 for a, b, c, d in product(range(3), repeat=4) if (a * d - b * c) % 3)


def test_heis3_relations():
    G = make_heis3()
    g, h, k = G.gen("g"), G.gen("h"), G.gen("k")
    e = G.identity
    assert G.order == 27
    assert G.power(g, 3) == G.power(h, 3) == G.power(k, 3) == e
    assert G.commutator(g, h) == k
    assert G.commutator(g, k) == G.commutator(h, k) == e
    assert sorted(G.center) == sorted({e, k, G.power(k, 2)})
    assert not G.is_abelian()


@pytest.mark.parametrize("G,classes", [
    (make_heis3(), 11), (make_z3z3(), 9), (make_dihedral(4), 5), (make_cyclic(7), 7),
    (make_abelian(2, 6), 12),
])
def test_conjugacy_classes_match_brute_force(G, classes):
    got = [set(c) for c in G.conjugacy_classes]
    assert len(got) == classes
    assert sorted(map(sorted, got)) == sorted(map(sorted, brute_classes(G)))


def test_aut_z3z3_is_gl2_f3():
    assert gl2_f3_order() == 48
    assert len(automorphisms(make_z3z3())) == 48


def test_automorphism_orders():
    assert len(automorphisms(make_heis3())) == 432
    assert len(automorphisms(make_dihedral(4))) == 8
    assert len(automorphisms(make_cyclic(12))) == 4


def test_automorphisms_are_homomorphisms():
    G = make_heis3()
    autos = automorphisms(G)
    for phi in autos[::37]:
        for a in range(G.order):
            for b in range(0, G.order, 5):
                assert phi(G.mul(a, b)) == G.mul(phi(a), phi(b))
        assert phi.compose(phi.inverse()).perm == tuple(range(G.order))
    assert len(automorphism_lookup(G, autos)) == 432


def test_extend_hom_rejects_non_homomorphisms():
    G = make_z3z3()
    Z9 = make_cyclic(9)
    assert extend_hom(G, Z9, [G.gen("h"), G.gen("k")], [1, 0]) is None
    assert extend_hom(G, Z9, [G.gen("h"), G.gen("k")], [3, 6]) is not None


def test_bad_tables_are_rejected():
    with pytest.raises(GroupError):
        group_from_mul("bad", [0, 1, 2], lambda a, b: max(a, b), {"a": 1})
    with pytest.raises(GroupError):
        group_from_mul("Z4?", [0, 1, 2, 3], lambda a, b: (a + b) % 4, {"a": 2})


def test_catalog_contents():
    names = [G.name for G in make_catalog()]
    assert len(names) == len(set(names))
    for n in ("Z2", "Z12", "Z2xZ2", "Z3xZ3", "Z12xZ12", "D4", "Heis3"):
        assert n in names
    assert "Z3xZ4" not in names  # not of the form d1 | d2


def test_words_reach_every_element():
    G = make_heis3()
    words = G.words()
    assert len(words) == 27
    assert all(G.word(*w) == a for a, w in words.items())
