from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from rigidfourfolds.characters import (
    UnsupportedGroupError, exterior_power, hodge_numbers, inner_product, irreducible_characters,
    kernel, screen, trivial_character,
)
from rigidfourfolds.cyclotomic import Cyclotomic
from rigidfourfolds.groups import (
    make_abelian, make_cyclic, make_dihedral, make_heis3, make_z3z3,
)

GROUPS = [make_cyclic(6), make_z3z3(), make_abelian(2, 4), make_dihedral(4), make_dihedral(5), make_heis3()]


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_orthonormality(G):
    irr = irreducible_characters(G)
    assert len(irr) == len(G.conjugacy_classes)
    assert sum(c.degree ** 2 for c in irr) == G.order
    for i, a in enumerate(irr):
        for j, b in enumerate(irr):
            assert inner_product(a, b) == (1 if i == j else 0)


def heis_chars():
    G = make_heis3()
    irr = {c.label: c for c in irreducible_characters(G)}
    return G, irr


def test_exterior_powers_of_chi3():
    G, irr = heis_chars()
    chi3 = irr["chi3"]
    assert exterior_power(chi3, 1) == chi3
    assert exterior_power(chi3, 2) == chi3.conj()
    assert exterior_power(chi3, 3) == trivial_character(G)
    assert all(v == 0 for v in exterior_power(chi3, 4).values)


def test_exterior_square_formula():
    # wedge^2 chi (g) = (chi(g)^2 - chi(g^2)) / 2 on every group in the list
    for G in GROUPS:
        for chi in irreducible_characters(G):
            w2 = exterior_power(chi, 2)
            for a in range(G.order):
                assert w2(a) == (chi(a) * chi(a) - chi(G.power(a, 2))) / 2


def test_kernel_of_character():
    G, irr = heis_chars()
    assert len(kernel(irr["chi3"])) == 1
    assert len(kernel(irr["lin(0,1)"])) == 9


def test_unsupported_family():
    from rigidfourfolds.groups import group_from_mul
    G = group_from_mul("S3", [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)],
                       lambda x, y: ((x[0] + (-y[0] if x[1] else y[0])) % 3, (x[1] + y[1]) % 2),
                       {"r": (1, 0), "s": (0, 1)})
    with pytest.raises(UnsupportedGroupError):
        irreducible_characters(G)


def _eig1(chi, a) -> Fraction:
    """Multiplicity of eigenvalue 1 at a: average of chi over <a>."""
    G = chi.group
    m = G.element_orders[a]
    total = sum((chi(G.power(a, j)) for j in range(m)), Cyclotomic.rational(G.exponent, 0))
    return (total / m).to_rational()


def brute_screen(G) -> bool:
    """All degree-4 sums of irreducibles, conditions checked straight from character values."""
    irr = irreducible_characters(G)
    multisets = (ms for n in range(1, 5) for ms in combinations_with_replacement(range(len(irr)), n))
    for ms in multisets:
        chars = [irr[i] for i in ms]
        if sum(c.degree for c in chars) != 4:
            continue
        rho = chars[0]
        for c in chars[1:]:
            rho = rho + c
        if any(rho(a) == 4 for a in range(G.order) if a != G.identity):
            continue
        if any(_eig1(rho, a) == 0 for a in range(G.order)):
            continue
        real = rho + rho.conj()
        if not all(v.is_rational() for v in real.values):
            continue
        if set(ms) & {irr.index(c.conj()) for c in chars}:
            continue
        return True
    return False


@pytest.mark.parametrize("G", [make_cyclic(3), make_cyclic(6), make_abelian(2, 2), make_z3z3(),
                               make_abelian(3, 6), make_dihedral(4), make_heis3()], ids=lambda G: G.name)
def test_screening_matches_brute_force(G):
    assert screen(G).passed == brute_screen(G)


def test_screening_verdicts():
    assert screen(make_z3z3()).passed
    assert screen(make_heis3()).passed
    d4 = screen(make_dihedral(4))
    assert not d4.passed and d4.closest_failure == ["no_common_constituent"]


def _serre(h):
    for p in range(5):
        for q in range(5):
            assert h[(p, q)] == h[(q, p)] == h[(4 - p, 4 - q)]


@pytest.mark.parametrize("tag,h11,h21,h22", [("heis3", 2, 1, 2), ("z3z3", 4, 3, 6)])
def test_hodge_numbers(tag, h11, h21, h22):
    h = hodge_numbers(tag)
    assert (h[(1, 1)], h[(2, 1)], h[(2, 2)]) == (h11, h21, h22)
    assert h[(1, 0)] == h[(2, 0)] == h[(4, 0)] == 0
    assert h[(3, 0)] == h[(0, 0)] == 1
    _serre(h.h)
    assert h.rows()[4] == [0, 0, h22, 0, 0]
    assert str(h).splitlines()[0].strip() == "1"


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_top_exterior_power_is_linear(G):
    irr = irreducible_characters(G)
    for chi in irr:
        det = exterior_power(chi, chi.degree)
        assert det.degree == 1
        assert det in irr
