"""Induction, restriction, symmetrization, reduction, completion."""

from fractions import Fraction

import pytest

from chartab.classfun import (
    complete_rational_character,
    induce_by_fusion,
    induced_cyclic,
    induced_trivial,
    norm,
    pull_back,
    reduce_by_irreducibles,
    scalar_product,
    symmetrize2,
)
from chartab.oracle import coset_permutation_character, true_fusion
from chartab.table import positions_of_order

from conftest import SUBGROUP_PAIRS, get_group, get_pair

PAIRS = sorted(SUBGROUP_PAIRS)


def test_scalar_product_orthonormality():
    t = get_group("S5").character_table()
    for a, chi in enumerate(t.irreducibles):
        for b, psi in enumerate(t.irreducibles):
            assert scalar_product(t, chi, psi) == (1 if a == b else 0)


def test_scalar_product_rejects_irrational():
    t = get_group("A5").character_table()
    chi3 = next(c for c in t.irreducibles if c.degree == 3)
    five = positions_of_order(t, 5)[0]
    delta = t.class_function([1 if i == five else 0 for i in range(t.nclasses)])
    with pytest.raises(ValueError):
        scalar_product(t, chi3, delta)


@pytest.mark.parametrize("pairkey", PAIRS)
def test_frobenius_reciprocity(pairkey):
    H, G = get_pair(*pairkey)
    th, tg = H.character_table(), G.character_table()
    fus = true_fusion(H, G)
    for chi in th.irreducibles:
        ind = induce_by_fusion(th, tg, [chi], fus)[0]
        for psi in tg.irreducibles:
            res = pull_back(psi, fus, th)
            assert scalar_product(tg, ind, psi) == scalar_product(th, chi, res)


@pytest.mark.parametrize("pairkey", PAIRS)
def test_induced_trivial_matches_coset_action(pairkey):
    H, G = get_pair(*pairkey)
    th, tg = H.character_table(), G.character_table()
    ind = induced_trivial(th, tg, true_fusion(H, G))
    assert [x.int_value() for x in ind.values] == coset_permutation_character(G, H)


def test_induction_degree():
    H, G = get_pair("A4", "A5")
    th, tg = H.character_table(), G.character_table()
    ind = induced_trivial(th, tg, true_fusion(H, G))
    assert ind.degree == G.order // H.order


def test_symmetrize2_identity():
    for name in ("S4", "A5", "M11"):
        t = get_group(name).character_table()
        for chi in t.irreducibles:
            sym, alt = symmetrize2(t, chi)
            assert sym + alt == chi * chi
            # both squares decompose with nonnegative integer multiplicities
            for part in (sym, alt):
                for iota in t.irreducibles:
                    m = scalar_product(t, part, iota)
                    assert m.denominator == 1 and m >= 0


def test_symmetrize2_natural_character_of_s4():
    t = get_group("S4").character_table()
    chi = next(c for c in t.irreducibles if c.degree == 3 and c[2] == 1)
    sym, alt = symmetrize2(t, chi)
    assert alt.degree == 3
    assert sym.degree == 6
    assert norm(t, alt) == 1


def test_induced_cyclic_are_characters():
    for name in ("S4", "D10", "F21"):
        t = get_group(name).character_table()
        for chi in induced_cyclic(t):
            for iota in t.irreducibles:
                m = scalar_product(t, chi, iota)
                assert m.denominator == 1 and m >= 0


def test_induced_cyclic_modes():
    t = get_group("C6").character_table()
    full = induced_cyclic(t, classes=[x for x in range(6) if t.orders[x] == 6])
    lin = induced_cyclic(
        t, classes=[x for x in range(6) if t.orders[x] == 6], mode="linear-only"
    )
    assert len(lin) <= len(full)
    for chi in lin:
        assert chi in full
    with pytest.raises(ValueError):
        induced_cyclic(t, mode="everything")


def test_reduce_by_irreducibles_finds_new_ones():
    t = get_group("S4").character_table()
    known = list(t.irreducibles[:2])
    mix = [
        t.irreducibles[0] + t.irreducibles[3],
        t.irreducibles[2] + t.irreducibles[1] * 2,
        t.irreducibles[3] + t.irreducibles[4],
    ]
    red = reduce_by_irreducibles(t, known, mix)
    assert t.irreducibles[3] in red.irreducibles
    assert t.irreducibles[2] in red.irreducibles
    for rem in red.remainders:
        for iota in list(known) + red.irreducibles:
            assert scalar_product(t, rem, iota) == 0


def test_reduce_keeps_non_irreducible_remainder():
    t = get_group("A5").character_table()
    deg4 = next(c for c in t.irreducibles if c.degree == 4)
    deg5 = next(c for c in t.irreducibles if c.degree == 5)
    red = reduce_by_irreducibles(t, [], [deg4 + deg5])
    assert red.irreducibles == []
    assert len(red.remainders) == 1
    assert norm(t, red.remainders[0]) == 2


def test_complete_rational_character_fills_gaps():
    t = get_group("M11").character_table()
    chi = next(c for c in t.irreducibles if c.degree == 11)
    full = [v.int_value() for v in chi.values]
    # blank the values on the two composite-order classes (4 and 6)
    holes = [i for i in (positions_of_order(t, 4) + positions_of_order(t, 6))]
    partial = [None if i in holes else full[i] for i in range(t.nclasses)]
    vals, report = complete_rational_character(t, partial)
    assert vals == full
    assert set(report.filled) | {report.final_fill[0] if report.final_fill else None} >= set(
        holes
    ) - {None}


def test_complete_rational_character_single_gap_class_sum():
    t = get_group("S4").character_table()
    chi = next(c for c in t.irreducibles if c.degree == 2)
    full = [v.int_value() for v in chi.values]
    hole = 3  # the 3-cycle class of S4 in oracle ordering
    assert t.orders[hole] == 3
    partial = list(full)
    partial[hole] = None
    vals, report = complete_rational_character(t, partial)
    assert vals == full
    assert report.final_fill is not None or hole in report.filled


def test_completion_report_lines():
    t = get_group("M11").character_table()
    chi = next(c for c in t.irreducibles if c.degree == 11)
    full = [v.int_value() for v in chi.values]
    partial = list(full)
    i6 = positions_of_order(t, 6)[0]
    partial[i6] = None
    _, report = complete_rational_character(t, partial)
    lines = report.lines()
    assert len(lines) == 1
    assert lines[0].startswith(f"#I class {i6 + 1}, |g| = 6")
