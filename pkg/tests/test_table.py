"""Table model: validation, normal subgroup lattice, factors, products,
equivalence permutations."""

import pytest

from chartab.oracle import parse_permutation, PermGroup
from chartab.table import (
    CharacterTable,
    centre_classes,
    direct_product_table,
    factor_table,
    normal_subgroups,
    pcore_classes,
    permutation_is_table_automorphism,
    positions_of_order,
    power_map,
    transforming_permutations,
    validate_table,
)

from conftest import get_group


def sizes_of(t, cls):
    s = t.class_sizes()
    return sum(s[i] for i in cls)


def test_validate_flags_broken_centralizer():
    t = get_group("S4").character_table()
    broken = CharacterTable(
        "S4broken",
        t.order,
        t.centralizers[:1] + (t.order,) + t.centralizers[2:],
        t.orders,
        t.power_maps,
    )
    assert any("class equation" in v for v in validate_table(broken))


def test_validate_flags_power_map_order_break():
    t = get_group("S3").character_table()
    pm = dict(t.power_maps)
    pm[2] = (0, 0, 0)  # sends the 3-element class to the identity
    broken = CharacterTable("S3broken", t.order, t.centralizers, t.orders, pm)
    assert any("breaks element orders" in v for v in validate_table(broken))


def test_normal_subgroup_sizes():
    cases = {
        "S4": [1, 4, 12, 24],
        "A5": [1, 60],
        "A4": [1, 4, 12],
        "Q8": [1, 2, 4, 4, 4, 8],
        "D8": [1, 2, 4, 4, 4, 8],
        "M11": [1, 7920],
    }
    for name, expected in cases.items():
        t = get_group(name).character_table()
        got = sorted(sizes_of(t, cls) for cls in normal_subgroups(t))
        assert got == expected, name


def test_centre_classes():
    assert len(centre_classes(get_group("Q8").character_table())) == 2
    assert len(centre_classes(get_group("D8").character_table())) == 2
    assert len(centre_classes(get_group("A5").character_table())) == 1
    assert len(centre_classes(get_group("2xA4").character_table())) == 2


def test_pcore_classes():
    a4 = get_group("A4").character_table()
    assert sizes_of(a4, pcore_classes(a4, 2)) == 4
    assert sizes_of(a4, pcore_classes(a4, 3)) == 1
    s4 = get_group("S4").character_table()
    assert sizes_of(s4, pcore_classes(s4, 2)) == 4
    q8 = get_group("Q8").character_table()
    assert sizes_of(q8, pcore_classes(q8, 2)) == 8


def test_positions_of_order():
    t = get_group("S4").character_table()
    assert positions_of_order(t, 2) == [1, 2]
    assert positions_of_order(t, 7) == []


def test_factor_s4_by_v4_is_s3():
    s4 = get_group("S4").character_table()
    v4 = pcore_classes(s4, 2)
    ft, fus = factor_table(s4, v4)
    assert ft.order == 6
    assert validate_table(ft) == []
    assert len(fus) == s4.nclasses and set(fus) == set(range(ft.nclasses))
    s3 = get_group("S3").character_table()
    assert transforming_permutations(ft, s3) is not None


def test_factor_q8_by_centre_is_v4():
    q8 = get_group("Q8").character_table()
    z = centre_classes(q8)
    ft, _ = factor_table(q8, z)
    assert ft.order == 4
    assert all(o <= 2 for o in ft.orders)
    assert validate_table(ft) == []


def test_factor_by_trivial_kernel_is_identity_relabeling():
    t = get_group("D10").character_table()
    ft, fus = factor_table(t, [0])
    assert ft.order == t.order
    assert fus == list(range(t.nclasses))
    assert transforming_permutations(ft, t) is not None


def test_direct_product_against_oracle():
    c2 = PermGroup([parse_permutation("(1,2)", 2)], "C2")
    a4 = get_group("A4")
    dp = direct_product_table(a4.character_table(), c2.character_table())
    assert dp.order == 24
    assert validate_table(dp) == []
    oracle = get_group("2xA4").character_table()
    assert transforming_permutations(dp, oracle) is not None


def test_direct_product_class_layout():
    # first factor slower: class (i, j) sits at i * n2 + j
    s3 = get_group("S3").character_table()
    c6 = get_group("C6").character_table()
    dp = direct_product_table(s3, c6)
    n2 = c6.nclasses
    for i in range(s3.nclasses):
        for j in range(n2):
            assert dp.centralizers[i * n2 + j] == s3.centralizers[i] * c6.centralizers[j]


def test_power_map_composite():
    t = get_group("C6").character_table()
    pm6 = power_map(t, 6)
    assert pm6 == [0] * 6
    pm5 = power_map(t, 5)
    # k -> 5k mod 6 is inversion on a cyclic group of order 6
    for i in range(6):
        assert t.orders[pm5[i]] == t.orders[i]
    assert power_map(t, 1) == list(range(6))


def test_power_map_order_law():
    for name in ("S4", "M11", "2xA4"):
        t = get_group(name).character_table()
        for n in (2, 3, 4, 6, 12):
            pm = power_map(t, n)
            for i in range(t.nclasses):
                from math import gcd

                assert t.orders[pm[i]] == t.orders[i] // gcd(t.orders[i], n)


def test_transforming_permutations_roundtrip():
    t = get_group("S4").character_table()
    pi = transforming_permutations(t, t)
    assert pi is not None
    assert permutation_is_table_automorphism(t, pi)

    # scramble the classes and ask for the way back
    perm = [0, 3, 1, 4, 2]
    inv = [perm.index(j) for j in range(5)]
    scr = CharacterTable(
        "S4scrambled",
        t.order,
        [t.centralizers[inv[j]] for j in range(5)],
        [t.orders[inv[j]] for j in range(5)],
        {p: [perm[m[inv[j]]] for j in range(5)] for p, m in t.power_maps.items()},
    )
    scr.irreducibles = tuple(
        scr.class_function([chi[inv[j]] for j in range(5)]) for chi in t.irreducibles
    )
    assert validate_table(scr) == []
    pi2 = transforming_permutations(t, scr)
    assert pi2 is not None
    for i in range(5):
        assert scr.orders[pi2[i]] == t.orders[i]
        assert scr.centralizers[pi2[i]] == t.centralizers[i]


def test_transforming_permutations_rejects_different_groups():
    d8 = get_group("D8").character_table()
    q8 = get_group("Q8").character_table()
    assert transforming_permutations(d8, q8) is None


def test_table_automorphism_of_a5_swaps_five_classes():
    t = get_group("A5").character_table()
    fives = positions_of_order(t, 5)
    pi = list(range(t.nclasses))
    pi[fives[0]], pi[fives[1]] = pi[fives[1]], pi[fives[0]]
    assert permutation_is_table_automorphism(t, pi)
    # swapping a 5-class with the involution class is not an automorphism
    bad = list(range(t.nclasses))
    bad[1], bad[fives[0]] = bad[fives[0]], bad[1]
    assert not permutation_is_table_automorphism(t, bad)
