"""Table-head construction from subgroup data."""

from itertools import product

import pytest
import sympy

from chartab.headbuilder import (
    TableHead,
    divisors_congruent,
    extend_by_centralizer_order,
    extend_by_perm_char_value,
    extend_by_root_classes,
    finalize_head,
    sylow_normalizer_orders,
)
from chartab.oracle import brute_force_table, true_fusion
from chartab.table import CharacterTable, positions_of_order, validate_table

from conftest import get_group

MONSTER_ORDER = (2**46 * 3**20 * 5**9 * 7**6 * 11**2 * 13**3
                 * 17 * 19 * 23 * 29 * 31 * 41 * 47 * 59 * 71)


def class_shape(t):
    return sorted(zip(t.orders, t.centralizers))


# ----------------------------------------------------------- root classes


def test_head_of_a5_from_local_subgroups():
    head = TableHead("A5head", 60)
    v4 = get_group("V4").character_table()
    s3 = get_group("S3").character_table()
    d10 = get_group("D10").character_table()

    assert extend_by_root_classes(head, v4, 1) == 1
    assert extend_by_root_classes(head, s3, positions_of_order(s3, 3)[0]) == 1
    five1, five2 = positions_of_order(d10, 5)
    assert extend_by_root_classes(head, d10, five1) == 1
    assert extend_by_root_classes(head, d10, five2) == 1

    assert head.audit_log == [
        "#I after V4: found 1 classes, now have 2",
        "#I after S3: found 1 classes, now have 3",
        "#I after D10: found 1 classes, now have 4",
        "#I after D10: found 1 classes, now have 5",
    ]
    final = finalize_head(head)
    assert validate_table(final) == []
    assert class_shape(final) == class_shape(
        get_group("A5").character_table())


def test_head_of_2xa4_with_composite_roots():
    G = get_group("2xA4")
    t = G.character_table()
    head = TableHead("2xA4head", 24)

    # central involution: [C_G(z) : G] = 1, so the whole table serves
    z = next(i for i in range(t.nclasses)
             if t.orders[i] == 2 and t.centralizers[i] == 24)
    added = extend_by_root_classes(head, t, z)
    assert added == 3  # z itself and the two order-6 root classes
    assert sorted(head.orders) == [1, 2, 6, 6]

    c6 = get_group("C6").character_table()
    for pos in positions_of_order(c6, 3):
        extend_by_root_classes(head, c6, pos)
    e8 = brute_force_table(["(1,2)(3,4)", "(1,3)(2,4)", "(5,6)"], "E8")
    noncentral = [i for i in range(t.nclasses)
                  if t.orders[i] == 2 and i != z]
    assert len(noncentral) == 2
    for pos in positions_of_order(e8, 2)[:2]:
        extend_by_root_classes(head, e8, pos)

    assert head.audit_log == [
        "#I after 2xA4: found 3 classes, now have 4",
        "#I after C6: found 1 classes, now have 5",
        "#I after C6: found 1 classes, now have 6",
        "#I after E8: found 1 classes, now have 7",
        "#I after E8: found 1 classes, now have 8",
    ]
    final = finalize_head(head)
    assert class_shape(final) == class_shape(t)


def test_root_classes_update_stored_fusion():
    head = TableHead("A5head", 60)
    v4 = get_group("V4").character_table()
    s3 = get_group("S3").character_table()
    d10 = get_group("D10").character_table()
    extend_by_root_classes(head, v4, 1)
    rec = head.fusions[0]
    assert rec.sub is v4
    assert rec.map == [0, 1, None, None]
    extend_by_root_classes(head, s3, positions_of_order(s3, 3)[0])
    for pos in positions_of_order(d10, 5):
        extend_by_root_classes(head, d10, pos)
    final = finalize_head(head)
    assert v4.fusion_into(final) == [0, 1, None, None]
    three = positions_of_order(s3, 3)[0]
    smap = s3.fusion_into(final)
    assert smap[0] == 0 and smap[three] == 2


def test_root_classes_reject_composite_order_class():
    head = TableHead("X", 12)
    c6 = get_group("C6").character_table()
    six = positions_of_order(c6, 6)[0]
    with pytest.raises(ValueError, match="composite order"):
        extend_by_root_classes(head, c6, six)


def test_root_classes_need_power_maps():
    sub = CharacterTable("C4bare", 4, [4, 4, 4, 4], [1, 2, 4, 4])
    head = TableHead("X", 8)
    with pytest.raises(ValueError, match="not stored"):
        extend_by_root_classes(head, sub, 1)


# ------------------------------------------------- centralizer-order steps


def test_perm_char_value_computes_centralizers():
    # 1_{A4}^{A5} restricted to A4 is [5, 1, 2, 2]
    a4 = get_group("A4").character_table()
    head = TableHead("A5head", 60)
    extend_by_perm_char_value(head, a4, [5, 1, 2, 2], [1])
    extend_by_perm_char_value(head, a4, [5, 1, 2, 2], [2, 3])
    assert head.centralizers == [60, 4, 3]
    assert head.orders == [1, 2, 3]
    assert head.audit_log == [
        "#I after order 2 element from A4: have 2 classes",
        "#I after order 3 element from A4: have 3 classes",
    ]
    assert head.fusions[0].map == [0, 1, 2, 2]


def test_perm_char_value_regular_character_identity():
    # regular character (trivial point stabilizer): value |G| at 1
    one = CharacterTable("1", 1, [1], [1])
    head = TableHead("X", 60)
    extend_by_perm_char_value(head, one, [60], [0])
    assert head.centralizers[-1] == 60


def test_nonconstant_value_rejected():
    a4 = get_group("A4").character_table()
    head = TableHead("X", 60)
    with pytest.raises(ValueError, match="classes cannot fuse"):
        extend_by_perm_char_value(head, a4, [5, 1, 2, 1], [2, 3])


def test_mixed_orders_rejected():
    a4 = get_group("A4").character_table()
    head = TableHead("X", 60)
    with pytest.raises(ValueError, match="classes cannot fuse"):
        extend_by_centralizer_order(head, a4, 4, [1, 2])


def test_fractional_centralizer_rejected():
    a4 = get_group("A4").character_table()
    head = TableHead("X", 60)
    with pytest.raises(ValueError, match="fractional"):
        extend_by_perm_char_value(head, a4, [5, 1, 1, 1], [2, 3])


def test_centralizer_divisibility_enforced():
    a4 = get_group("A4").character_table()
    head = TableHead("X", 60)
    with pytest.raises(ValueError, match="does not divide"):
        extend_by_centralizer_order(head, a4, 5, [2])


def test_bare_order_source():
    head = TableHead("X", 60)
    extend_by_centralizer_order(head, 5, 5)
    assert head.orders == [1, 5] and head.centralizers == [60, 5]
    assert head.audit_log == ["#I after order 5 element: have 2 classes"]
    assert head.fusions == []


# --------------------------------------------------------------- sylow sieve


def test_sylow_sieve_29():
    pool = [3 * 7**i * 41**j * 59**k * 71**l
            for i, j, k, l in product(range(7), range(2), range(2), range(2))]
    assert sylow_normalizer_orders(MONSTER_ORDER, 29, 28, pool) == [87, 5133]
    assert divisors_congruent(5133, 59) == [1]


def test_sylow_sieve_41():
    pool = [4 * d for d in sympy.divisors(2 * 5 * 7**6 * 59 * 71)]
    assert sylow_normalizer_orders(MONSTER_ORDER, 41, 1, pool) == [1640, 163016]
    assert divisors_congruent(163016, 71) == [1]


def test_sylow_sieve_59_and_71():
    assert sylow_normalizer_orders(
        MONSTER_ORDER, 59, 1, sympy.divisors(58 * 7**6 * 71)) == [1711]
    assert sylow_normalizer_orders(
        MONSTER_ORDER, 71, 1, sympy.divisors(70 * 7**5)) == [2485]


def test_sylow_sieve_small_group():
    # A5: N(P5) = D10; the sieve also keeps the normal-Sylow possibility
    assert sylow_normalizer_orders(60, 5, 1, sympy.divisors(12)) == [10, 60]


# ----------------------------------------------------------------- finalize


def test_trivial_head_finalizes():
    t = finalize_head(TableHead("triv", 1))
    assert t.nclasses == 1 and t.order == 1


def test_incomplete_head_fails():
    head = TableHead("A5head", 60)
    v4 = get_group("V4").character_table()
    extend_by_root_classes(head, v4, 1)
    with pytest.raises(ValueError, match="class equation fails"):
        finalize_head(head)


def test_copy_is_independent():
    head = TableHead("A5head", 60)
    v4 = get_group("V4").character_table()
    extend_by_root_classes(head, v4, 1)
    twin = head.copy()
    s3 = get_group("S3").character_table()
    extend_by_root_classes(head, s3, positions_of_order(s3, 3)[0])
    assert twin.nclasses == 2
    assert len(twin.fusions) == 1
    twin.fusions[0].map[2] = 99
    assert head.fusions[0].map[2] is None
