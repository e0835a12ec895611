"""Power map candidates, character refinement, Galois pair resolution."""

from math import gcd

import pytest

from chartab.fusion import entry_candidates, is_total, transfer_diagram
from chartab.oracle import true_fusion
from chartab.powermap import (
    init_power_map,
    power_map,
    refine_by_characters,
    resolve_quadratic_pair,
)
from chartab.table import positions_of_order

from conftest import get_group, get_pair


def test_init_contains_truth():
    for name in ("S4", "A5", "F21", "M11"):
        t = get_group(name).character_table()
        for p, true_map in t.power_maps.items():
            init = init_power_map(t, p)
            for i in range(t.nclasses):
                assert true_map[i] in entry_candidates(init[i])
            assert init[0] == 0


def test_init_order_two_classes_under_two():
    t = get_group("D8").character_table()
    init = init_power_map(t, 2)
    for i in positions_of_order(t, 2):
        assert init[i] == 0


def test_refine_by_characters_fixes_maps():
    for name in ("S4", "A5", "F21", "D8", "Q8", "M11"):
        t = get_group(name).character_table()
        for p, true_map in t.power_maps.items():
            refined = refine_by_characters(t, p, init_power_map(t, p))
            assert refined is not None
            for i in range(t.nclasses):
                assert true_map[i] in entry_candidates(refined[i])
            # Galois transport pins every class of order coprime to p
            for i in range(t.nclasses):
                if gcd(t.orders[i], p) == 1:
                    assert refined[i] == true_map[i]


def test_subgroup_fusions_fix_a5_maps():
    tg = get_group("A5").character_table()
    maps = {p: init_power_map(tg, p) for p in (2, 3, 5)}
    for subname in ("A4", "D10", "S3"):
        H, G = get_pair(subname, "A5")
        th = H.character_table()
        fus = [int(x) for x in true_fusion(H, G)]
        for p in (2, 3, 5):
            res = transfer_diagram(power_map(th, p), list(fus), maps[p])
            assert res is not None
    for p in (2, 3, 5):
        assert is_total(maps[p])
        assert maps[p] == list(tg.power_maps[p])


def test_resolve_quadratic_pair_against_elements():
    G = get_group("F21")
    t = G.character_table()
    pair = tuple(positions_of_order(t, 7))
    maps = {p: init_power_map(t, p) for p in (2, 3, 5, 11, 13)}
    assignments = resolve_quadratic_pair(t, pair, -7, primes=None, maps=maps)
    for p, (ia, ib) in assignments.items():
        assert ia == G.element_power_class(pair[0], p)
        assert ib == G.element_power_class(pair[1], p)
        assert maps[p][pair[0]] == ia and maps[p][pair[1]] == ib


def test_resolve_quadratic_pair_fix_iff_square():
    # p-th map fixes the order-7 pair exactly when p is a square mod 7
    G = get_group("F21")
    t = G.character_table()
    pair = tuple(positions_of_order(t, 7))
    maps = {p: init_power_map(t, p) for p in (2, 3, 5, 11, 13, 23, 29)}
    assignments = resolve_quadratic_pair(t, pair, -7, maps=maps)
    for p, img in assignments.items():
        squares = {pow(x, 2, 7) for x in range(1, 7)}
        assert (img == pair) == (p % 7 in squares)


def test_resolve_quadratic_pair_rejects_bad_prime():
    t = get_group("F21").character_table()
    pair = tuple(positions_of_order(t, 7))
    with pytest.raises(ValueError):
        resolve_quadratic_pair(t, pair, -7, primes=[7], maps={7: init_power_map(t, 7)})


def test_resolve_congruent_prime_always_fixes():
    t = get_group("F21").character_table()
    pair = tuple(positions_of_order(t, 7))
    maps = {29: init_power_map(t, 29)}
    out = resolve_quadratic_pair(t, pair, -7, primes=[29], maps=maps)
    assert out[29] == pair  # 29 = 1 mod 7
