"""Shared fixtures: small permutation groups with brute-force tables.

Groups are built once per session and cached; tables come out of the
class-matrix method, so every expected value in the tests is produced by
machinery independent of the modules under test.
"""

import pytest

from chartab.oracle import PermGroup, parse_permutation, subgroup

GENERATORS = {
    "S3": ["(1,2,3)", "(1,2)"],
    "C6": ["(1,2,3,4,5,6)"],
    "D8": ["(1,2,3,4)", "(2,4)"],
    "Q8": ["(1,2,3,4)(5,6,7,8)", "(1,5,3,7)(2,8,4,6)"],
    "D10": ["(1,2,3,4,5)", "(2,5)(3,4)"],
    "V4": ["(1,2)(3,4)", "(1,3)(2,4)"],
    "A4": ["(1,2,3)", "(1,2)(3,4)"],
    "S4": ["(1,2,3,4)", "(1,2)"],
    "F21": ["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"],
    "A5": ["(1,2,3,4,5)", "(3,4,5)"],
    "S5": ["(1,2,3,4,5)", "(1,2)"],
    "A6": ["(1,2,3,4,5)", "(2,3,4,5,6)"],
    "2xA4": ["(1,2,3)", "(1,2)(3,4)", "(5,6)"],
    "M11": ["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"],
}

# genuine subgroup inclusions, generators written in the ambient degree
SUBGROUP_PAIRS = {
    ("A4", "A5"): ["(1,2,3)", "(1,2)(3,4)"],
    ("D10", "A5"): ["(1,2,3,4,5)", "(2,5)(3,4)"],
    ("S3", "A5"): ["(1,2,3)", "(1,2)(4,5)"],
    ("S4", "S5"): ["(1,2,3,4)", "(1,2)"],
    ("A5", "S5"): ["(1,2,3,4,5)", "(3,4,5)"],
    ("S3", "S4"): ["(1,2,3)", "(1,2)"],
    ("V4", "A4"): ["(1,2)(3,4)", "(1,3)(2,4)"],
    ("C6", "2xA4"): ["(1,2,3)(5,6)"],
    ("A4", "2xA4"): ["(1,2,3)", "(1,2)(3,4)"],
}

_groups: dict = {}
_pairs: dict = {}


def _degree(strings):
    pts = [
        int(x)
        for g in strings
        for x in g.replace("(", " ").replace(")", " ").replace(",", " ").split()
    ]
    return max(pts)


def get_group(name: str) -> PermGroup:
    if name not in _groups:
        gens = GENERATORS[name]
        deg = _degree(gens)
        _groups[name] = PermGroup(
            [parse_permutation(g, deg) for g in gens], name, limit=10000
        )
    return _groups[name]


def get_pair(subname: str, ambname: str):
    """(H, G) with H a PermGroup embedded in G."""
    key = (subname, ambname)
    if key not in _pairs:
        G = get_group(ambname)
        gens = [parse_permutation(s, G.degree) for s in SUBGROUP_PAIRS[key]]
        _pairs[key] = (subgroup(G, gens, subname), G)
    return _pairs[key]


@pytest.fixture(scope="session")
def group():
    return get_group


@pytest.fixture(scope="session")
def table():
    return lambda name: get_group(name).character_table()


@pytest.fixture(scope="session")
def pair():
    return get_pair
