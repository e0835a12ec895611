"""Power map initialization, refinement, and Galois pair resolution.

A p-th power map in progress is a ParaMap (see fusion.py).  Total maps
live on the table as plain tuples; the solvers here narrow ParaMaps and
the caller freezes them once every entry is a fixed index.
"""

from __future__ import annotations

from math import gcd

from .cyclo import atlas_sqrt
from .fusion import entry_candidates, normalize_entry
from .table import power_map  # noqa: F401  (composite maps, re-exported)


def init_power_map(t, p: int) -> list:
    """Initial candidates for the p-th power map of a table or head.

    Entry i collects the classes j whose element order is
    orders[i]/gcd(orders[i], p) and whose centralizer order is a multiple
    of centralizers[i].
    """
    pmap = []
    for i in range(len(t.orders)):
        want = t.orders[i] // gcd(t.orders[i], p)
        cands = [
            j
            for j in range(len(t.orders))
            if t.orders[j] == want and t.centralizers[j] % t.centralizers[i] == 0
        ]
        if not cands:
            raise ValueError(
                f"class {i + 1} of {t.identifier} has no possible {p}-th power"
            )
        pmap.append(normalize_entry(cands))
    return pmap


def refine_by_characters(t, p: int, pmap) -> "list | None":
    """Optional pruning of a p-th power ParaMap by the irreducibles of t.

    For classes of order coprime to p the value is exact Galois transport:
    chi(g^p) = sigma_p(chi(g)).  Otherwise the candidate must satisfy the
    congruence chi(g)^p = chi(g^p) mod p in the ring of integers.
    Returns the narrowed map, or None if some entry dies.
    """
    out = list(pmap)
    for i in range(len(t.orders)):
        n = t.orders[i]
        k = p % n if n > 1 else 0
        cands = []
        for j in entry_candidates(out[i]):
            ok = True
            for chi in t.irreducibles:
                if gcd(p, n) == 1:
                    if chi[i].galois(k if n > 1 else 1) != chi[j]:
                        ok = False
                        break
                else:
                    diff = chi[i] ** p - chi[j]
                    if not all(
                        c.denominator == 1 and c.numerator % p == 0
                        for c in diff.coeffs.values()
                    ):
                        ok = False
                        break
            if ok:
                cands.append(j)
        if not cands:
            return None
        out[i] = normalize_entry(cands)
    return out


def resolve_quadratic_pair(head, pair, d: int, primes=None, maps=None) -> dict:
    """Fix or swap a Galois-conjugate class pair in the prime power maps.

    The two classes in `pair` carry character values generating the
    quadratic field of sqrt(d).  For p coprime to their element order the
    p-th power map fixes the pair exactly when the automorphism raising
    roots of unity to the p-th power fixes sqrt(d).

    maps: dict prime -> ParaMap to write into (defaults to head.power_maps
    when those are mutable lists).  Returns {p: (image_a, image_b)}.
    """
    a, b = pair
    n = head.orders[a]
    if head.orders[b] != n:
        raise ValueError("pair classes have different element orders")
    if maps is None:
        maps = head.power_maps
    if primes is None:
        primes = sorted(p for p in maps if gcd(p, n) == 1)
    root = atlas_sqrt(d)
    assignments = {}
    for p in primes:
        if gcd(p, n) != 1:
            raise ValueError(f"prime {p} is not coprime to the pair order {n}")
        fixes = root.galois(p % root.n) == root
        assignments[p] = (a, b) if fixes else (b, a)
        if p in maps:
            pm = maps[p]
            for src, img in zip(pair, assignments[p]):
                if img not in entry_candidates(pm[src]):
                    raise ValueError(
                        f"resolved image of class {src + 1} under the "
                        f"{p}-th map contradicts its candidate set"
                    )
                pm[src] = img
    return assignments
