"""Class function algebra: inner products, induction, symmetrization,
reduction against known irreducibles, and congruence-based completion of
rational characters."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import sympy

from .cyclo import Cyclotomic, cyc, root_of_unity
from .table import ClassFunction, power_map


def scalar_product(t, chi, psi) -> Fraction:
    """<chi, psi> = (1/|G|) sum over g of chi(g) conj(psi(g)), exactly."""
    total = cyc(0)
    for i in range(t.nclasses):
        total = total + (chi[i] * psi[i].conjugate()) * Fraction(1, t.centralizers[i])
    if not total.is_rational():
        raise ValueError("scalar product is not rational")
    return total.rational_value()


def norm(t, chi) -> Fraction:
    return scalar_product(t, chi, chi)


def tensor(chi: ClassFunction, psi: ClassFunction) -> ClassFunction:
    return chi * psi


def pull_back(amb_fun, fmap, sub_table=None) -> "ClassFunction | list":
    """Compose a function on the ambient table with a total class map.

    Covers both restriction along a subgroup fusion and inflation along a
    factor fusion.  With sub_table=None a plain value list is returned.
    """
    values = [amb_fun[j] for j in fmap]
    if sub_table is None:
        return values
    return ClassFunction(sub_table, values)


def induce_by_fusion(sub, amb, chars, fmap) -> list[ClassFunction]:
    """Induce characters of sub to amb along a total fusion map."""
    out = []
    for chi in chars:
        acc = [cyc(0)] * amb.nclasses
        for i in range(sub.nclasses):
            acc[fmap[i]] = acc[fmap[i]] + chi[i] * Fraction(1, sub.centralizers[i])
        vals = [amb.centralizers[j] * acc[j] for j in range(amb.nclasses)]
        out.append(ClassFunction(amb, vals))
    return out


def induced_trivial(sub, amb, fmap) -> ClassFunction:
    return induce_by_fusion(sub, amb, [sub.trivial_character()], fmap)[0]


def symmetrize2(t, chi) -> tuple[ClassFunction, ClassFunction]:
    """Symmetric and alternating square, from values and the 2nd power map."""
    pm2 = power_map(t, 2)
    sym = []
    alt = []
    for i in range(t.nclasses):
        sq = chi[i] * chi[i]
        tw = chi[pm2[i]]
        sym.append((sq + tw) * Fraction(1, 2))
        alt.append((sq - tw) * Fraction(1, 2))
    return ClassFunction(t, sym), ClassFunction(t, alt)


def induced_cyclic(t, classes=None, mode: str = "all") -> list[ClassFunction]:
    """Characters induced from the cyclic subgroups generated by class reps.

    For a class c of element order d, the linear character with exponent e
    of <g_c> induces to x -> (|C(x)|/d) * sum of zeta_d^{ek} over the k with
    g_c^k in the class of x.  mode "all" takes every exponent 0 <= e < d
    (e = 0 gives the permutation character of the cyclic subgroup), mode
    "linear-only" just the faithful ones (gcd(e, d) = 1).
    """
    if classes is None:
        classes = range(1, t.nclasses)
    if mode not in ("all", "linear-only"):
        raise ValueError(f"unknown mode {mode!r}")
    seen = set()
    out = []
    for c in classes:
        d = t.orders[c]
        hits: dict[int, list[int]] = {}
        for k in range(d):
            hits.setdefault(_power_class(t, c, k), []).append(k)
        for e in range(0, d):
            if mode == "linear-only" and (e == 0 or gcd(e, d) != 1):
                continue
            vals = []
            for x in range(t.nclasses):
                ks = hits.get(x)
                if not ks:
                    vals.append(cyc(0))
                    continue
                s = cyc(0)
                for k in ks:
                    s = s + root_of_unity(d, (e * k) % d)
                vals.append(s * Fraction(t.centralizers[x], d))
            chi = ClassFunction(t, vals)
            if chi.values not in seen:
                seen.add(chi.values)
                out.append(chi)
    return out


def _power_class(t, i, k):
    d = t.orders[i]
    k %= d
    if k == 0:
        return 0
    j = i
    for p, e in sympy.factorint(k).items():
        pm = t.power_maps[p]
        for _ in range(e):
            j = pm[j]
    return j


class Reduction:
    def __init__(self, irreducibles, remainders):
        self.irreducibles = irreducibles
        self.remainders = remainders


def reduce_by_irreducibles(t, known, chars) -> Reduction:
    """Strip known-irreducible constituents; norm-1 leftovers of positive
    degree are themselves irreducible and get promoted.

    Passes repeat until no new irreducible turns up, so that remainders end
    up orthogonal to everything found along the way."""
    known = list(known)
    found: list[ClassFunction] = []
    remainders = list(chars)
    while True:
        new_found = 0
        nxt = []
        for chi in remainders:
            red = chi
            for iota in known + found:
                m = scalar_product(t, red, iota)
                if m:
                    red = red - iota * m
            if red.is_zero():
                continue
            if (
                norm(t, red) == 1
                and red.degree.is_integer()
                and red.degree.int_value() > 0
            ):
                if red not in found:
                    found.append(red)
                    new_found += 1
                continue
            nxt.append(red)
        remainders = nxt
        if not new_found:
            break
    # dedupe remainders, preserving order
    seen = set()
    uniq = []
    for chi in remainders:
        if chi.values not in seen:
            seen.add(chi.values)
            uniq.append(chi)
    return Reduction(found, uniq)


class CompletionReport:
    """What the congruence completion did, class by class."""

    def __init__(self):
        self.congruences = []  # (class, order, centralizer, residue, modulus)
        self.filled = {}  # class -> value
        self.ambiguous = {}  # class -> candidate list
        self.final_fill = None  # (class, value, weighted_sum) via orthogonality

    def lines(self):
        out = []
        for i, o, c, res, mod in self.congruences:
            out.append(f"#I class {i + 1}, |g| = {o}, |C(g)| = {c}: value {res} modulo {mod}")
        return out


def complete_rational_character(t, values, report=None):
    """Fill missing integer values from power map congruences and bounds.

    values: list of int/None per class.  Uses chi(g) = chi(g^p) mod p for
    each prime p dividing |g|, combining by CRT; a candidate survives when
    its square stays below the centralizer order.  A final single gap is
    closed through orthogonality with the trivial character.
    """
    report = report if report is not None else CompletionReport()
    vals = list(values)
    done = set()
    progress = True
    while progress:
        progress = False
        for i in range(t.nclasses):
            if vals[i] is not None or i in done:
                continue
            d = t.orders[i]
            primes = sorted(sympy.factorint(d))
            images = {}
            ok = True
            for p in primes:
                j = t.power_maps[p][i]
                if not isinstance(j, int) or vals[j] is None:
                    ok = False
                    break
                images[p] = vals[j] % p
            if not ok or not primes:
                continue
            done.add(i)
            modulus = 1
            for p in primes:
                modulus *= p
            res = int(sympy.ntheory.modular.crt(primes, [images[p] for p in primes])[0])
            res %= modulus
            c = t.centralizers[i]
            report.congruences.append((i, d, c, res, modulus))
            # candidates res + k*modulus with square below the centralizer
            # order; only scan the window when nothing two steps out survives
            if (res + 2 * modulus) ** 2 >= c and (res - 2 * modulus) ** 2 >= c:
                cands = [
                    a for a in (res - modulus, res, res + modulus) if a * a < c
                ]
                if len(cands) == 1:
                    vals[i] = cands[0]
                    report.filled[i] = cands[0]
                    progress = True
                else:
                    report.ambiguous[i] = cands
            else:
                report.ambiguous[i] = None  # window too wide to decide
    missing = [i for i, v in enumerate(vals) if v is None]
    if len(missing) == 1:
        i = missing[0]
        sizes = t.class_sizes()
        s = sum(sizes[j] * vals[j] for j in range(t.nclasses) if j != i)
        if s % sizes[i] == 0:
            vals[i] = -s // sizes[i]
            report.final_fill = (i, vals[i], s)
    return vals, report
