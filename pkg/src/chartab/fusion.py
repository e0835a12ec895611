"""Partially determined class maps and fusion solving.

A ParaMap entry is either a fixed class index (int), a sorted tuple of at
least two candidate indices, or None for a completely unbound entry.
Solvers narrow entries by local consistency and backtracking; failure is
always a return value, never an exception.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .classfun import scalar_product
from .cyclo import cyc


# -- ParaMap helpers -------------------------------------------------------


def entry_candidates(entry, universe=None):
    if entry is None:
        if universe is None:
            raise ValueError("unbound entry without a universe")
        return tuple(universe)
    if isinstance(entry, int):
        return (entry,)
    return tuple(entry)


def normalize_entry(cands):
    cands = sorted(set(cands))
    if not cands:
        return None
    if len(cands) == 1:
        return cands[0]
    return tuple(cands)


def is_total(pmap) -> bool:
    return all(isinstance(e, int) for e in pmap)


def indeterminateness(pmap) -> int:
    total = 1
    for e in pmap:
        if e is None:
            raise ValueError("unbound entry has no candidate count")
        if not isinstance(e, int):
            total *= len(e)
    return total


def indeterminate_positions(pmap) -> list[int]:
    return [i for i, e in enumerate(pmap) if not isinstance(e, int)]


def merge_prescribed(pmap, prescribed) -> "list | None":
    """Intersect a ParaMap with prescribed entries; None on conflict."""
    out = list(pmap)
    for i, want in prescribed.items():
        cands = set(entry_candidates(out[i])) & set(entry_candidates(want))
        if not cands:
            return None
        out[i] = normalize_entry(cands)
    return out


def composition_map(outer, inner):
    """Entrywise composition outer[inner[i]].

    outer may be a ParaMap or any sequence of values; set-valued entries
    propagate as sorted candidate tuples (or value sets)."""
    result = []
    for e in inner:
        if e is None:
            result.append(None)
            continue
        pieces = []
        for j in entry_candidates(e):
            o = outer[j]
            if o is None:
                pieces = None
                break
            if isinstance(o, tuple):
                pieces.extend(o)
            else:
                pieces.append(o)
        if pieces is None:
            result.append(None)
        elif all(isinstance(x, int) for x in pieces):
            result.append(normalize_entry(pieces))
        else:
            uniq = []
            for x in pieces:
                if x not in uniq:
                    uniq.append(x)
            result.append(uniq[0] if len(uniq) == 1 else uniq)
    return result


# -- candidate initialization ----------------------------------------------


def init_fusion(sub, amb) -> list:
    """Initial fusion candidates: equal element order, centralizer of the
    subgroup class divides the ambient centralizer."""
    pmap = []
    for i in range(sub.nclasses):
        cands = [
            j
            for j in range(amb.nclasses)
            if amb.orders[j] == sub.orders[i]
            and amb.centralizers[j] % sub.centralizers[i] == 0
        ]
        if not cands:
            raise ValueError(
                f"class {i + 1} of {sub.identifier} has no possible image"
            )
        pmap.append(normalize_entry(cands))
    return pmap


# -- transfer diagram --------------------------------------------------------


class TransferResult:
    def __init__(self):
        self.fusion_positions = []
        self.power_positions = []

    @property
    def improved(self):
        return bool(self.fusion_positions or self.power_positions)


def transfer_diagram(sub_pm, fus, amb_pm) -> "TransferResult | None":
    """Force commutativity amb_pm(fus(i)) = fus(sub_pm(i)) to a fixpoint.

    sub_pm must be total.  fus and amb_pm are ParaMaps, narrowed in place.
    Returns which positions improved, or None if some entry became empty.
    """
    res = TransferResult()
    changed = True
    while changed:
        changed = False
        for i in range(len(sub_pm)):
            j = sub_pm[i]
            if not isinstance(j, int):
                raise ValueError("subgroup power map must be total")
            A = entry_candidates(fus[i])
            B = entry_candidates(fus[j])
            reach = set()
            for a in A:
                reach.update(entry_candidates(amb_pm[a]))
            newB = [b for b in B if b in reach]
            if not newB:
                return None
            if len(newB) != len(B):
                fus[j] = normalize_entry(newB)
                res.fusion_positions.append(j)
                changed = True
                B = tuple(newB)
            bset = set(B)
            newA = [a for a in A if bset & set(entry_candidates(amb_pm[a]))]
            if not newA:
                return None
            if len(newA) != len(A):
                fus[i] = normalize_entry(newA)
                res.fusion_positions.append(i)
                changed = True
                A = tuple(newA)
            if len(A) == 1:
                a = A[0]
                pc = entry_candidates(amb_pm[a])
                newP = [x for x in pc if x in bset]
                if not newP:
                    return None
                if len(newP) != len(pc):
                    amb_pm[a] = normalize_entry(newP)
                    res.power_positions.append(a)
                    changed = True
    res.fusion_positions = sorted(set(res.fusion_positions))
    res.power_positions = sorted(set(res.power_positions))
    return res


def test_consistency_maps(sub_pms: dict, fus, amb_pms: dict) -> bool:
    """Run all transfer diagrams to a global fixpoint.  False on conflict."""
    primes = sorted(set(sub_pms) & set(amb_pms))
    changed = True
    while changed:
        changed = False
        for p in primes:
            res = transfer_diagram(sub_pms[p], fus, amb_pms[p])
            if res is None:
                return False
            if res.improved:
                changed = True
    return True


test_consistency_maps.__test__ = False  # not a pytest case despite the name


# -- full fusion search ------------------------------------------------------


def _char_data(amb, chars):
    data = []
    for theta in chars:
        n = scalar_product(amb, theta, theta)
        weights = [v * v.conjugate() for v in theta]
        if all(w.is_rational() for w in weights):
            weights = [w.rational_value() for w in weights]
        else:
            # irrational |theta(g)|^2: partial bound unusable, keep for
            # the restriction test only
            weights = None
        data.append((theta, weights, n))
    return data


def possible_class_fusions(sub, amb, prescribed=None, chars=None) -> list[list[int]]:
    """All total fusions passing the documented consistency rules.

    Rules, in application order:
    (a) power map transfer diagrams, rerun to a fixpoint after every
        tentative assignment;
    (b) for each ambient character theta (chars argument; by default the
        ambient irreducibles, when present), the partial weighted sum
        sum |i^H| * |theta(map i)|^2 over fixed entries may not exceed
        |G| * <theta, theta>, and a finished map must restrict theta to a
        nonnegative integral combination of the subgroup irreducibles;
    (c) the trivial character induced along a finished assignment of any
        ambient class must take a nonnegative integer value there.
    """
    try:
        base = init_fusion(sub, amb)
    except ValueError:
        return []
    if prescribed:
        base = merge_prescribed(base, dict(prescribed))
        if base is None:
            return []
    amb_pms = {p: list(m) for p, m in amb.power_maps.items()}
    if not test_consistency_maps(sub.power_maps, base, amb_pms):
        return []

    chars = list(amb.irreducibles) if chars is None else list(chars)
    cdata = _char_data(amb, chars)
    budgets = [amb.order * n for _, _, n in cdata]
    sizes = sub.class_sizes()

    sub_irr = list(sub.irreducibles)
    solutions: list[list[int]] = []

    # contributors[j]: subgroup classes that could land on ambient class j
    def contributors(pmap):
        table: dict[int, list[int]] = {}
        for i, e in enumerate(pmap):
            for j in entry_candidates(e):
                table.setdefault(j, []).append(i)
        return table

    def weighted_partial(pmap, weights):
        total = Fraction(0)
        for i, e in enumerate(pmap):
            if isinstance(e, int):
                total += sizes[i] * weights[e]
        return total

    def rule_b_partial(pmap):
        for (theta, weights, n), budget in zip(cdata, budgets):
            if weights is None:
                continue
            if weighted_partial(pmap, weights) > budget:
                return False
        return True

    def rule_c(pmap):
        contrib = contributors(pmap)
        for j, subs in contrib.items():
            if all(isinstance(pmap[i], int) for i in subs):
                val = Fraction(0)
                for i in subs:
                    if pmap[i] == j:
                        val += Fraction(1, sub.centralizers[i])
                v = val * amb.centralizers[j]
                if v.denominator != 1:
                    return False
        return True

    def rule_b_total(pmap):
        for theta, _, _ in cdata:
            restricted = sub.class_function([theta[j] for j in pmap])
            for chi in sub_irr:
                try:
                    m = scalar_product(sub, restricted, chi)
                except ValueError:
                    return False
                if m.denominator != 1 or m < 0:
                    return False
        return True

    def search(pmap):
        open_positions = [
            (len(entry_candidates(pmap[i])), i)
            for i in range(len(pmap))
            if not isinstance(pmap[i], int)
        ]
        if not open_positions:
            if rule_c(pmap) and rule_b_total(pmap):
                sol = list(pmap)
                if sol not in solutions:
                    solutions.append(sol)
            return
        _, i = min(open_positions)
        for j in entry_candidates(pmap[i]):
            trial = list(pmap)
            trial[i] = j
            pms = {p: list(m) for p, m in amb_pms.items()}
            if not test_consistency_maps(sub.power_maps, trial, pms):
                continue
            if not rule_b_partial(trial):
                continue
            if not rule_c(trial):
                continue
            search(trial)

    search(base)
    return sorted(solutions)
