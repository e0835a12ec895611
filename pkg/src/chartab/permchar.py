"""Permutation-character machinery.

Three layers: enumeration of induced-trivial candidates over all possible
class fusions, the standard necessary conditions for a class function to
be a transitive permutation character, and a constrained search for
permutation characters with prescribed values ("torso") relative to a
central subgroup of order 2.
"""

from __future__ import annotations

import math

from .classfun import induced_trivial, scalar_product
from .fusion import possible_class_fusions


def trivial_induction_candidates(sub, amb, prescribed=None, chars=None,
                                 faithful_only=False):
    """Induce the trivial character of sub along every possible fusion.

    Candidates are deduplicated by their value lists; with faithful_only,
    only characters with trivial kernel survive.  Raises ValueError when
    no fusion exists at all.
    """
    fusions = possible_class_fusions(sub, amb, prescribed=prescribed,
                                     chars=chars)
    if not fusions:
        raise ValueError("no class fusion from %s into %s"
                         % (sub.identifier, amb.identifier))
    out = []
    seen = set()
    for fmap in fusions:
        pi = induced_trivial(sub, amb, fmap)
        if pi.values not in seen:
            seen.add(pi.values)
            out.append(pi)
    if faithful_only:
        out = [pi for pi in out if pi.kernel_classes() == [0]]
    return out


def _integer_values(pi):
    """Values of pi as Python ints, or None where irrational/non-integral."""
    vals = []
    for v in pi.values:
        vals.append(v.int_value() if v.is_integer() else None)
    return vals


def check_perm_char_conditions(t, pi):
    """Necessary conditions for pi = 1_H^G; returns a list of violations.

    An empty report means every test passed, not that pi is a permutation
    character.  Class numbers in messages are 1-based.
    """
    report = []
    vals = _integer_values(pi)
    for i, v in enumerate(vals):
        if v is None:
            report.append("value at class %d is not a rational integer"
                          % (i + 1))
        elif v < 0:
            report.append("value at class %d is negative" % (i + 1))
    if report:
        return report

    deg = vals[0]
    if deg <= 0 or t.order % deg != 0:
        report.append("degree %d does not divide the group order" % deg)
    for i, v in enumerate(vals):
        if v > deg:
            report.append("value at class %d exceeds the degree" % (i + 1))
    for p in sorted(t.power_maps):
        pmap = t.power_maps[p]
        for i, v in enumerate(vals):
            if vals[pmap[i]] < v:
                report.append(
                    "value drops from class %d to its %dth power" % (i + 1, p))
    if deg > 0 and t.order % deg == 0:
        # |g^G meet H| = pi(g) |H| / |C_G(g)| with |H| = |G| / pi(1)
        h = t.order // deg
        for i, v in enumerate(vals):
            if (v * h) % t.centralizers[i] != 0:
                report.append(
                    "class %d meets the point stabilizer in a non-integral "
                    "number of elements" % (i + 1))
    if t.irreducibles:
        for k, chi in enumerate(t.irreducibles):
            try:
                mult = scalar_product(t, pi, chi)
            except ValueError:
                report.append("multiplicity of irreducible %d is irrational"
                              % (k + 1))
                continue
            if mult.denominator != 1 or mult < 0:
                report.append(
                    "multiplicity %s of irreducible %d is not a nonnegative "
                    "integer" % (mult, k + 1))
        if scalar_product(t, pi, t.trivial_character()) < 1:
            report.append("the trivial character does not occur")
    return report


def perm_chars_with_torso(t, torso, centre_classes, nonfaithful):
    """All permutation-character candidates with prescribed values.

    centre_classes = [0, z] must describe a central subgroup of order 2
    and nonfaithful a known permutation character pi0 with z in its
    kernel.  Solutions have the form pi = pi0 + theta where theta runs
    over nonnegative integral combinations of the irreducibles chi with
    chi(z) = -chi(1); this shape makes pi(g) + pi(zg) = 2 pi0(g) hold
    identically.  torso is a list of prescribed values (None = free),
    torso[0] = 2 pi0(1) and torso[z] = 0 required.

    Search: multiplicities in decreasing-degree order, each bounded by
    torso[0] // chi(1) and by the norm budget <theta,theta> <= pi(1);
    suffix degree sums and gcds prune infeasible branches early.
    """
    if len(centre_classes) != 2 or centre_classes[0] != 0:
        raise ValueError("centre_classes must be [0, z]")
    z = centre_classes[1]
    if t.orders[z] != 2 or t.centralizers[z] != t.order:
        raise ValueError("class %d is not a central involution" % (z + 1))

    pi0 = nonfaithful
    deg0 = pi0.values[0].int_value()
    if pi0.values[z] != pi0.values[0]:
        raise ValueError("nonfaithful character does not contain the centre "
                         "in its kernel")
    degree = 2 * deg0
    if len(torso) == 0 or torso[0] != degree:
        raise ValueError("torso[1] must equal twice the nonfaithful degree")
    if z < len(torso) and torso[z] not in (None, 0):
        raise ValueError("torso must vanish on the central involution")

    faithful = [chi for chi in t.irreducibles
                if chi.values[z] == -chi.values[0]]
    order = sorted(range(len(faithful)),
                   key=lambda k: (-faithful[k].values[0].int_value(), k))
    faithful = [faithful[k] for k in order]
    degs = [chi.values[0].int_value() for chi in faithful]

    # suffix data for pruning: max reachable degree and gcd of steps
    n = len(faithful)
    bounds = [min(degree // d, math.isqrt(degree)) for d in degs]
    suffix_max = [0] * (n + 1)
    suffix_gcd = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix_max[k] = suffix_max[k + 1] + bounds[k] * degs[k]
        suffix_gcd[k] = math.gcd(suffix_gcd[k + 1], degs[k])

    prescribed = [(i, torso[i]) for i in range(len(torso))
                  if torso[i] is not None]

    solutions = []

    def leaf(coeffs):
        theta = None
        for c, chi in zip(coeffs, faithful):
            if c == 0:
                continue
            part = chi * c
            theta = part if theta is None else theta + part
        pi = pi0 if theta is None else pi0 + theta
        vals = _integer_values(pi)
        if any(v is None for v in vals):
            return
        for i, want in prescribed:
            if vals[i] != want:
                return
        if check_perm_char_conditions(t, pi):
            return
        solutions.append(pi)

    def search(k, remaining, budget, coeffs):
        if remaining == 0:
            leaf(coeffs + [0] * (n - k))
            return
        if k == n or remaining < 0:
            return
        if remaining > suffix_max[k] or remaining % suffix_gcd[k] != 0:
            return
        top = min(bounds[k], remaining // degs[k], math.isqrt(budget))
        for c in range(top, -1, -1):
            search(k + 1, remaining - c * degs[k], budget - c * c,
                   coeffs + [c])

    # theta(1) = pi0(1); norm budget <theta,theta> <= pi(1) = torso[0]
    search(0, deg0, degree, [])
    solutions.sort(key=lambda f: f.sort_key())
    return solutions
