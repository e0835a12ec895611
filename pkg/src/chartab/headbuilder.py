"""Incremental construction of a character-table head.

A table head collects conjugacy-class data (element orders, centralizer
orders, partial fusions from known subgroup tables) for a group whose
character table is not yet known.  Classes are appended in discovery
order; matching a reference ordering afterwards is the job of
table.transforming_permutations, never of the builder.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy

from .cyclo import Cyclotomic
from .powermap import power_map
from .table import CharacterTable


@dataclass
class HeadFusion:
    """Partial class map from a subgroup table into the head (None = open)."""

    sub: object
    map: list


class TableHead:
    """Growing class data for a group of known order.

    Starts with the identity class alone.  All mutation goes through the
    extend_* functions, which also write the audit log.
    """

    def __init__(self, identifier: str, order: int):
        self.identifier = identifier
        self.order = order
        self.centralizers = [order]
        self.orders = [1]
        self.fusions = []
        self.audit_log = []

    @property
    def nclasses(self) -> int:
        return len(self.centralizers)

    def class_sizes(self):
        return [self.order // c for c in self.centralizers]

    def copy(self) -> "TableHead":
        """Independent head sharing the subgroup table objects."""
        other = TableHead(self.identifier, self.order)
        other.centralizers = list(self.centralizers)
        other.orders = list(self.orders)
        other.fusions = [HeadFusion(r.sub, list(r.map)) for r in self.fusions]
        other.audit_log = list(self.audit_log)
        return other

    def fusion_record(self, sub) -> HeadFusion | None:
        for rec in self.fusions:
            if rec.sub.identifier == sub.identifier:
                return rec
        return None

    def __repr__(self):
        return f"TableHead({self.identifier!r}, {self.nclasses} classes)"


def _append_class(head, order, cent):
    if head.order % cent:
        raise ValueError(
            f"centralizer order {cent} does not divide the group order")
    head.centralizers.append(cent)
    head.orders.append(order)
    return head.nclasses - 1


def _mark_fusion(head, rec, i, cls):
    sub = rec.sub
    if sub.orders[i] != head.orders[cls]:
        raise ValueError(
            f"class {i + 1} of {sub.identifier} has order {sub.orders[i]}, "
            f"head class {cls + 1} has order {head.orders[cls]}")
    if head.centralizers[cls] % sub.centralizers[i]:
        raise ValueError(
            f"centralizer of class {i + 1} of {sub.identifier} does not "
            f"divide the head centralizer")
    rec.map[i] = cls


def extend_by_root_classes(head, sub, pos: int) -> int:
    """Add all root classes of sub class `pos` (prime order p) to the head.

    A class i of sub is a root class of pos when p divides order(i), p is
    the smallest prime divisor of order(i), and the (order(i)/p)-th power
    of class i is pos.  Centralizer and element order are copied from sub
    (the centralizers agree because sub contains the full normalizer of
    the cyclic group generated by a pos element).  Returns the number of
    classes added.
    """
    p = sub.orders[pos]
    if not sympy.isprime(p):
        raise ValueError(f"class {pos + 1} of {sub.identifier} has "
                         f"composite order {p}")
    rec = HeadFusion(sub, [None] * sub.nclasses)
    rec.map[0] = 0
    head.fusions.append(rec)
    old = head.nclasses
    for i in range(sub.nclasses):
        ordi = sub.orders[i]
        if ordi % p:
            continue
        if min(sympy.primefactors(ordi)) != p:
            continue
        if power_map(sub, ordi // p)[i] == pos:
            cls = _append_class(head, ordi, sub.centralizers[i])
            _mark_fusion(head, rec, i, cls)
    added = head.nclasses - old
    head.audit_log.append(
        f"#I after {sub.identifier}: found {added} classes, "
        f"now have {head.nclasses}")
    return added


def _ival(v):
    return v.int_value() if isinstance(v, Cyclotomic) else int(v)


def extend_by_centralizer_order(head, source, cent: int, class_positions=None):
    """Append one class of known centralizer order.

    source is either a subgroup table together with the positions of its
    classes that fuse into the new head class, or a bare element order
    when no subgroup table is available.
    """
    if isinstance(source, int):
        order = source
        sub = None
    else:
        sub = source
        orders = {sub.orders[i] for i in class_positions}
        if len(orders) != 1:
            raise ValueError("classes cannot fuse")
        order = orders.pop()
    cls = _append_class(head, order, cent)
    line = f"#I after order {order} element"
    if sub is not None:
        rec = head.fusion_record(sub)
        if rec is None:
            rec = HeadFusion(sub, [None] * sub.nclasses)
            rec.map[0] = 0
            head.fusions.append(rec)
        for i in class_positions:
            _mark_fusion(head, rec, i, cls)
        line += f" from {sub.identifier}"
    line += f": have {head.nclasses} classes"
    head.audit_log.append(line)


def extend_by_perm_char_value(head, sub, pi_restricted, class_positions):
    """Append one class whose centralizer order comes from 1_H^G values.

    pi_restricted holds the values of the ambient permutation character
    on the classes of sub.  From pi(g) = |C_G(g)| |g^G meet H| / |H| the
    centralizer order is pi(g) |H| / sum of the fusing class lengths.
    """
    vals = {_ival(pi_restricted[i]) for i in class_positions}
    if len(vals) != 1:
        raise ValueError("classes cannot fuse")
    pival = vals.pop()
    sizes = sub.class_sizes()
    total = sum(sizes[i] for i in class_positions)
    cent, rem = divmod(pival * sub.order, total)
    if rem:
        raise ValueError("permutation character value gives a fractional "
                         "centralizer order")
    extend_by_centralizer_order(head, sub, cent, class_positions)


def sylow_normalizer_orders(order, p: int, index: int, divisor_pool):
    """Candidate orders x = p*d admitted by Sylow's theorem.

    Keeps x when index*x divides the group order and the quotient is
    congruent 1 mod p.  index carries any assumed factor of [N:C] that is
    not already part of the candidates (e.g. p-1 for a rational class of
    self-centralizing p-elements).
    """
    good = []
    for d in sorted(set(divisor_pool)):
        x = p * d
        q, r = divmod(order, index * x)
        if r == 0 and q % p == 1:
            good.append(x)
    return good


def divisors_congruent(n: int, q: int) -> list[int]:
    """Divisors of n congruent 1 mod q (normal-Sylow elimination helper)."""
    return [d for d in sympy.divisors(n) if d % q == 1]


def finalize_head(head) -> CharacterTable:
    """Freeze the head into a table without irreducibles.

    Requires the class equation to hold exactly.  The partial fusion
    maps are stored on the subgroup tables (targets named after the
    head), ready to seed fusion solving.
    """
    sizes = head.class_sizes()
    missing = head.order - sum(sizes)
    if missing:
        raise ValueError(
            f"class equation fails: class sizes leave {missing} elements")
    t = CharacterTable(head.identifier, head.order,
                       head.centralizers, head.orders)
    for rec in head.fusions:
        rec.sub.store_fusion(t, list(rec.map))
    return t
