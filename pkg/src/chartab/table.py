"""Character table model: classes, power maps, irreducibles, fusions.

All class indices are 0-based inside the library.  File formats and
printed output use 1-based indices; conversion happens at the I/O layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import sympy

from .cyclo import Cyclotomic, cyc


class ClassFunction:
    """A class function on a table: one exact value per conjugacy class."""

    __slots__ = ("table", "values")

    def __init__(self, table, values):
        self.table = table
        self.values = tuple(cyc(v) for v in values)
        if len(self.values) != table.nclasses:
            raise ValueError(
                f"expected {table.nclasses} values, got {len(self.values)}"
            )

    @property
    def degree(self) -> Cyclotomic:
        return self.values[0]

    def __getitem__(self, i: int) -> Cyclotomic:
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __add__(self, other):
        self._check(other)
        return ClassFunction(self.table, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return ClassFunction(self.table, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.table, [-a for a in self.values])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(
                self.table, [a * b for a, b in zip(self.values, other.values)]
            )
        return ClassFunction(self.table, [a * other for a in self.values])

    __rmul__ = __mul__

    def conjugate(self):
        return ClassFunction(self.table, [a.conjugate() for a in self.values])

    def is_zero(self):
        return all(v.is_zero() for v in self.values)

    def kernel_classes(self) -> list[int]:
        """Classes where the value equals the degree."""
        d = self.degree
        return [i for i, v in enumerate(self.values) if v == d]

    def _check(self, other):
        if not isinstance(other, ClassFunction) or other.table is not self.table:
            raise ValueError("class functions live on different tables")

    def __eq__(self, other):
        if isinstance(other, ClassFunction):
            return self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def sort_key(self):
        return tuple(v.sort_key() for v in self.values)

    def __repr__(self):
        vals = ", ".join(repr(v) for v in self.values[:6])
        more = ", ..." if len(self.values) > 6 else ""
        return f"ClassFunction([{vals}{more}])"


@dataclass
class FusionRecord:
    """A class map from the owning table's classes into a named table."""

    into: str
    map: list  # ParaMap entries: int, tuple of ints, or None


class CharacterTable:
    """Conjugacy class data plus (possibly empty) irreducible characters."""

    def __init__(
        self,
        identifier: str,
        order: int,
        centralizers,
        orders,
        power_maps=None,
        irreducibles=(),
        fusions=(),
    ):
        self.identifier = identifier
        self.order = order
        self.centralizers = tuple(centralizers)
        self.orders = tuple(orders)
        self.power_maps = {int(p): tuple(m) for p, m in (power_maps or {}).items()}
        self.irreducibles = tuple(
            ch if isinstance(ch, ClassFunction) else ClassFunction(self, ch)
            for ch in irreducibles
        )
        self.fusions = list(fusions)

    @property
    def nclasses(self) -> int:
        return len(self.centralizers)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(self.order // c for c in self.centralizers)

    def class_function(self, values) -> ClassFunction:
        return ClassFunction(self, values)

    def trivial_character(self) -> ClassFunction:
        return ClassFunction(self, [1] * self.nclasses)

    def fusion_into(self, other: "CharacterTable | str"):
        """Stored total fusion of this table's classes into `other`, if any."""
        name = other if isinstance(other, str) else other.identifier
        for rec in self.fusions:
            if rec.into == name:
                return rec.map
        return None

    def store_fusion(self, other, fmap):
        name = other if isinstance(other, str) else other.identifier
        self.fusions = [r for r in self.fusions if r.into != name]
        self.fusions.append(FusionRecord(name, list(fmap)))

    def __repr__(self):
        return f"CharacterTable({self.identifier!r}, {self.nclasses} classes)"


def positions_of_order(t, n: int) -> list[int]:
    return [i for i, o in enumerate(t.orders) if o == n]


def validate_table(t: CharacterTable) -> list[str]:
    """Collect violations of the structural table invariants."""
    bad = []
    r = t.nclasses
    if r == 0 or t.orders[0] != 1 or t.centralizers[0] != t.order:
        bad.append("class 1 must be the identity with full centralizer")
    if sum(t.order // c for c in t.centralizers) != t.order:
        bad.append("class equation fails")
    for i in range(r):
        if t.order % t.centralizers[i]:
            bad.append(f"centralizer of class {i + 1} does not divide the order")
        if t.order % t.orders[i]:
            bad.append(f"element order of class {i + 1} does not divide the order")
    for p, pmap in t.power_maps.items():
        if len(pmap) != r:
            bad.append(f"power map for {p} has wrong length")
            continue
        for i in range(r):
            j = pmap[i]
            if not isinstance(j, int):
                bad.append(f"power map for {p} is not total at class {i + 1}")
                continue
            if t.orders[j] != t.orders[i] // gcd(t.orders[i], p):
                bad.append(f"power map for {p} breaks element orders at class {i + 1}")
            if t.centralizers[j] % t.centralizers[i]:
                bad.append(
                    f"power map for {p} breaks centralizer divisibility at class {i + 1}"
                )
    if t.irreducibles:
        if len(t.irreducibles) != r:
            bad.append("irreducible count differs from class count")
        from .classfun import scalar_product

        for a, chi in enumerate(t.irreducibles):
            if not (chi.degree.is_integer() and chi.degree.int_value() > 0):
                bad.append(f"character {a + 1} has non positive integer degree")
            for b in range(a, len(t.irreducibles)):
                want = Fraction(1 if a == b else 0)
                if scalar_product(t, chi, t.irreducibles[b]) != want:
                    bad.append(f"row orthogonality fails at ({a + 1}, {b + 1})")
        if len(t.irreducibles) == r:
            for i in range(r):
                for j in range(i, r):
                    s = sum(
                        (
                            chi[i] * chi[j].conjugate()
                            for chi in t.irreducibles
                        ),
                        cyc(0),
                    )
                    want = t.centralizers[i] if i == j else 0
                    if s != want:
                        bad.append(f"column orthogonality fails at ({i + 1}, {j + 1})")
    return bad


# -- normal subgroup machinery ------------------------------------------


def _norm_closure(kernels: list[frozenset]) -> set[frozenset]:
    family = set(kernels)
    frontier = list(family)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(family):
                c = a & b
                if c not in family:
                    family.add(c)
                    nxt.append(c)
        frontier = nxt
    return family


def normal_subgroups(t: CharacterTable) -> list[list[int]]:
    """All normal subgroups as sorted class lists.

    Every normal subgroup is an intersection of kernels of irreducibles,
    so closing the kernels under intersection yields the full lattice.
    """
    if not t.irreducibles:
        raise ValueError("normal subgroup computation needs the irreducibles")
    kernels = [frozenset(chi.kernel_classes()) for chi in t.irreducibles]
    kernels.append(frozenset(range(t.nclasses)))
    sizes = t.class_sizes()
    family = _norm_closure(kernels)
    return sorted(
        (sorted(s) for s in family),
        key=lambda cls: (sum(sizes[i] for i in cls), cls),
    )


def centre_classes(t: CharacterTable) -> list[int]:
    return [i for i, c in enumerate(t.centralizers) if c == t.order]


def pcore_classes(t: CharacterTable, p: int) -> list[int]:
    """Classes of the largest normal p-subgroup."""
    sizes = t.class_sizes()
    best = [0]
    for cls in normal_subgroups(t):
        total = sum(sizes[i] for i in cls)
        q = total
        while q % p == 0:
            q //= p
        if q == 1 and total > sum(sizes[i] for i in best):
            best = cls
    return sorted(best)


def _power_map_entry(t, n, i):
    d = t.orders[i]
    m = n % d
    if m == 0:
        return 0
    j = i
    for p, e in sympy.factorint(m).items():
        pm = t.power_maps.get(p)
        if pm is None:
            raise ValueError(f"power map for prime {p} not stored on {t.identifier}")
        for _ in range(e):
            j = pm[j]
            if not isinstance(j, int):
                raise ValueError(f"power map for prime {p} not total")
    return j


def power_map(t, n: int) -> list[int]:
    """Total n-th power map, composed from stored prime maps.

    Works entrywise: class i is powered by n mod (element order of i), so
    only primes up to the largest element order are ever needed.
    """
    return [_power_map_entry(t, n, i) for i in range(t.nclasses)]


# -- derived tables ------------------------------------------------------


def factor_table(t: CharacterTable, kernel_classes: list[int], identifier=None):
    """Table of the factor group by the normal subgroup on the given classes.

    Returns (factor_table, fusion) where fusion maps each class of t onto
    a class of the factor.
    """
    kernel = sorted(kernel_classes)
    if 0 not in kernel:
        raise ValueError("kernel must contain the identity class")
    keep = [
        chi
        for chi in t.irreducibles
        if all(chi[i] == chi.degree for i in kernel)
    ]
    if not keep:
        raise ValueError("no irreducibles contain the kernel")
    fibers: dict[tuple, int] = {}
    fusion = []
    for i in range(t.nclasses):
        key = tuple(chi[i] for chi in keep)
        fusion.append(fibers.setdefault(key, len(fibers)))
    nf = len(fibers)
    sizes = t.class_sizes()
    ksize = sum(sizes[i] for i in kernel)
    if t.order % ksize:
        raise ValueError("kernel size does not divide the group order")
    forder = t.order // ksize
    fsizes = [0] * nf
    for i in range(t.nclasses):
        fsizes[fusion[i]] += sizes[i]
    fcent = []
    for c in range(nf):
        if fsizes[c] % ksize or forder % (fsizes[c] // ksize):
            raise ValueError("fiber sizes incompatible with the kernel")
        fcent.append(forder // (fsizes[c] // ksize))
    kernel_set = set(kernel)
    forders = []
    for c in range(nf):
        i = fusion.index(c)
        d = t.orders[i]
        ford = min(
            m
            for m in sympy.divisors(d)
            if _power_map_entry(t, m, i) in kernel_set
        )
        forders.append(ford)
    first_preimage = [fusion.index(c) for c in range(nf)]
    fpower = {}
    for p in sympy.primerange(2, max(forders) + 1):
        fpower[p] = tuple(
            fusion[_power_map_entry(t, p, first_preimage[c])] for c in range(nf)
        )
    firr = []
    for chi in keep:
        vals = [None] * nf
        for i in range(t.nclasses):
            vals[fusion[i]] = chi[i]
        firr.append(vals)
    ft = CharacterTable(
        identifier=identifier or f"{t.identifier}/{[i + 1 for i in kernel]}",
        order=forder,
        centralizers=fcent,
        orders=forders,
        power_maps=fpower,
        irreducibles=[],
    )
    ft.irreducibles = tuple(ClassFunction(ft, v) for v in firr)
    # second orthogonality doubles as a consistency check on the centralizers
    for c in range(nf):
        s = sum((chi[c] * chi[c].conjugate() for chi in ft.irreducibles), cyc(0))
        if s != fcent[c]:
            raise ValueError("factor centralizers fail second orthogonality")
    t.store_fusion(ft, list(fusion))
    return ft, fusion


def direct_product_table(t1: CharacterTable, t2: CharacterTable) -> CharacterTable:
    """Direct product table; classes are pairs with the first factor slower."""
    n1, n2 = t1.nclasses, t2.nclasses
    idx = lambda i, j: i * n2 + j
    order = t1.order * t2.order
    cent = [t1.centralizers[i] * t2.centralizers[j] for i in range(n1) for j in range(n2)]
    orders = [
        t1.orders[i] * t2.orders[j] // gcd(t1.orders[i], t2.orders[j])
        for i in range(n1)
        for j in range(n2)
    ]
    pmaps = {}
    for p in sympy.primerange(2, max(orders) + 1):
        m1 = power_map(t1, p)
        m2 = power_map(t2, p)
        pmaps[p] = [idx(m1[i], m2[j]) for i in range(n1) for j in range(n2)]
    dp = CharacterTable(
        identifier=f"{t1.identifier}x{t2.identifier}",
        order=order,
        centralizers=cent,
        orders=orders,
        power_maps=pmaps,
    )
    irr = []
    for a in t1.irreducibles:
        for b in t2.irreducibles:
            irr.append(
                ClassFunction(dp, [a[i] * b[j] for i in range(n1) for j in range(n2)])
            )
    dp.irreducibles = tuple(irr)
    return dp


# -- table equivalence ----------------------------------------------------


def _class_fingerprints(t: CharacterTable):
    """Permutation-invariant class labels, refined through the power maps."""
    fp = [(t.orders[i], t.centralizers[i]) for i in range(t.nclasses)]
    if t.irreducibles:
        cols = []
        for i in range(t.nclasses):
            col = sorted(chi[i].sort_key() for chi in t.irreducibles)
            cols.append(tuple(col))
        fp = [fp[i] + (cols[i],) for i in range(t.nclasses)]
    # refine through the power maps until the partition stabilizes; labels
    # stay structural (no per-table compression) so they compare across tables
    while True:
        nxt = []
        for i in range(t.nclasses):
            ext = tuple(
                (p, fp[pm[i]])
                for p, pm in sorted(t.power_maps.items())
                if isinstance(pm[i], int)
            )
            nxt.append((fp[i], ext))
        if len(set(nxt)) == len(set(fp)):
            return fp
        fp = nxt


def transforming_permutations(t1: CharacterTable, t2: CharacterTable):
    """Search a class permutation pi with t2 = t1 reindexed along pi.

    pi maps classes of t1 to classes of t2: orders, centralizers and power
    maps carry over, and the irreducible row sets coincide.  Returns the
    permutation as a list (image of class i at position i) or None.
    """
    if t1.nclasses != t2.nclasses or t1.order != t2.order:
        return None
    f1 = _class_fingerprints(t1)
    f2 = _class_fingerprints(t2)
    if sorted(f1) != sorted(f2):
        return None
    candidates = [
        [j for j in range(t2.nclasses) if f2[j] == f1[i]] for i in range(t1.nclasses)
    ]
    rows2 = {chi.values for chi in t2.irreducibles}
    primes = sorted(set(t1.power_maps) & set(t2.power_maps))
    pi = [None] * t1.nclasses
    used = [False] * t2.nclasses

    order = sorted(range(t1.nclasses), key=lambda i: len(candidates[i]))

    def extend(k):
        if k == len(order):
            if t2.irreducibles:
                for chi in t1.irreducibles:
                    moved = [None] * t1.nclasses
                    for i in range(t1.nclasses):
                        moved[pi[i]] = chi[i]
                    if tuple(moved) not in rows2:
                        return False
            return True
        i = order[k]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for p in primes:
                a = t1.power_maps[p][i]
                b = t2.power_maps[p][j]
                if isinstance(a, int) and isinstance(b, int) and pi[a] is not None:
                    if pi[a] != b:
                        ok = False
                        break
            if not ok:
                continue
            pi[i] = j
            used[j] = True
            if extend(k + 1):
                return True
            pi[i] = None
            used[j] = False
        return False

    if extend(0):
        return list(pi)
    return None


def permutation_is_table_automorphism(t: CharacterTable, pi: list[int]) -> bool:
    """Membership test: does pi permute classes compatibly with the table?"""
    r = t.nclasses
    if sorted(pi) != list(range(r)):
        return False
    for i in range(r):
        if t.orders[pi[i]] != t.orders[i] or t.centralizers[pi[i]] != t.centralizers[i]:
            return False
    for p, pm in t.power_maps.items():
        for i in range(r):
            if isinstance(pm[i], int) and pm[pi[i]] != pi[pm[i]]:
                return False
    if t.irreducibles:
        rows = {chi.values for chi in t.irreducibles}
        for chi in t.irreducibles:
            moved = [None] * r
            for i in range(r):
                moved[pi[i]] = chi[i]
            if tuple(moved) not in rows:
                return False
    return True
