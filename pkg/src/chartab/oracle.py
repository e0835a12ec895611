"""Brute-force character tables of small permutation groups.

Conjugacy classes come from explicit element enumeration; irreducibles are
computed by the classical modular method: simultaneous eigenvectors of the
class multiplication matrices over a prime field F_p with p = 1 mod
exponent(G), then lifted to exact cyclotomics via multiplicities of
eigenvalue roots of unity.  Everything is deterministic so expected values
can be frozen into tests.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

import sympy

from .cyclo import Cyclotomic, cyc, root_of_unity
from .table import CharacterTable, ClassFunction


# -- permutations ---------------------------------------------------------


def parse_permutation(text: str, degree: int) -> tuple[int, ...]:
    """Cycle notation with 1-based points, e.g. "(1,2,3)(4,5)"."""
    images = list(range(degree))
    text = text.replace(" ", "")
    if text in ("", "()"):
        return tuple(images)
    depth = 0
    cycles = []
    cur = ""
    for ch in text:
        if ch == "(":
            if depth:
                raise ValueError("nested parentheses in permutation")
            depth = 1
            cur = ""
        elif ch == ")":
            depth = 0
            pts = [int(x) - 1 for x in cur.split(",") if x]
            cycles.append(pts)
        elif depth:
            cur += ch
        else:
            raise ValueError(f"unexpected character {ch!r} in permutation")
    for pts in cycles:
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a >= degree or a < 0:
                raise ValueError("point out of range")
            images[a] = b
    return tuple(images)


def format_permutation(p) -> str:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc_pts = [start]
        seen[start] = True
        nxt = p[start]
        while nxt != start:
            cyc_pts.append(nxt)
            seen[nxt] = True
            nxt = p[nxt]
        out.append("(" + ",".join(str(x + 1) for x in cyc_pts) + ")")
    return "".join(out) if out else "()"


def pmul(a, b):
    """Apply a, then b."""
    return tuple(b[x] for x in a)


def pinv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_order(a) -> int:
    n = len(a)
    seen = [False] * n
    total = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = a[x]
            length += 1
        total = total * length // gcd(total, length)
    return total


# -- group data -----------------------------------------------------------


class PermGroup:
    """Fully enumerated permutation group with conjugacy class data."""

    def __init__(self, generators, identifier: str, limit: int = 10000):
        if not generators:
            raise ValueError("need at least one generator")
        degree = len(generators[0])
        if any(len(g) != degree for g in generators):
            raise ValueError("generators act on different point sets")
        self.identifier = identifier
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        identity = tuple(range(degree))
        elements = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = pmul(x, g)
                    if y not in elements:
                        elements.add(y)
                        nxt.append(y)
                        if len(elements) > limit:
                            raise ValueError(
                                f"group exceeds the enumeration limit {limit}"
                            )
            frontier = nxt
        self.elements = elements
        self.order = len(elements)
        self._build_classes()
        self._matrix_cache: dict[int, list[list[int]]] = {}
        self._table = None

    def _build_classes(self):
        cls_of: dict[tuple, int] = {}
        classes: list[list[tuple]] = []
        for x in sorted(self.elements):
            if x in cls_of:
                continue
            orbit = [x]
            cls_of[x] = -1
            k = 0
            while k < len(orbit):
                z = orbit[k]
                k += 1
                for g in self.generators:
                    w = pmul(pmul(pinv(g), z), g)
                    if w not in cls_of:
                        cls_of[w] = -1
                        orbit.append(w)
            classes.append(orbit)
        identity = tuple(range(self.degree))
        keyed = []
        for orbit in classes:
            rep = min(orbit)
            keyed.append((perm_order(rep), len(orbit), rep, orbit))
        keyed.sort(key=lambda r: (r[0] != 1, r[0], r[1], r[2]))
        self.reps = [r[2] for r in keyed]
        self.classes = [r[3] for r in keyed]
        self.class_of = {}
        for idx, orbit in enumerate(self.classes):
            for x in orbit:
                self.class_of[x] = idx
        assert self.reps[0] == identity

    @property
    def nclasses(self):
        return len(self.classes)

    def element_power_class(self, i: int, k: int) -> int:
        rep = self.reps[i]
        acc = tuple(range(self.degree))
        k %= perm_order(rep)
        base = rep
        while k:
            if k & 1:
                acc = pmul(acc, base)
            base = pmul(base, base)
            k >>= 1
        return self.class_of[acc]

    def class_matrix(self, i: int) -> list[list[int]]:
        """M[k][j] = #{x in class i with x^-1 * z_k in class j}."""
        if i in self._matrix_cache:
            return self._matrix_cache[i]
        r = self.nclasses
        M = [[0] * r for _ in range(r)]
        for x in self.classes[i]:
            xi = pinv(x)
            for k, z in enumerate(self.reps):
                y = pmul(xi, z)
                M[k][self.class_of[y]] += 1
        self._matrix_cache[i] = M
        return M

    def character_table(self) -> CharacterTable:
        if self._table is None:
            self._table = _dixon_table(self)
        return self._table

    def contains(self, g) -> bool:
        return tuple(g) in self.elements


# -- linear algebra over F_p ----------------------------------------------


def _rref(rows, p):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for rr in range(rank, len(rows)):
            if rows[rr][col] % p:
                piv = rr
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for rr in range(len(rows)):
            if rr != rank and rows[rr][col]:
                f = rows[rr][col]
                rows[rr] = [(a - f * b) % p for a, b in zip(rows[rr], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def _nullspace(mat, p):
    rows, pivots = _rref(mat, p)
    n = len(mat[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r, pc in zip(rows, pivots):
            v[pc] = (-r[fc]) % p
        basis.append(v)
    return basis


def _charpoly(R, p):
    """Monic characteristic polynomial coefficients, highest degree first."""
    m = len(R)
    coeffs = [1]
    Mk = None
    for k in range(1, m + 1):
        if Mk is None:
            Mk = [row[:] for row in R]
        else:
            prev = [row[:] for row in Mk]
            for d in range(m):
                prev[d][d] = (prev[d][d] + coeffs[-1]) % p
            Mk = [
                [sum(R[a][t] * prev[t][b] for t in range(m)) % p for b in range(m)]
                for a in range(m)
            ]
        tr = sum(Mk[d][d] for d in range(m)) % p
        ck = (-tr * pow(k, -1, p)) % p
        coeffs.append(ck)
    return coeffs


def _poly_roots(coeffs, p):
    roots = []
    for x in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


# -- the modular method ----------------------------------------------------


def _dixon_prime(order, exponent, nclasses):
    # p > 2 sqrt(|G|) separates the integer character values; p > r keeps
    # 1..r invertible in the characteristic-polynomial recursion
    bound = max(2 * (isqrt(order - 1) + 1), nclasses)
    p = exponent + 1
    while p <= bound or not sympy.isprime(p):
        p += exponent
    return p


def _dixon_table(G: PermGroup) -> CharacterTable:
    r = G.nclasses
    sizes = [len(c) for c in G.classes]
    orders = [perm_order(rep) for rep in G.reps]
    cents = [G.order // s for s in sizes]
    exponent = 1
    for o in orders:
        exponent = exponent * o // gcd(exponent, o)
    p = _dixon_prime(G.order, exponent, r)

    inv_class = [G.class_of[pinv(rep)] for rep in G.reps]

    # split F_p^r into common eigenspaces of the class matrices
    spaces = [[[1 if a == b else 0 for b in range(r)] for a in range(r)]]
    for i in range(1, r):
        if all(len(V) == 1 for V in spaces):
            break
        M = G.class_matrix(i)
        nxt = []
        for V in spaces:
            if len(V) == 1:
                nxt.append(V)
                continue
            basis, pivots = _rref(V, p)
            m = len(basis)
            # restriction of M to the span: M maps the span into itself
            cols = []
            for v in basis:
                w = [sum(M[a][b] * v[b] for b in range(r)) % p for a in range(r)]
                coords = [w[pc] % p for pc in pivots]
                # consistency: w must lie in the span
                chk = [0] * r
                for cf, bv in zip(coords, basis):
                    for a in range(r):
                        chk[a] = (chk[a] + cf * bv[a]) % p
                assert chk == [x % p for x in w], "class matrix leaves the subspace"
                cols.append(coords)
            R = [[cols[s][t] for s in range(m)] for t in range(m)]
            for lam in _poly_roots(_charpoly(R, p), p):
                shifted = [
                    [(R[a][b] - (lam if a == b else 0)) % p for b in range(m)]
                    for a in range(m)
                ]
                eigenspace = []
                for kv in _nullspace(shifted, p):
                    amb = [0] * r
                    for cf, bv in zip(kv, basis):
                        for a in range(r):
                            amb[a] = (amb[a] + cf * bv[a]) % p
                    eigenspace.append(amb)
                if eigenspace:
                    nxt.append(eigenspace)
        assert sum(len(V) for V in nxt) == r, "eigenspace splitting lost dimensions"
        spaces = nxt
    assert all(len(V) == 1 for V in spaces), "class matrices failed to split"

    # square root table mod p for the degree computation
    sqrt_of = {}
    for x in range(p // 2 + 1):
        sqrt_of.setdefault(x * x % p, x)

    order_mod = G.order % p
    z = sympy.primitive_root(p)
    theta = {d: pow(z, (p - 1) // d, p) for d in set(orders)}

    characters = []
    for (v,) in spaces:
        v0 = v[0] % p
        assert v0, "eigenvector vanishes at the identity"
        inv0 = pow(v0, -1, p)
        u = [(x * inv0) % p for x in v]  # u_i = chi(g_i^-1)/chi(1) mod p
        t_sum = 0
        for i in range(r):
            t_sum = (t_sum + sizes[i] * u[i] * u[inv_class[i]]) % p
        deg_sq = (order_mod * pow(t_sum, -1, p)) % p
        deg = sqrt_of.get(deg_sq)
        assert deg is not None, "degree is not a square mod p"
        chi_mod = [(deg * u[inv_class[i]]) % p for i in range(r)]
        vals = []
        for i in range(r):
            d = orders[i]
            if d == 1:
                vals.append(cyc(deg))
                continue
            th = theta[d]
            dinv = pow(d, -1, p)
            value = cyc(0)
            powers = [chi_mod[G.element_power_class(i, t)] for t in range(d)]
            for j in range(d):
                s = 0
                thj = pow(th, (-j) % (p - 1), p)
                acc = 1
                for t in range(d):
                    s = (s + powers[t] * acc) % p
                    acc = (acc * thj) % p
                mj = (s * dinv) % p
                assert mj <= deg, "eigenvalue multiplicity out of range"
                if mj:
                    value = value + mj * root_of_unity(d, j)
            vals.append(value)
        assert vals[0] == deg
        characters.append(vals)

    assert sum(v[0].int_value() ** 2 for v in characters) == G.order

    trivial = [c for c in characters if all(x == 1 for x in c)]
    rest = [c for c in characters if not all(x == 1 for x in c)]
    rest.sort(key=lambda c: (c[0].int_value(), tuple(x.sort_key() for x in c)))
    ordered = trivial + rest

    pmaps = {}
    for q in sympy.primerange(2, max(orders) + 1):
        pmaps[q] = tuple(G.element_power_class(i, q) for i in range(r))

    t = CharacterTable(
        identifier=G.identifier,
        order=G.order,
        centralizers=cents,
        orders=orders,
        power_maps=pmaps,
    )
    t.irreducibles = tuple(ClassFunction(t, vals) for vals in ordered)
    return t


def brute_force_table(generators, identifier: str, limit: int = 10000):
    """Character table from explicit permutation generators."""
    gens = list(generators)
    if gens and isinstance(gens[0], str):
        degree = max(
            (int(x) for g in gens for x in g.replace("(", " ").replace(")", " ").replace(",", " ").split()),
            default=1,
        )
        gens = [parse_permutation(g, degree) for g in gens]
    return PermGroup(gens, identifier, limit=limit).character_table()


# -- subgroup helpers (used by tests and the fusion oracle) ----------------


def subgroup(G: PermGroup, generators, identifier: str) -> PermGroup:
    gens = [tuple(g) for g in generators]
    for g in gens:
        if not G.contains(g):
            raise ValueError("subgroup generator outside the group")
    return PermGroup(gens, identifier, limit=G.order)


def true_fusion(H: PermGroup, G: PermGroup) -> list[int]:
    """Class map of a genuine subgroup, read off from the elements."""
    return [G.class_of[rep] for rep in H.reps]


def coset_permutation_character(G: PermGroup, H: PermGroup) -> list[int]:
    """Values of the permutation character of G acting on G/H cosets."""
    index = G.order // H.order
    helems = H.elements
    seen = set()
    reps = []
    for g in sorted(G.elements):
        if g in seen:
            continue
        reps.append(g)
        for h in helems:
            seen.add(pmul(h, g))
        if len(reps) == index:
            break
    vals = []
    for i in range(G.nclasses):
        x = G.reps[i]
        count = 0
        for g in reps:
            conj = pmul(pmul(g, x), pinv(g))
            if conj in helems:
                count += 1
        vals.append(count)
    return vals
