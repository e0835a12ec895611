"""Exact cyclotomic arithmetic on the Zumbroich canonical basis.

Elements of Q(zeta_n) are stored as rational linear combinations of the
canonical basis roots zeta_n^e, with n always the minimal possible
conductor (never 2 mod 4).  Equality of values is then literal equality
of representations, which the rest of the package relies on.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import sympy

RationalLike = "int | Fraction | Cyclotomic"


@lru_cache(maxsize=None)
def _factorization(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(n).items()))


@lru_cache(maxsize=None)
def _conductor_data(n: int):
    # per prime p^nu || n: (p, nu, q = p^nu, n//q, inverse of n//q mod q)
    data = []
    for p, nu in _factorization(n):
        q = p**nu
        nq = n // q
        data.append((p, nu, q, nq, pow(nq, -1, q)))
    return tuple(data)


def _to_basis(n: int, e: int, coeff: Fraction):
    """Rewrite coeff * zeta_n^e as a combination of basis roots.

    Works one prime at a time: a root whose digit pattern is bad at p is
    replaced via the vanishing sum of the p-th roots of unity, which fixes
    the pattern at p without disturbing the other primes.
    """
    terms = [(e % n, coeff)]
    for p, nu, q, nq, inv in _conductor_data(n):
        out = []
        if p == 2:
            half = q // 2
            shift = n // 2
            for f, c in terms:
                if (f * inv) % q < half:
                    out.append((f, c))
                else:
                    out.append(((f - shift) % n, -c))
        else:
            bound = (p - 1) // 2
            step = n // p
            for f, c in terms:
                cc = (f * inv) % q
                for _ in range(nu - 1):
                    r = cc % p
                    if r > bound:
                        r -= p
                    cc = (cc - r) // p
                if cc % p != 0:
                    out.append((f, c))
                else:
                    out.extend(((f + t * step) % n, -c) for t in range(1, p))
        terms = out
    return terms


def _reduce_conductor(n: int, coeffs: dict):
    """Drop primes from the conductor syntactically until minimal."""
    while n > 1 and coeffs:
        for p, nu, q, nq, inv in _conductor_data(n):
            if p == 2:
                cs = {(e * inv) % q for e in coeffs}
                if nu == 1:
                    # n = 2 mod 4 never survives: all exponents are even here
                    assert all(c == 0 for c in cs)
                    n, coeffs = n // 2, {e // 2: c for e, c in coeffs.items()}
                    break
                if nu == 2 and cs == {0}:
                    n, coeffs = n // 4, {e // 4: c for e, c in coeffs.items()}
                    break
                if nu > 2 and all(c % 2 == 0 for c in cs):
                    n, coeffs = n // 2, {e // 2: c for e, c in coeffs.items()}
                    break
            elif nu >= 2:
                if all((e * inv) % q % p == 0 for e in coeffs):
                    n, coeffs = n // p, {e // p: c for e, c in coeffs.items()}
                    break
            else:
                # p || n: reducible iff the support splits into full orbits
                # e, e + n/p, ..., e + (p-1)n/p with one digit value missing
                # and a common coefficient on each orbit.
                groups: dict[int, list[tuple[int, Fraction]]] = {}
                for e, c in coeffs.items():
                    groups.setdefault(e % nq, []).append((e, c))
                ok = True
                new = {}
                for members in groups.values():
                    if len(members) != p - 1:
                        ok = False
                        break
                    vals = {c for _, c in members}
                    if len(vals) != 1:
                        ok = False
                        break
                    e0, c0 = members[0]
                    base = (e0 - ((e0 * inv) % q) * nq) % n
                    new[base // p] = -c0
                if ok:
                    n, coeffs = n // p, new
                    break
        else:
            return n, coeffs
    if not coeffs:
        return 1, {}
    return n, coeffs


def _normalized(n: int, terms) -> tuple[int, dict]:
    coeffs: dict[int, Fraction] = {}
    for e, c in terms:
        if not c:
            continue
        for f, d in _to_basis(n, e, c):
            nc = coeffs.get(f, 0) + d
            if nc:
                coeffs[f] = nc
            elif f in coeffs:
                del coeffs[f]
    return _reduce_conductor(n, coeffs)


class Cyclotomic:
    """An element of some Q(zeta_n), always in canonical form."""

    __slots__ = ("n", "coeffs", "_key")

    def __init__(self, n: int, coeffs: dict, _normal: bool = False):
        if not _normal:
            n, coeffs = _normalized(n, coeffs.items())
        self.n = n
        self.coeffs = coeffs
        self._key = (n, tuple(sorted(coeffs.items())))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def rational(q) -> "Cyclotomic":
        q = Fraction(q)
        if q == 0:
            return ZERO
        return Cyclotomic(1, {0: q}, _normal=True)

    @staticmethod
    def root(n: int, e: int = 1) -> "Cyclotomic":
        """zeta_n^e."""
        if n < 1:
            raise ValueError("conductor must be positive")
        return Cyclotomic(n, {e % n: Fraction(1)})

    # -- structure ------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.n

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.n == 1

    def is_integer(self) -> bool:
        return self.n == 1 and (not self.coeffs or self.coeffs[0].denominator == 1)

    def rational_value(self) -> Fraction:
        if self.n != 1:
            raise ValueError(f"not rational: {self}")
        return self.coeffs.get(0, Fraction(0))

    def int_value(self) -> int:
        q = self.rational_value()
        if q.denominator != 1:
            raise ValueError(f"not an integer: {self}")
        return q.numerator

    # -- arithmetic -----------------------------------------------------

    def _rebase_terms(self, m: int):
        k = m // self.n
        return [((e * k) % m, c) for e, c in self.coeffs.items()]

    def __add__(self, other):
        other = cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.n == 1 and other.n == 1:
            return Cyclotomic.rational(self.rational_value() + other.rational_value())
        if self.n == other.n:
            coeffs = dict(self.coeffs)
            for e, c in other.coeffs.items():
                nc = coeffs.get(e, 0) + c
                if nc:
                    coeffs[e] = nc
                elif e in coeffs:
                    del coeffs[e]
            n, coeffs = _reduce_conductor(self.n, coeffs)
            return Cyclotomic(n, coeffs, _normal=True)
        m = self.n * other.n // gcd(self.n, other.n)
        return Cyclotomic(m, dict_merge(self._rebase_terms(m), other._rebase_terms(m)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, {e: -c for e, c in self.coeffs.items()}, _normal=True)

    def __sub__(self, other):
        other = cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return cyc(other) + (-self)

    def __mul__(self, other):
        other = cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.n == 1 and other.n == 1:
            return Cyclotomic.rational(self.rational_value() * other.rational_value())
        if self.n == 1:
            q = self.rational_value()
            if q == 0:
                return ZERO
            return Cyclotomic(
                other.n, {e: c * q for e, c in other.coeffs.items()}, _normal=True
            )
        if other.n == 1:
            return other * self
        m = self.n * other.n // gcd(self.n, other.n)
        a = self._rebase_terms(m)
        b = other._rebase_terms(m)
        acc: dict[int, Fraction] = {}
        for e1, c1 in a:
            for e2, c2 in b:
                f = (e1 + e2) % m
                nc = acc.get(f, 0) + c1 * c2
                if nc:
                    acc[f] = nc
                elif f in acc:
                    del acc[f]
        return Cyclotomic(m, acc)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.n == 1:
            return Cyclotomic.rational(1 / self.rational_value())
        prod = ONE
        for k in range(2, self.n):
            if gcd(k, self.n) == 1:
                prod = prod * self.galois(k)
        norm = self * prod
        if norm.n != 1:
            raise ArithmeticError("norm computation failed")
        return prod * Cyclotomic.rational(1 / norm.rational_value())

    def __truediv__(self, other):
        other = cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.n == 1:
            return self * Cyclotomic.rational(1 / other.rational_value())
        return self * other.inverse()

    def __rtruediv__(self, other):
        return cyc(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- Galois ---------------------------------------------------------

    def galois(self, k: int) -> "Cyclotomic":
        """Image under zeta_n -> zeta_n^k, for k coprime to the conductor."""
        if self.n == 1:
            return self
        k %= self.n
        if gcd(k, self.n) != 1:
            raise ValueError(f"galois exponent {k} not coprime to conductor {self.n}")
        if k == 1:
            return self
        return Cyclotomic(self.n, {(e * k) % self.n: c for e, c in self.coeffs.items()})

    def conjugate(self) -> "Cyclotomic":
        if self.n == 1:
            return self
        return self.galois(self.n - 1)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def abs_squared(self) -> "Cyclotomic":
        return self * self.conjugate()

    # -- protocol -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self._key == other._key
        if isinstance(other, (int, Fraction)):
            return self.n == 1 and self.rational_value() == other
        return NotImplemented

    def __hash__(self):
        if self.n == 1:
            return hash(self.coeffs.get(0, Fraction(0)))
        return hash(self._key)

    def __bool__(self):
        return bool(self.coeffs)

    def sort_key(self):
        return (
            self.n,
            tuple((e, c.numerator, c.denominator) for e, c in sorted(self.coeffs.items())),
        )

    def __repr__(self):
        if self.n == 1:
            return str(self.rational_value())
        parts = []
        for e, c in sorted(self.coeffs.items()):
            root = f"E({self.n})" if e == 1 else f"E({self.n})^{e}"
            if c == 1:
                term = root
            elif c == -1:
                term = f"-{root}"
            else:
                term = f"{c}*{root}"
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts)

    # -- evaluation (tests only; core code never calls this) -------------

    def evaluate(self, ctx=None):
        """Numeric value via mpmath; used by tests to cross-check arithmetic."""
        import mpmath

        total = mpmath.mpc(0)
        for e, c in self.coeffs.items():
            total += mpmath.mpf(c.numerator) / c.denominator * mpmath.root(1, self.n, e)
        return total


def dict_merge(a, b):
    acc: dict[int, Fraction] = {}
    for e, c in list(a) + list(b):
        nc = acc.get(e, 0) + c
        if nc:
            acc[e] = nc
        elif e in acc:
            del acc[e]
    return acc


ZERO = Cyclotomic(1, {}, _normal=True)
ONE = Cyclotomic(1, {0: Fraction(1)}, _normal=True)


def cyc(x) -> Cyclotomic:
    """Coerce ints and Fractions into cyclotomics."""
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    return NotImplemented


def root_of_unity(n: int, e: int = 1) -> Cyclotomic:
    return Cyclotomic.root(n, e)


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


@lru_cache(maxsize=None)
def _gauss_sum(p: int) -> Cyclotomic:
    # sum_a (a|p) zeta_p^a; squares to p for p = 1 mod 4 and to -p otherwise
    return Cyclotomic(p, {a: Fraction(_legendre(a, p)) for a in range(1, p)})


@lru_cache(maxsize=None)
def atlas_sqrt(d: int) -> Cyclotomic:
    """Deterministic square root of the integer d, built from Gauss sums."""
    if d == 0:
        return ZERO
    square = 1
    rest = d
    for p, nu in _factorization(abs(d)):
        square *= p ** (nu // 2)
        if nu % 2 == 0:
            rest //= p**nu
        else:
            rest //= p ** (nu - 1)
    # rest is squarefree (possibly negative), d = square^2 * rest
    acc = ONE
    sq = 1
    if rest % 2 == 0:
        acc = Cyclotomic(8, {1: Fraction(1), 3: Fraction(-1)})  # sqrt(2)
        sq = 2
    for p, _ in _factorization(abs(rest)):
        if p == 2:
            continue
        acc = acc * _gauss_sum(p)
        sq *= p if p % 4 == 1 else -p
    if (sq < 0) != (rest < 0):
        acc = acc * Cyclotomic.root(4)
        sq = -sq
    assert sq == rest
    return acc * square


def field_contains_sqrt(values, d: int) -> bool:
    """Does the field generated by the given values contain atlas_sqrt(d)?

    Tested through Galois theory: every automorphism of the enclosing
    cyclotomic field fixing all values must also fix the square root.
    """
    s = atlas_sqrt(d)
    if s.n == 1:
        return True
    values = [cyc(v) for v in values]
    m = s.n
    for v in values:
        m = m * v.n // gcd(m, v.n)
    for k in range(2, m):
        if gcd(k, m) != 1:
            continue
        if all(v.galois(k) == v for v in values) and s.galois(k) != s:
            return False
    return True


def galois_fixes(x: Cyclotomic, k: int) -> bool:
    return x.galois(k) == x


# -- serialization ------------------------------------------------------


def encode_int(n: int):
    return n if -(2**63) < n < 2**63 else str(n)


def decode_int(obj) -> int:
    if isinstance(obj, (int, str)):
        return int(obj)
    raise ValueError(f"cannot decode integer from {obj!r}")


def encode_rational(q: Fraction):
    if q.denominator == 1:
        return encode_int(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decode_rational(obj) -> Fraction:
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    raise ValueError(f"cannot decode rational from {obj!r}")


def encode_cyclotomic(x) -> object:
    """JSON encoding: rationals as int or "num/den", others as {"n", "c"}."""
    x = cyc(x)
    if x.n == 1:
        return encode_rational(x.rational_value())
    return {
        "n": x.n,
        "c": [
            [e, encode_int(c.numerator), encode_int(c.denominator)]
            for e, c in sorted(x.coeffs.items())
        ],
    }


def decode_cyclotomic(obj) -> Cyclotomic:
    if isinstance(obj, (int, str)):
        return Cyclotomic.rational(decode_rational(obj))
    if isinstance(obj, dict):
        n = obj["n"]
        coeffs = {}
        for e, num, den in obj["c"]:
            coeffs[e] = Fraction(int(num), int(den))
        return Cyclotomic(n, coeffs)
    raise ValueError(f"cannot decode cyclotomic from {obj!r}")
