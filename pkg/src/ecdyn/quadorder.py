"""Arithmetic in the maximal order Z[w] of an imaginary quadratic field.

``w = (1 + sqrt(d))/2`` when ``d = 1 (mod 4)`` and ``w = sqrt(d)`` otherwise.
Integral ideals are lattices with Hermite normal form basis
``{a, b + c*w}``, which makes membership and equality constant time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod
from sympy.ntheory.factor_ import core

NORM_CAP = 10**9


class QuadError(ValueError):
    pass


class ZeroIdeal(QuadError):
    pass


class ZeroElement(QuadError):
    pass


class NormTooLarge(QuadError):
    pass


class NotOrdinaryOrInconsistent(QuadError):
    pass


@dataclass(frozen=True)
class OrderDesc:
    d: int

    def __post_init__(self):
        if self.d >= 0 or core(-self.d) != -self.d:
            raise QuadError(f"d = {self.d} must be negative and squarefree")

    @property
    def one_mod_four(self) -> bool:
        return self.d % 4 == 1

    @property
    def disc(self) -> int:
        return self.d if self.one_mod_four else 4 * self.d

    def __call__(self, u: int, v: int = 0) -> "QuadInt":
        return QuadInt(u, v, self.d)

    @property
    def omega(self) -> "QuadInt":
        return QuadInt(0, 1, self.d)


@dataclass(frozen=True)
class QuadInt:
    """``u + v*w`` in Z[w_d]."""

    u: int
    v: int
    d: int

    @property
    def order(self) -> OrderDesc:
        return OrderDesc(self.d)

    def _lift(self, other):
        if isinstance(other, int):
            return QuadInt(other, 0, self.d)
        if isinstance(other, QuadInt):
            if other.d != self.d:
                raise QuadError("elements of different orders")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.u + other.u, self.v + other.v, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.u, -self.v, self.d)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.u - other.u, self.v - other.v, self.d)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        vv = v1 * v2
        if self.d % 4 == 1:
            return QuadInt(u1 * u2 + vv * ((self.d - 1) // 4), u1 * v2 + u2 * v1 + vv, self.d)
        return QuadInt(u1 * u2 + vv * self.d, u1 * v2 + u2 * v1, self.d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise QuadError("negative powers are not integral")
        result, base = QuadInt(1, 0, self.d), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self):
        if self.d % 4 == 1:
            return QuadInt(self.u + self.v, -self.v, self.d)
        return QuadInt(self.u, -self.v, self.d)

    def norm(self) -> int:
        u, v = self.u, self.v
        if self.d % 4 == 1:
            return u * u + u * v + v * v * ((1 - self.d) // 4)
        return u * u - self.d * v * v

    def trace(self) -> int:
        return 2 * self.u + self.v if self.d % 4 == 1 else 2 * self.u

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        sym = "i" if self.d == -1 else "w"
        if self.v == 0:
            return str(self.u)
        coef = "" if self.v == 1 else "-" if self.v == -1 else str(self.v)
        if self.u == 0:
            return f"{coef}{sym}"
        sign = "+" if self.v > 0 else "-"
        coef = "" if abs(self.v) == 1 else str(abs(self.v))
        return f"{self.u}{sign}{coef}{sym}"


def quad_arith(op: str, x: QuadInt, y=None):
    """Dispatcher over the ring operations, kept for table-driven tests."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "conj":
        return x.conj()
    if op == "pow":
        return x**y
    if op == "norm":
        return x.norm()
    raise QuadError(f"unknown operation {op!r}")


def frobenius_rep(q: int, m: int, d: int) -> QuadInt:
    """Frobenius as ``(t + f0*sqrt(d))/2`` with ``t = q + 1 - m`` and ``f0 > 0``."""
    t = q + 1 - m
    dprime = t * t - 4 * q
    if dprime >= 0:
        raise NotOrdinaryOrInconsistent(f"d' = {dprime} is not negative")
    if dprime % d:
        raise NotOrdinaryOrInconsistent(f"d = {d} does not divide d' = {dprime}")
    f0 = math.isqrt(dprime // d)
    if f0 * f0 * d != dprime or core(-d) != -d:
        raise NotOrdinaryOrInconsistent(f"d' = {dprime} is not a square times d = {d}")
    if d % 4 == 1:
        # sqrt(d) = 2w - 1
        pi = QuadInt((t - f0) // 2, f0, d)
    else:
        pi = QuadInt(t // 2, f0 // 2, d)
    assert pi.norm() == q and pi.trace() == t
    return pi


def conductor(q: int, m: int, d: int) -> int:
    """``f0`` with ``f0**2 * d = (q+1-m)**2 - 4q``."""
    t = q + 1 - m
    return math.isqrt((t * t - 4 * q) // d)


def fundamental_d(q: int, m: int) -> int:
    t = q + 1 - m
    dprime = t * t - 4 * q
    if dprime >= 0:
        raise NotOrdinaryOrInconsistent(f"d' = {dprime} is not negative")
    return -core(-dprime)


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


def _hnf(vectors):
    """HNF ``(a, b, c)`` of the lattice spanned by integer pairs ``(u, v)``."""
    pivot = None
    axis = 0
    for u, v in vectors:
        if v == 0:
            axis = math.gcd(axis, u)
            continue
        if pivot is None:
            pivot = (u, v)
            continue
        r = (u, v)
        while r[1] != 0:
            qt = pivot[1] // r[1]
            pivot, r = r, (pivot[0] - qt * r[0], pivot[1] - qt * r[1])
        axis = math.gcd(axis, r[0])
    if pivot is None or axis == 0:
        raise ZeroIdeal("generators do not span a rank-2 lattice")
    b, c = pivot
    if c < 0:
        b, c = -b, -c
    return axis, b % axis, c


@dataclass(frozen=True)
class IdealHNF:
    """Integral ideal with Z-basis ``{a, b + c*w}``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not (a > 0 and c > 0 and 0 <= b < a and a % c == 0 and b % c == 0):
            raise QuadError(f"({a}, {b}, {c}) is not an ideal HNF")
        w = QuadInt(0, 1, self.d)
        if not (self.contains(w * a) and self.contains(w * QuadInt(b, c, self.d))):
            raise QuadError(f"({a}, {b}, {c}) is not closed under w")

    @property
    def basis(self):
        return QuadInt(self.a, 0, self.d), QuadInt(self.b, self.c, self.d)

    def norm(self) -> int:
        return self.a * self.c

    def contains(self, z: QuadInt) -> bool:
        if z.v % self.c:
            return False
        return (z.u - (z.v // self.c) * self.b) % self.a == 0

    def reduce(self, z: QuadInt) -> QuadInt:
        """Canonical representative of ``z`` modulo the ideal."""
        k = z.v // self.c
        u, v = z.u - k * self.b, z.v - k * self.c
        return QuadInt(u % self.a, v, self.d)

    def __mul__(self, other: "IdealHNF") -> "IdealHNF":
        return ideal_mul(self, other)

    def __pow__(self, k: int) -> "IdealHNF":
        return ideal_pow(self, k)

    def __str__(self):
        if self.c == self.a:
            return f"({self.a})"
        return f"({self.a}, {QuadInt(self.b, self.c, self.d)})"


def unit_ideal(d: int) -> IdealHNF:
    return IdealHNF(1, 0, 1, d)


def ideal_from_gens(gens) -> IdealHNF:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ZeroIdeal("the zero ideal has no HNF")
    d = gens[0].d
    w = QuadInt(0, 1, d)
    vecs = []
    for g in gens:
        for h in (g, g * w):
            vecs.append((h.u, h.v))
    a, b, c = _hnf(vecs)
    return IdealHNF(a, b, c, d)


def principal(z: QuadInt) -> IdealHNF:
    return ideal_from_gens([z])


def ideal_mul(I: IdealHNF, J: IdealHNF) -> IdealHNF:
    prods = [x * y for x in I.basis for y in J.basis]
    vecs = [(z.u, z.v) for z in prods]
    a, b, c = _hnf(vecs)
    return IdealHNF(a, b, c, I.d)


def ideal_pow(I: IdealHNF, k: int) -> IdealHNF:
    result = unit_ideal(I.d)
    for _ in range(k):
        result = ideal_mul(result, I)
    return result


def ideal_norm(I: IdealHNF) -> int:
    return I.norm()


def ideal_contains(I: IdealHNF, z: QuadInt) -> bool:
    return I.contains(z)


# ---------------------------------------------------------------------------
# primes, valuations, factorisation
# ---------------------------------------------------------------------------


class Kind(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


_KIND_RANK = {Kind.SPLIT: 0, Kind.INERT: 1, Kind.RAMIFIED: 2}


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def _omega_roots(p: int, d: int) -> list[int]:
    """Roots mod p of the minimal polynomial of w, ascending."""
    if d % 4 == 1:
        c = ((d - 1) // 4) % p
        if p == 2:
            return [t for t in range(2) if (t * t - t - c) % 2 == 0]
        inv2 = pow(2, -1, p)
        return sorted({(1 + s) * inv2 % p for s in sqrt_mod(d % p, p, all_roots=True)})
    if p == 2:
        return [d % 2]
    return sorted(sqrt_mod(d % p, p, all_roots=True))


@dataclass(frozen=True)
class Splitting:
    kind: Kind
    roots: tuple[int, ...]

    def primes(self, p: int, d: int) -> list[IdealHNF]:
        if self.kind is Kind.INERT:
            return [IdealHNF(p, 0, p, d)]
        return [IdealHNF(p, (-t) % p, 1, d) for t in self.roots]


def splitting_type(p: int, order: OrderDesc | int) -> Splitting:
    d = order.d if isinstance(order, OrderDesc) else order
    if not isprime(p):
        raise QuadError(f"{p} is not prime")
    disc = d if d % 4 == 1 else 4 * d
    k = kronecker(disc, p)
    if k == 1:
        return Splitting(Kind.SPLIT, tuple(_omega_roots(p, d)))
    if k == -1:
        return Splitting(Kind.INERT, ())
    return Splitting(Kind.RAMIFIED, tuple(_omega_roots(p, d)))


@dataclass(frozen=True)
class PrimeIdealFactor:
    p: int
    kind: Kind
    ideal: IdealHNF
    exponent: int = 1

    @property
    def residue_norm(self) -> int:
        """N(B): p for split and ramified primes, p**2 for inert ones."""
        return self.ideal.norm()

    def with_exponent(self, e: int) -> "PrimeIdealFactor":
        return PrimeIdealFactor(self.p, self.kind, self.ideal, e)

    def power(self, k: int | None = None) -> IdealHNF:
        return ideal_pow(self.ideal, self.exponent if k is None else k)

    def __str__(self):
        e = f"^{self.exponent}" if self.exponent != 1 else ""
        return f"{self.ideal}{e}"


def valuation(z: QuadInt, B: PrimeIdealFactor | IdealHNF) -> int:
    """Largest h with z in B**h."""
    ideal = B.ideal if isinstance(B, PrimeIdealFactor) else B
    if z.is_zero():
        raise ZeroElement("valuation of zero")
    bound = 0
    nz, nb = z.norm(), ideal.norm()
    while nz % nb == 0:
        nz //= nb
        bound += 1
    h, power = 0, unit_ideal(z.d)
    while h < bound:
        nxt = ideal_mul(power, ideal)
        if not nxt.contains(z):
            break
        power, h = nxt, h + 1
    return h


@dataclass(frozen=True)
class Factorization:
    """Prime ideal factorisation of a principal ideal ``(z)``.

    Factors run split, then inert, then ramified; ``j``, ``k``, ``l`` are
    the cumulative boundaries of those three blocks.
    """

    z: QuadInt
    factors: tuple[PrimeIdealFactor, ...]
    cofactor: IdealHNF = field(default=None)

    @property
    def jkl(self) -> tuple[int, int, int]:
        kinds = [f.kind for f in self.factors]
        j = kinds.count(Kind.SPLIT)
        k = j + kinds.count(Kind.INERT)
        return j, k, len(kinds)

    def exponent_of(self, ideal: IdealHNF) -> int:
        for f in self.factors:
            if f.ideal == ideal:
                return f.exponent
        return 0

    def rebuild(self) -> IdealHNF:
        out = unit_ideal(self.z.d)
        for f in self.factors:
            out = ideal_mul(out, f.power())
        return ideal_mul(out, self.cofactor) if self.cofactor is not None else out

    def __str__(self):
        return " * ".join(str(f) for f in self.factors) or "(1)"


def factor_principal(z: QuadInt, cap: int = NORM_CAP) -> Factorization:
    if z.is_zero():
        raise ZeroElement("cannot factor zero")
    nz = z.norm()
    if nz > cap:
        raise NormTooLarge(f"N(z) = {nz} exceeds the cap {cap}")
    factors = []
    for p, e in sorted(factorint(nz).items()):
        sp = splitting_type(p, z.d)
        for ideal in sp.primes(p, z.d):
            v = valuation(z, ideal)
            if v:
                factors.append(PrimeIdealFactor(p, sp.kind, ideal, v))
        contributed = sum(f.exponent * (2 if f.kind is Kind.INERT else 1) for f in factors if f.p == p)
        if contributed != e:
            raise AssertionError(f"valuations at {p} do not account for p^{e} in N(z)")
    factors.sort(key=lambda f: (_KIND_RANK[f.kind], f.p, f.ideal.b))
    out = Factorization(z, tuple(factors), unit_ideal(z.d))
    if out.rebuild() != principal(z):
        raise AssertionError(f"factorisation of {z} does not rebuild (z)")
    return out
