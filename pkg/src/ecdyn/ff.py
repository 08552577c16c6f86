"""Finite fields F_{p^k} in a polynomial basis, polynomials over them, and
the vertex labelling of P^1 by discrete logarithms.

Elements are stored as the integer ``sum(c_i * p**i)`` of their coordinates
``c_0..c_{k-1}`` over F_p.  Scalar arithmetic is plain polynomial arithmetic
modulo the field modulus and never touches the lookup tables; the tables
(``exp``/``log``/``zech``) are built lazily and drive the vectorised kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import factorint, isprime

from . import _kernels


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


# ---------------------------------------------------------------------------
# dense polynomials over F_p as lists of ints, lowest degree first
# ---------------------------------------------------------------------------


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _fp_mod(a, m, p):
    a = list(a)
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        if c:
            shift = len(a) - 1 - dm
            for i, y in enumerate(m):
                a[shift + i] = (a[shift + i] - c * y) % p
        a.pop()
        _trim(a)
    return _trim(a)


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _fp_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_powmod_x(e, m, p):
    """x**e mod m over F_p."""
    result, base = [1], _fp_mod([0, 1], m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), m, p)
        base = _fp_mod(_fp_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(modulus, p):
    """Rabin's test for a monic polynomial over F_p (coefficients low first)."""
    k = len(modulus) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if _fp_sub(_fp_powmod_x(p**k, modulus, p), [0, 1], p):
        return False
    for ell in factorint(k):
        h = _fp_sub(_fp_powmod_x(p ** (k // ell), modulus, p), [0, 1], p)
        if len(_fp_gcd(modulus, h, p)) != 1:
            return False
    return True


def _smallest_irreducible(p, k):
    # ranked by the integer sum(c_i p^i) of the non-leading coefficients
    for n in range(p**k):
        low = [(n // p**i) % p for i in range(k)]
        if low[0] == 0:
            continue
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("an irreducible polynomial of every degree exists")


# ---------------------------------------------------------------------------
# fields and elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldTables:
    exp: np.ndarray  # exp[m] = integer encoding of g**m
    log: np.ndarray  # log[enc] = m, log[0] = -1
    zech: np.ndarray  # zech[m] = log(1 + g**m)


class FieldDesc:
    """The field F_{p^k} with a fixed modulus and primitive element ``g``.

    Use :func:`fld_make` rather than calling this directly.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.degree = k
        self.modulus = modulus if k > 1 else None
        self.order = p**k
        self._mod = list(modulus) if k > 1 else None
        self.g = find_primitive(self)

    def __repr__(self):
        return f"FieldDesc(p={self.p}, degree={self.degree}, modulus={self.modulus})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldDesc)
            and self.p == other.p
            and self.degree == other.degree
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.degree, self.modulus))

    # -- construction helpers ------------------------------------------------

    def __call__(self, value) -> "FieldElem":
        """Coerce an int (reduced mod p), a coordinate list, or an element."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                raise FieldError("too many coordinates")
            return FieldElem(self, sum((int(c) % self.p) * self.p**i for i, c in enumerate(value)))
        return FieldElem(self, int(value) % self.p)

    def from_int(self, enc: int) -> "FieldElem":
        if not 0 <= enc < self.order:
            raise FieldError(f"encoding {enc} out of range")
        return FieldElem(self, enc)

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    def elements(self):
        return (FieldElem(self, i) for i in range(self.order))

    # -- raw coordinate arithmetic ---------------------------------------------

    def coords(self, enc: int) -> list[int]:
        p = self.p
        return [(enc // p**i) % p for i in range(self.degree)]

    def encode(self, coeffs) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _mul_enc(self, a: int, b: int) -> int:
        if self.degree == 1:
            return a * b % self.p
        prod = _fp_mul(_trim(self.coords(a)), _trim(self.coords(b)), self.p)
        return self.encode(_fp_mod(prod, self._mod, self.p))

    def _add_enc(self, a: int, b: int, sign: int = 1) -> int:
        if self.degree == 1:
            return (a + sign * b) % self.p
        ca, cb = self.coords(a), self.coords(b)
        return self.encode([(x + sign * y) % self.p for x, y in zip(ca, cb)])

    def mul_matrix(self, h: "FieldElem") -> np.ndarray:
        """Matrix M over F_p with coords(v*h) = M @ coords(v)."""
        k = self.degree
        cols = []
        for j in range(k):
            basis = FieldElem(self, self.p**j)
            cols.append(self.coords((basis * h).value))
        return np.array(cols, dtype=np.int64).T

    # -- tables ------------------------------------------------------------------

    @cached_property
    def tables(self) -> FieldTables:
        n = self.order - 1
        exp = _kernels.build_exp_table(self.mul_matrix(self.g), self.p, self.degree, self.order)
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("generator does not have full order")
        c0 = exp % self.p
        plus_one = exp - c0 + (c0 + 1) % self.p
        zech = log[plus_one]
        return FieldTables(exp=exp, log=log, zech=zech)

    def log_of(self, x: "FieldElem") -> int:
        """Discrete log of ``x`` to base g, or -1 for zero."""
        return int(self.tables.log[self(x).value])

    def from_log(self, m: int) -> "FieldElem":
        if m < 0:
            return self.zero
        return FieldElem(self, int(self.tables.exp[m % (self.order - 1)]))

    # -- subfields ---------------------------------------------------------------

    def has_subfield(self, sub_degree: int) -> bool:
        return self.degree % sub_degree == 0

    def subfield_logs(self, sub_degree: int) -> np.ndarray:
        """Logs of the nonzero elements of the subfield of order p**sub_degree."""
        if not self.has_subfield(sub_degree):
            raise FieldError(f"no subfield of degree {sub_degree} in {self!r}")
        step = (self.order - 1) // (self.p**sub_degree - 1)
        return np.arange(0, self.order - 1, step, dtype=np.int64)

    def in_subfield(self, x: "FieldElem", sub_degree: int) -> bool:
        return x ** (self.p**sub_degree) == x


@dataclass(frozen=True, eq=False)
class FieldElem:
    field: FieldDesc
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.coords(self.value))

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("operands live in different fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return isinstance(other, FieldElem) and other.field == self.field and other.value == self.value

    def __hash__(self):
        return hash((self.field.order, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        if self.field.degree == 1:
            return f"{self.value}"
        return f"F{self.field.order}{self.coeffs}"

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, self.field._add_enc(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, self.field._add_enc(self.value, other.value, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FieldElem(self.field, self.field._add_enc(0, self.value, -1))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, self.field._mul_enc(self.value, other.value))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def frobenius(self, power: int = 1):
        return self ** (self.field.p**power)


def fld_make(p: int, s: int = 1, modulus=None) -> FieldDesc:
    """Build F_{p^s}.

    ``modulus`` is an optional monic irreducible polynomial of degree ``s``
    given as coefficients, lowest first.  Without it the smallest
    irreducible (by the integer encoding of its lower coefficients) is used.
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if s < 1:
        raise FieldError("extension degree must be at least 1")
    if s == 1:
        return FieldDesc(p, 1, None)
    if modulus is None:
        modulus = _smallest_irreducible(p, s)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {s}")
        if not is_irreducible(list(modulus), p):
            raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
    return FieldDesc(p, s, modulus)


def find_primitive(fd: FieldDesc) -> FieldElem:
    """Smallest element (by integer encoding) of multiplicative order q - 1."""
    n = fd.order - 1
    if n == 1:
        return FieldElem(fd, 1)
    cofactors = [n // ell for ell in factorint(n)]
    for enc in range(1, fd.order):
        cand = FieldElem(fd, enc)
        if all(cand**c != 1 for c in cofactors):
            return cand
    raise AssertionError("primitive element must exist")


# ---------------------------------------------------------------------------
# P^1 vertices and labels
# ---------------------------------------------------------------------------

INFINITY = None  # the point at infinity of P^1 is represented by None

INF_LABEL = "∞"
ZERO_LABEL = "'0'"


def vertex_label(v: FieldElem | None, fd: FieldDesc | None = None) -> str:
    if v is None:
        return INF_LABEL
    if not v:
        return ZERO_LABEL
    fd = fd or v.field
    return str(fd.log_of(v))


def vertex_id(v: FieldElem | None) -> int:
    """Graph index: 0 for infinity, 1 for zero, 2 + log for g**log."""
    if v is None:
        return _kernels.INF_ID
    if not v:
        return _kernels.ZERO_ID
    return 2 + v.field.log_of(v)


def vertex_from_id(fd: FieldDesc, i: int) -> FieldElem | None:
    if i == _kernels.INF_ID:
        return None
    if i == _kernels.ZERO_ID:
        return fd.zero
    return fd.from_log(i - 2)


def label_from_id(i: int) -> str:
    if i == _kernels.INF_ID:
        return INF_LABEL
    if i == _kernels.ZERO_ID:
        return ZERO_LABEL
    return str(i - 2)


# ---------------------------------------------------------------------------
# polynomials over a field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial; ``coeffs`` lowest degree first, trailing zeros trimmed."""

    field: FieldDesc
    coeffs: tuple = ()

    def __post_init__(self):
        cs = [self.field(c) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_desc(cls, fd, desc):
        """Build from coefficients listed highest degree first."""
        return cls(fd, tuple(reversed(list(desc))))

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x: FieldElem) -> FieldElem:
        return poly_eval(self, x)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        return Poly(
            self.field,
            tuple(
                (self.coeffs[i] if i < len(self.coeffs) else z) + (other.coeffs[i] if i < len(other.coeffs) else z)
                for i in range(n)
            ),
        )

    def __neg__(self):
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElem) or isinstance(other, int):
            return Poly(self.field, tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Poly(self.field, ())
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return Poly(self.field, tuple(out))

    __rmul__ = __mul__

    def divmod(self, other):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead_inv = other.coeffs[-1].inverse()
        quot = [self.field.zero] * max(len(rem) - dq, 0)
        while len(rem) - 1 >= dq and rem:
            c = rem[-1] * lead_inv
            shift = len(rem) - 1 - dq
            quot[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Poly(self.field, tuple(quot)), Poly(self.field, tuple(rem))

    def monic(self):
        return self * self.coeffs[-1].inverse()

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a else a

    def log_coeffs(self) -> np.ndarray:
        """Coefficients as discrete logs (-1 for zero), for the kernels."""
        return np.array([self.field.log_of(c) for c in self.coeffs] or [-1], dtype=np.int64)


def poly_eval(f: Poly, x: FieldElem) -> FieldElem:
    acc = f.field.zero
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def eval_all(f: Poly) -> np.ndarray:
    """Logs of f(x) for x = g**0 .. g**(q-2) followed by x = 0."""
    fd = f.field
    n = fd.order - 1
    xs = np.concatenate([np.arange(n, dtype=np.int64), np.array([-1], dtype=np.int64)])
    return _kernels.horner_logs(f.log_coeffs(), xs, fd.tables.zech, n)
