"""Weierstrass curves over F_q, viewed inside a host field F_{q^n}.

The host field is the single field every vertex of the graph lives in; the
curve coefficients must lie in its subfield F_q.  Points are ``None`` for
the point at infinity or an ``(x, y)`` pair of host-field elements.
"""

from __future__ import annotations

import enum
import random
import warnings
from dataclasses import dataclass

import numpy as np

from .ff import FieldDesc, FieldElem, Poly, eval_all, fld_make
from .quadorder import QuadInt

O = None  # the point at infinity


class CurveError(ValueError):
    pass


class SingularCurve(CurveError):
    pass


class NotOrdinary(CurveError):
    pass


class ScaleExceeded(CurveError):
    pass


class MissingYComponent(CurveError):
    pass


class GeneralFormWarning(UserWarning):
    pass


MAX_FIELD = 2_000_000


@dataclass(frozen=True)
class Curve:
    """``y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`` over F_q."""

    field: FieldDesc
    q: int
    a1: FieldElem
    a2: FieldElem
    a3: FieldElem
    a4: FieldElem
    a6: FieldElem

    def __post_init__(self):
        fd = self.field
        s = _log_p(self.q, fd.p)
        if fd.degree % s:
            raise CurveError(f"F_{self.q} is not a subfield of F_{fd.order}")
        for name in ("a1", "a2", "a3", "a4", "a6"):
            c = fd(getattr(self, name))
            object.__setattr__(self, name, c)
            if c ** self.q != c:
                raise CurveError(f"{name} = {c!r} does not lie in F_{self.q}")
        if not self.discriminant():
            raise SingularCurve("discriminant is zero")

    @classmethod
    def short(cls, fd: FieldDesc, q: int, A, B) -> "Curve":
        z = fd.zero
        return cls(fd, q, z, z, z, fd(A), fd(B))

    @property
    def s(self) -> int:
        return _log_p(self.q, self.field.p)

    @property
    def n(self) -> int:
        return self.field.degree // self.s

    @property
    def is_short(self) -> bool:
        return not (self.a1 or self.a2 or self.a3)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> FieldElem:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    # polynomials in x attached to the equation
    def rhs(self) -> Poly:
        return Poly(self.field, (self.a6, self.a4, self.a2, self.field.one))

    def h(self) -> Poly:
        return Poly(self.field, (self.a3, self.a1))

    def two_division(self) -> Poly:
        """``(a1 x + a3)^2 + 4 f(x)``; its roots are the x of the 2-torsion (odd p)."""
        h = self.h()
        return h * h + self.rhs() * 4

    def with_field(self, fd: FieldDesc, image) -> "Curve":
        return Curve(fd, self.q, *(image(c) for c in (self.a1, self.a2, self.a3, self.a4, self.a6)))


def _log_p(q, p):
    s, r = 0, 1
    while r < q:
        r *= p
        s += 1
    if r != q:
        raise CurveError(f"{q} is not a power of {p}")
    return s


# ---------------------------------------------------------------------------
# points and group law
# ---------------------------------------------------------------------------


def on_curve(C: Curve, P) -> bool:
    if P is O:
        return True
    x, y = P
    return y * y + C.a1 * x * y + C.a3 * y == x * x * x + C.a2 * x * x + C.a4 * x + C.a6


def point_neg(C: Curve, P):
    if P is O:
        return O
    x, y = P
    return (x, -y - C.a1 * x - C.a3)


def point_add(C: Curve, P, Q):
    if P is O:
        return Q
    if Q is O:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + C.a1 * x2 + C.a3 == 0:
            return O
        lam = (3 * x1 * x1 + 2 * C.a2 * x1 + C.a4 - C.a1 * y1) / (2 * y1 + C.a1 * x1 + C.a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + C.a1 * lam - C.a2 - x1 - x2
    y3 = -(lam + C.a1) * x3 - nu - C.a3
    return (x3, y3)


def point_mul(C: Curve, k: int, P):
    if k < 0:
        return point_mul(C, -k, point_neg(C, P))
    result, base = O, P
    while k:
        if k & 1:
            result = point_add(C, result, base)
        base = point_add(C, base, base)
        k >>= 1
    return result


def frobenius_point(C: Curve, P, power: int = 1):
    if P is O:
        return O
    e = C.q**power
    return (P[0] ** e, P[1] ** e)


def sqrt(x: FieldElem) -> FieldElem | None:
    fd = x.field
    if not x:
        return x
    if fd.p == 2:
        return x ** (fd.order // 2)
    m = fd.log_of(x)
    if m % 2:
        return None
    return fd.from_log(m // 2)


def y_solutions(C: Curve, x: FieldElem) -> list[FieldElem]:
    """All y in the host field with (x, y) on the curve."""
    fd = C.field
    hx, fx = C.h()(x), C.rhs()(x)
    if fd.p != 2:
        r = sqrt(hx * hx + 4 * fx)
        if r is None:
            return []
        inv2 = fd(2).inverse()
        ys = {((r - hx) * inv2).value, ((-r - hx) * inv2).value}
        return [fd.from_int(v) for v in sorted(ys)]
    if not hx:
        return [sqrt(fx)]
    # y = hx * z with z^2 + z = fx / hx^2; brute force is fine at this scale
    c = fx / (hx * hx)
    if _trace2(c):
        return []
    for z in fd.elements():
        if z * z + z == c:
            return sorted([hx * z, hx * (z + 1)], key=lambda e: e.value)
    raise AssertionError("trace zero implies a root")


def _trace2(c: FieldElem) -> int:
    acc, t = c.field.zero, c
    for _ in range(c.field.degree):
        acc = acc + t
        t = t * t
    return acc.value


def points(C: Curve):
    """Iterate over E(host field), point at infinity first."""
    yield O
    for x in C.field.elements():
        for y in y_solutions(C, x):
            yield (x, y)


def sample_points(C: Curve, count: int, seed: int = 0):
    """Deterministic sample of affine points with y in the host field."""
    rng = random.Random(seed)
    fd = C.field
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count + fd.order:
        tries += 1
        x = fd.from_int(rng.randrange(fd.order))
        ys = y_solutions(C, x)
        if ys:
            out.append((x, ys[rng.randrange(len(ys))]))
    return out


# ---------------------------------------------------------------------------
# vectorised classification and point counts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassFlags:
    """Per-vertex membership in A_n, B_n and E_0 (vertex ids as in the kernels)."""

    in_A: np.ndarray
    in_B: np.ndarray
    in_E0: np.ndarray


def _finite_to_ids(values_by_x):
    """Reorder per-x arrays (g^0..g^{N-1}, then 0) into vertex-id order."""
    return np.concatenate([[values_by_x[-1]], values_by_x[:-1]])


def class_flags(C: Curve) -> ClassFlags:
    fd = C.field
    if fd.order > MAX_FIELD:
        raise ScaleExceeded(f"{fd.order} elements is beyond desk scale")
    n = fd.order - 1
    if fd.p != 2:
        dl = eval_all(C.two_division())
        e0 = dl < 0
        a = e0 | (dl % 2 == 0)
        b = e0 | (dl % 2 == 1)
    else:
        hl = eval_all(C.h())
        fl = eval_all(C.rhs())
        e0 = hl < 0
        # w = f / h^2 in the log domain
        wl = np.where(e0 | (fl < 0), -1, (fl - 2 * hl) % n)
        tr = _trace_table(fd)
        enc = np.where(wl < 0, 0, fd.tables.exp[np.maximum(wl, 0)])
        solvable = tr[enc] == 0
        a = e0 | solvable
        b = e0 | ~solvable
    head = np.array([True])
    return ClassFlags(
        in_A=np.concatenate([head, _finite_to_ids(a)]),
        in_B=np.concatenate([head, _finite_to_ids(b)]),
        in_E0=np.concatenate([head, _finite_to_ids(e0)]),
    )


def _trace_table(fd: FieldDesc) -> np.ndarray:
    """Absolute trace to F_2 of every element, indexed by encoding."""
    basis = [_trace2(fd.from_int(2**j)) for j in range(fd.degree)]
    enc = np.arange(fd.order)
    bits = np.array([(enc >> j) & 1 for j in range(fd.degree)])
    return (np.array(basis) @ bits) % 2


def classify_x(C: Curve, x: FieldElem | None) -> dict:
    """Membership flags of one vertex; same answer as :func:`class_flags`."""
    if x is None:
        return {"in_A": True, "in_B": True, "in_E0": True}
    fd = C.field
    if fd.p != 2:
        disc = C.two_division()(x)
        if not disc:
            return {"in_A": True, "in_B": True, "in_E0": True}
        sq = fd.log_of(disc) % 2 == 0
        return {"in_A": sq, "in_B": not sq, "in_E0": False}
    hx = C.h()(x)
    if not hx:
        return {"in_A": True, "in_B": True, "in_E0": True}
    ok = _trace2(C.rhs()(x) / (hx * hx)) == 0
    return {"in_A": ok, "in_B": not ok, "in_E0": False}


def e0_set(C: Curve) -> list:
    """Infinity plus the x-coordinates of the host-rational 2-torsion."""
    flags = class_flags(C)
    from .ff import vertex_from_id

    return [vertex_from_id(C.field, int(i)) for i in np.flatnonzero(flags.in_E0)]


def _count_in_host(C: Curve, sub_degree: int) -> int:
    fd = C.field
    sub_logs = fd.subfield_logs(sub_degree)
    xs = [fd.zero] + [fd.from_log(int(m)) for m in sub_logs]
    if fd.p != 2:
        step = (fd.order - 1) // (fd.p**sub_degree - 1)
        dl = eval_all(C.two_division())
        vals = np.concatenate([[dl[-1]], dl[sub_logs]])
        chi = np.where(vals < 0, 0, np.where((vals // step) % 2 == 0, 1, -1))
        return int(1 + len(xs) + chi.sum())
    total = 1
    for x in xs:
        hx = C.h()(x)
        if not hx:
            total += 1
            continue
        c = C.rhs()(x) / (hx * hx)
        acc, t = fd.zero, c
        for _ in range(sub_degree):
            acc, t = acc + t, t * t
        total += 0 if acc else 2
    return total


def embed_field(src: FieldDesc, sub_degree: int, dst: FieldDesc):
    """Field map from the degree-``sub_degree`` subfield of ``src`` into ``dst``."""
    if dst.degree % sub_degree:
        raise CurveError("target has no such subfield")
    step = (src.order - 1) // (src.p**sub_degree - 1)
    gamma = src.g**step
    minpoly = Poly(src, (src.one,))
    conj = gamma
    for _ in range(sub_degree):
        minpoly = minpoly * Poly(src, (-conj, src.one))
        conj = conj**src.p
    lifted = Poly(dst, tuple(dst(c.value) for c in minpoly.coeffs))
    vals = eval_all(lifted)
    n = dst.order - 1
    roots = np.flatnonzero(vals[:n] < 0)
    root = dst.from_log(int(roots[0]))

    def image(c: FieldElem) -> FieldElem:
        if not c:
            return dst.zero
        m = src.log_of(c)
        if m % step:
            raise CurveError(f"{c!r} is not in the subfield")
        return root ** (m // step)

    return image


def count_points(C: Curve, t: int = 1) -> int:
    """|E(F_{q^t})| by enumerating x and solving for y."""
    s = C.s
    fd = C.field
    if fd.degree % (s * t) == 0:
        m = _count_in_host(C, s * t)
    else:
        if fd.p ** (s * t) > MAX_FIELD:
            raise ScaleExceeded(f"F_{C.q}^{t} is beyond desk scale")
        big = fld_make(fd.p, s * t)
        m = _count_in_host(C.with_field(big, embed_field(fd, s, big)), s * t)
    if t > 1:
        expected = count_from_trace(C.q, count_points(C, 1), t)
        if m != expected:
            raise AssertionError(f"enumeration {m} disagrees with trace recurrence {expected}")
    return m


def count_from_trace(q: int, m1: int, t: int) -> int:
    tr = q + 1 - m1
    s_prev, s_cur = 2, tr
    for _ in range(t - 1):
        s_prev, s_cur = s_cur, tr * s_cur - q * s_prev
    return q**t + 1 - s_cur


def check_ordinary(C: Curve, m: int | None = None) -> int:
    """Return |E(F_q)|, raising :class:`NotOrdinary` when p divides the trace."""
    m = count_points(C, 1) if m is None else m
    if (C.q + 1 - m) % C.field.p == 0:
        raise NotOrdinary(f"trace {C.q + 1 - m} is divisible by p = {C.field.p}")
    if not C.is_short and (C.a1 or C.a3):
        warnings.warn(
            "a1 or a3 is nonzero: E_0 is taken as the x of the 2-torsion, not the literal y = 0 set",
            GeneralFormWarning,
            stacklevel=2,
        )
    return m


# ---------------------------------------------------------------------------
# endomorphisms given as rational maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EndoMap:
    """``(x, y) -> (a(x)/b(x), y * alpha2(x))`` with ``a/b`` in lowest terms."""

    a: Poly
    b: Poly
    quad_rep: QuadInt
    alpha2: tuple[Poly, Poly] | None = None
    cancelled: Poly | None = None

    @property
    def degree(self) -> int:
        return max(self.a.degree, self.b.degree)

    def x_map(self, x: FieldElem | None) -> FieldElem | None:
        if x is None:
            return None
        bx = self.b(x)
        if not bx:
            return None
        return self.a(x) / bx


def make_endo(a: Poly, b: Poly, quad_rep: QuadInt, alpha2=None) -> EndoMap:
    g = a.gcd(b)
    cancelled = None
    if g.degree > 0:
        warnings.warn(f"a(x) and b(x) share a factor of degree {g.degree}; it is cancelled", stacklevel=2)
        a, b, cancelled = a.divmod(g)[0], b.divmod(g)[0], g
    return EndoMap(a, b, quad_rep, alpha2, cancelled)


def apply_endo(C: Curve, alpha: EndoMap, P):
    """Full image of a point; needs the y-component of the map."""
    if P is O:
        return O
    x, y = P
    if not alpha.b(x):
        return O
    if alpha.alpha2 is None:
        raise MissingYComponent("the endomorphism has no y-component")
    num, den = alpha.alpha2
    return (alpha.x_map(x), y * num(x) / den(x))


def mul2_endo(C: Curve, d: int) -> EndoMap:
    """Multiplication by 2 on a short Weierstrass curve, with its y-map."""
    if not C.is_short:
        raise CurveError("builtin maps need a short Weierstrass curve")
    fd, A, B = C.field, C.a4, C.a6
    a = Poly(fd, (A * A, -8 * B, -2 * A, fd.zero, fd.one))
    b = Poly(fd, (4 * B, 4 * A, fd.zero, fd(4)))
    f = C.rhs()
    phi = Poly(fd, (-A * A * A - 8 * B * B, -4 * A * B, -5 * A * A, 20 * B, 5 * A, fd.zero, fd.one))
    return make_endo(a, b, QuadInt(2, 0, d), alpha2=(phi, f * f * 8))


def mul3_endo(C: Curve, d: int) -> EndoMap:
    """Multiplication by 3 on a short Weierstrass curve (x-map only)."""
    if not C.is_short:
        raise CurveError("builtin maps need a short Weierstrass curve")
    fd, A, B = C.field, C.a4, C.a6
    x = Poly(fd, (fd.zero, fd.one))
    psi3 = Poly(fd, (-A * A, 12 * B, 6 * A, fd.zero, fd(3)))
    phi = Poly(fd, (-A * A * A - 8 * B * B, -4 * A * B, -5 * A * A, 20 * B, 5 * A, fd.zero, fd.one))
    den = psi3 * psi3
    num = x * den - C.rhs() * phi * 8
    return make_endo(num, den, QuadInt(3, 0, d))


def frobenius_endo(C: Curve, pi: QuadInt) -> EndoMap:
    fd = C.field
    a = Poly(fd, tuple([fd.zero] * C.q + [fd.one]))
    return make_endo(a, Poly(fd, (fd.one,)), pi)


def scaled_frobenius_endo(C: Curve, k: int, pi: QuadInt) -> EndoMap:
    """``[k] o pi_q``: substitute x^q into the x-map of [k]."""
    base = {2: mul2_endo, 3: mul3_endo}[k](C, pi.d)
    fd = C.field

    def spread(f: Poly) -> Poly:
        out = [fd.zero] * (C.q * len(f.coeffs))
        for i, c in enumerate(f.coeffs):
            out[C.q * i] = c
        return Poly(fd, tuple(out))

    return make_endo(spread(base.a), spread(base.b), pi * k)


# ---------------------------------------------------------------------------
# consistency of a rational map with its claimed element of End(E)
# ---------------------------------------------------------------------------


class Verdict(str, enum.Enum):
    PASS = "pass"
    PASS_DEGREE_ONLY = "pass-degree-only"
    FAIL = "fail"


@dataclass(frozen=True)
class ValidationReport:
    verdict: Verdict
    degree: int
    norm: int
    samples_checked: int
    mismatches: int
    relation: str

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.FAIL


def validate_endo_rep(C: Curve, alpha: EndoMap, pi: QuadInt, samples: int = 24, seed: int = 0) -> ValidationReport:
    """Check the map against ``quad_rep`` by degree and on sampled points.

    With ``pi = s + t*w`` and ``quad_rep = u + v*w`` we have
    ``t * alpha = (t*u - v*s) + v * pi``, an identity between endomorphisms
    that only involves Frobenius and integer multiples, so its x-coordinate
    can be checked against ``a/b`` on any rational point.
    """
    rep = alpha.quad_rep
    norm = rep.norm()
    deg = alpha.degree
    if deg != norm:
        return ValidationReport(Verdict.FAIL, deg, norm, 0, 0, "degree differs from the norm")
    t = pi.v
    k_int, k_frob = t * rep.u - rep.v * pi.u, rep.v
    relation = f"{t}*alpha = {k_int} + {k_frob}*pi"
    checked = bad = 0
    for P in sample_points(C, samples, seed):
        lhs_pt = point_mul(C, t, P)
        lhs = alpha.x_map(None if lhs_pt is O else lhs_pt[0])
        rhs_pt = point_add(C, point_mul(C, k_int, P), point_mul(C, k_frob, frobenius_point(C, P)))
        rhs = None if rhs_pt is O else rhs_pt[0]
        checked += 1
        if lhs != rhs:
            bad += 1
    if checked == 0:
        return ValidationReport(Verdict.PASS_DEGREE_ONLY, deg, norm, 0, 0, relation)
    verdict = Verdict.PASS if bad == 0 else Verdict.FAIL
    return ValidationReport(verdict, deg, norm, checked, bad, relation)
