"""Predict cycles and trees of r from ideal factorisations, then check them.

The x-coordinates in ``A_n`` (resp. ``B_n``) are the points of
``R/(pi^n - 1)`` (resp. ``R/(pi^n + 1)``) up to sign.  Splitting
``(delta)`` into the part coprime to ``(alpha)`` (``Ic``, where alpha acts
invertibly, giving cycles) and the rest (``It``, where alpha is nilpotent,
giving trees) turns counting cycles and tree levels into counting elements
of given annihilator in quotients of ``R``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .curve import Curve, EndoMap, check_ordinary, e0_set
from .dynamics import CLASSES, FunctionalGraph, cycle_census, stability_violations, tree_profile, tree_profiles
from .ff import label_from_id, vertex_id
from .quadorder import (
    Factorization,
    IdealHNF,
    Kind,
    PrimeIdealFactor,
    QuadInt,
    factor_principal,
    frobenius_rep,
    ideal_mul,
    ideal_pow,
    unit_ideal,
)


class LevelOutOfRange(ValueError):
    pass


class SearchCapExceeded(ArithmeticError):
    pass


SIGNS = {"A": -1, "B": +1}


def delta_of(pi: QuadInt, n: int, tag: str) -> QuadInt:
    """``pi^n - 1`` for A, ``pi^n + 1`` for B."""
    return pi**n + SIGNS[tag]


@dataclass(frozen=True)
class DeltaSplit:
    tag: str
    delta: QuadInt
    Ic: tuple[PrimeIdealFactor, ...]
    It: tuple[PrimeIdealFactor, ...]


def split_ct(tag: str, delta_f: Factorization, alpha_f: Factorization) -> DeltaSplit:
    ic, it = [], []
    for f in delta_f.factors:
        (it if alpha_f.exponent_of(f.ideal) else ic).append(f)
    return DeltaSplit(tag, delta_f.z, tuple(ic), tuple(it))


def level_bound(f: PrimeIdealFactor) -> int:
    """Largest level h allowed for this prime power."""
    if f.kind is Kind.RAMIFIED:
        return (f.exponent + 1) // 2
    return f.exponent


def n_count(f: PrimeIdealFactor, h: int) -> int:
    """Elements of ``R/B^e`` of additive order exactly ``p^h``."""
    if not 0 <= h <= level_bound(f):
        raise LevelOutOfRange(f"h = {h} outside [0, {level_bound(f)}] for {f}")
    if h == 0:
        return 1
    p, e = f.p, f.exponent
    if f.kind is Kind.SPLIT:
        return p**h - p ** (h - 1)
    if f.kind is Kind.INERT or e % 2 == 0 or 2 * h < e + 1:
        return p ** (2 * h) - p ** (2 * (h - 1))
    return p ** (2 * h - 1) - p ** (2 * (h - 1))


def ann_count(f: PrimeIdealFactor, k: int) -> int:
    """Elements of ``R/B^e`` whose annihilator is exactly ``B^k``."""
    if not 0 <= k <= f.exponent:
        raise LevelOutOfRange(f"k = {k} outside [0, {f.exponent}] for {f}")
    if k == 0:
        return 1
    nb = f.residue_norm
    return nb**k - nb ** (k - 1)


def ann_to_level(f: PrimeIdealFactor, k: int) -> int:
    """Additive order exponent of the elements with annihilator ``B^k``."""
    return (k + 1) // 2 if f.kind is Kind.RAMIFIED else k


def s_min(alpha: QuadInt, ideal: IdealHNF, cap: int | None = None) -> tuple[int, int]:
    """Least v >= 1 with ``alpha^v = eps mod ideal``, eps = +1 or -1."""
    if ideal.norm() == 1:
        return 1, +1
    cap = ideal.norm() if cap is None else cap
    w = ideal.reduce(alpha)
    for v in range(1, cap + 1):
        if ideal.contains(w - 1):
            return v, +1
        if ideal.contains(w + 1):
            return v, -1
        w = ideal.reduce(w * alpha)
    raise SearchCapExceeded(f"alpha is not invertible modulo {ideal}")


@dataclass(frozen=True)
class CycleClass:
    h: tuple[int, ...]  # additive-order levels
    ann: tuple[int, ...]  # annihilator exponents, one per prime of Ic
    n_counts: tuple[int, ...]
    s_primes: tuple[tuple[int, int], ...]
    s_prime: int
    s: int
    count: int
    excluded: bool = False
    reason: str = ""


def cycle_class(split: DeltaSplit, ann: tuple[int, ...], alpha: QuadInt) -> CycleClass:
    d = split.delta.d
    h = tuple(ann_to_level(f, k) for f, k in zip(split.Ic, ann))
    ns = tuple(ann_count(f, k) for f, k in zip(split.Ic, ann))
    total = math.prod(ns)
    ideal = unit_ideal(d)
    for f, k in zip(split.Ic, ann):
        ideal = ideal_mul(ideal, ideal_pow(f.ideal, k))
    if ideal.contains(QuadInt(2, 0, d)):
        # points of order 1 or 2: these x are E_0 and are traced directly
        why = "order 1" if ideal.norm() == 1 else "order 2"
        return CycleClass(h, ann, ns, (), 1, 1, 0, True, why)
    sp = tuple(s_min(alpha, ideal_pow(f.ideal, k)) for f, k in zip(split.Ic, ann))
    s_prime = math.lcm(*(s for s, _ in sp)) if sp else 1
    w = alpha**s_prime
    s = s_prime if ideal.contains(w - 1) or ideal.contains(w + 1) else 2 * s_prime
    if total % (2 * s):
        raise ArithmeticError(f"2*s = {2 * s} does not divide {total} for annihilator exponents {ann}")
    return CycleClass(h, ann, ns, sp, s_prime, s, total // (2 * s))


def cycle_classes(split: DeltaSplit, alpha: QuadInt) -> list[CycleClass]:
    ranges = [range(f.exponent + 1) for f in split.Ic]
    return [cycle_class(split, ann, alpha) for ann in itertools.product(*ranges)]


@dataclass(frozen=True)
class E0Trace:
    """Where each element of E_0 sits in the graph, found by iterating r."""

    cycles: tuple[tuple[int, ...], ...]
    depth: dict[int, int]
    root: dict[int, int]

    def vtilde(self, root: int) -> tuple[int, ...]:
        hs = [self.depth[x] for x, r in self.root.items() if r == root and self.depth[x] > 0]
        out = [0] * (max(hs, default=0))
        for h in hs:
            out[h - 1] += 1
        return tuple(out)

    @property
    def periodic(self) -> list[int]:
        return sorted(v for c in self.cycles for v in c)


def special_cycles(C: Curve, alpha: EndoMap) -> E0Trace:
    elems = e0_set(C)
    ids = [vertex_id(x) for x in elems]
    step = {vertex_id(x): vertex_id(alpha.x_map(x)) for x in elems}
    if any(v not in step for v in step.values()):
        raise ArithmeticError("r does not map E_0 into itself")
    periodic = set()
    for v in ids:
        # iterating |E_0| times lands on a cycle
        for _ in range(len(ids)):
            v = step[v]
        periodic.add(v)
    cycles, seen = [], set()
    for v in sorted(periodic):
        if v in seen:
            continue
        cyc = [v]
        u = step[v]
        while u != v:
            cyc.append(u)
            u = step[u]
        seen.update(cyc)
        cycles.append(tuple(cyc))
    depth, root = {}, {}
    for v in ids:
        u, k = v, 0
        while u not in periodic:
            u, k = step[u], k + 1
        depth[v], root[v] = k, u
    return E0Trace(tuple(cycles), depth, root)


@dataclass(frozen=True)
class TreeShape:
    depth: int
    f: tuple[int, ...]
    e: tuple[int, ...]
    v: tuple[int, ...]

    def levels(self, vtilde: tuple[int, ...] | None) -> tuple[int, ...]:
        """Level sizes at a root; ``vtilde`` is None for roots outside E_0."""
        if vtilde is None:
            return self.v
        vt = list(vtilde) + [0] * (self.depth - len(vtilde))
        out = []
        for vh, th in zip(self.v, vt):
            if (vh + th) % 2:
                raise ArithmeticError("v_h + vtilde_h is odd")
            out.append((vh + th) // 2)
        return tuple(out)


def tree_shape(split: DeltaSplit, alpha_f: Factorization) -> TreeShape:
    if not split.It:
        return TreeShape(0, (), (), ())
    es = tuple(f.exponent for f in split.It)
    fs = tuple(alpha_f.exponent_of(f.ideal) for f in split.It)
    norms = tuple(f.residue_norm for f in split.It)
    D = max(-(-e // f) for e, f in zip(es, fs))

    def size(h):
        return math.prod(nb ** min(e, f * h) for nb, e, f in zip(norms, es, fs))

    v = tuple(size(h) - size(h - 1) for h in range(1, D + 1))
    return TreeShape(D, fs, es, v)


@dataclass
class ClassPrediction:
    tag: str
    delta: QuadInt
    delta_factors: Factorization
    split: DeltaSplit
    classes: list[CycleClass]
    trees: TreeShape
    census: Counter = field(default_factory=Counter)


@dataclass
class StructureReport:
    q: int
    n: int
    m: int
    pi: QuadInt
    alpha: QuadInt
    alpha_factors: Factorization
    e0: E0Trace
    per_class: dict[str, ClassPrediction]

    def census(self, tag: str | None = None) -> Counter:
        if tag in ("A", "B"):
            return self.per_class[tag].census
        out = Counter()
        for cp in self.per_class.values():
            for c in cp.classes:
                if not c.excluded and c.count:
                    out[c.s] += c.count
        for cyc in self.e0.cycles:
            out[len(cyc)] += 1
        return out

    def tree_levels(self, tag: str, root: int, in_e0: bool) -> tuple[int, ...]:
        shape = self.per_class[tag].trees
        return shape.levels(self.e0.vtilde(root) if in_e0 else None)

    def union_levels(self, root: int) -> tuple[int, ...]:
        """Full-graph levels at an E_0 root: (v^A_h + v^B_h) / 2."""
        va, vb = self.per_class["A"].trees.v, self.per_class["B"].trees.v
        width = max(len(va), len(vb))
        va, vb = list(va) + [0] * (width - len(va)), list(vb) + [0] * (width - len(vb))
        return tuple((x + y) // 2 for x, y in zip(va, vb))

    def to_dict(self) -> dict:
        out = {
            "q": self.q,
            "n": self.n,
            "points_over_Fq": self.m,
            "frobenius": str(self.pi),
            "alpha": str(self.alpha),
            "alpha_factors": str(self.alpha_factors),
            "e0_cycles": [[label_from_id(v) for v in c] for c in self.e0.cycles],
            "full_census": _census_json(self.census()),
            "classes": {},
        }
        for tag, cp in self.per_class.items():
            out["classes"][tag] = {
                "delta": str(cp.delta),
                "delta_factors": str(cp.delta_factors),
                "Ic": [str(f) for f in cp.split.Ic],
                "It": [str(f) for f in cp.split.It],
                "cycle_classes": [
                    {
                        "h": list(c.h),
                        "annihilator_exponents": list(c.ann),
                        "n": list(c.n_counts),
                        "s_prime": c.s_prime,
                        "s": c.s,
                        "count": c.count,
                        "excluded": c.excluded,
                        "reason": c.reason,
                    }
                    for c in cp.classes
                ],
                "census": _census_json(cp.census),
                "tree_depth": cp.trees.depth,
                "v": list(cp.trees.v),
                "levels_outside_e0": list(cp.trees.levels(None)),
                "levels_at_infinity": list(self.tree_levels(tag, 0, True)),
            }
        return out


def _census_json(c: Counter) -> list[list[int]]:
    return [[length, count] for length, count in sorted(c.items())]


def predict(C: Curve, alpha: EndoMap, m: int | None = None) -> StructureReport:
    """Run the A and B pipelines for the map ``alpha`` on ``C`` over the host field."""
    m = check_ordinary(C, m)
    d = alpha.quad_rep.d
    pi = frobenius_rep(C.q, m, d)
    alpha_f = factor_principal(alpha.quad_rep)
    e0 = special_cycles(C, alpha)
    per = {}
    for tag in ("A", "B"):
        delta = delta_of(pi, C.n, tag)
        delta_f = factor_principal(delta)
        split = split_ct(tag, delta_f, alpha_f)
        classes = cycle_classes(split, alpha.quad_rep)
        census = Counter()
        for c in classes:
            if not c.excluded and c.count:
                census[c.s] += c.count
        for cyc in e0.cycles:
            census[len(cyc)] += 1
        per[tag] = ClassPrediction(tag, delta, delta_f, split, classes, tree_shape(split, alpha_f), census)
    return StructureReport(C.q, C.n, m, pi, alpha.quad_rep, alpha_f, e0, per)


# ---------------------------------------------------------------------------
# reconciliation against the brute-force graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReconcileItem:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class ReconcileReport:
    items: list[ReconcileItem]

    @property
    def passed(self) -> bool:
        return all(i.ok for i in self.items)

    @property
    def failures(self) -> list[ReconcileItem]:
        return [i for i in self.items if not i.ok]

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "items": [
                {"name": i.name, "ok": i.ok, "expected": _jsonable(i.expected), "actual": _jsonable(i.actual)}
                for i in self.items
            ],
        }


def _jsonable(x):
    if isinstance(x, Counter):
        return _census_json(x)
    if isinstance(x, tuple):
        return list(x)
    return x


def reconcile(report: StructureReport, G: FunctionalGraph) -> ReconcileReport:
    items = []
    add = items.append
    V = G.num_vertices
    e0 = G.flags.in_E0

    add(ReconcileItem("census full", report.census(), cycle_census(G)))
    for tag in ("A", "B"):
        add(ReconcileItem(f"census {tag}", report.census(tag), cycle_census(G, tag)))
        periodic = int(np.count_nonzero(G.periodic & G.mask(tag)))
        cp = report.per_class[tag]
        predicted = sum(c.s * c.count for c in cp.classes if not c.excluded) + len(report.e0.periodic)
        add(ReconcileItem(f"periodic count {tag}", predicted, periodic))
        shape = cp.trees
        for root, levels in tree_profiles(G, tag).items():
            in_e0 = bool(e0[root])
            want = report.tree_levels(tag, root, in_e0)
            add(ReconcileItem(f"tree {tag} at {label_from_id(root)}", _strip(want), levels))
        add(ReconcileItem(f"tree depth {tag}", shape.depth, _max_depth(G, tag)))

    for root in report.e0.periodic:
        got = tree_profile(G, root).levels
        add(ReconcileItem(f"union tree at {label_from_id(root)}", _strip(report.union_levels(root)), got))

    add(ReconcileItem("stability", {k: 0 for k in CLASSES}, stability_violations(G)))
    nA, nB, nE = (int(np.count_nonzero(G.mask(k))) for k in CLASSES)
    add(ReconcileItem("partition", V, nA + nB - nE))
    total = int(np.count_nonzero(G.periodic)) + sum(sum(lv) for lv in tree_profiles(G).values())
    add(ReconcileItem("conservation", V, total))
    add(ReconcileItem("points A", report.per_class["A"].delta.norm(), 2 * nA - nE))
    add(ReconcileItem("points B", report.per_class["B"].delta.norm(), 2 * nB - nE))
    return ReconcileReport(items)


def _strip(levels) -> tuple[int, ...]:
    out = list(levels)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _max_depth(G: FunctionalGraph, tag: str) -> int:
    m = G.mask(tag)
    return int(G.depth_to_cycle[m].max()) if m.any() else 0
