"""Brute-force functional graph of r on P^1(F_{q^n}) and its decomposition."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .curve import MAX_FIELD, ClassFlags, Curve, EndoMap, ScaleExceeded, class_flags
from .ff import FieldElem, label_from_id

CLASSES = ("A", "B", "E0")


class NotPeriodic(ValueError):
    pass


def eval_r(C: Curve, alpha: EndoMap, x: FieldElem | None) -> FieldElem | None:
    """infinity if x is infinity or b(x) = 0, else a(x)/b(x)."""
    return alpha.x_map(x)


@dataclass(frozen=True)
class CycleRecord:
    length: int
    members: tuple[int, ...]  # vertex ids in orbit order, smallest id first


@dataclass(frozen=True)
class TreeRecord:
    root: int
    depth: int
    levels: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FunctionalGraph:
    succ: np.ndarray
    periodic: np.ndarray
    cycle_id: np.ndarray
    depth_to_cycle: np.ndarray
    root_of: np.ndarray
    flags: ClassFlags

    @property
    def num_vertices(self) -> int:
        return self.succ.shape[0]

    def mask(self, restrict: str | None) -> np.ndarray:
        if restrict is None or restrict == "all":
            return np.ones(self.num_vertices, dtype=bool)
        return {"A": self.flags.in_A, "B": self.flags.in_B, "E0": self.flags.in_E0}[restrict]


def build_graph(C: Curve, alpha: EndoMap, threads: int | None = None) -> FunctionalGraph:
    fd = C.field
    if fd.order > MAX_FIELD:
        raise ScaleExceeded(f"{fd.order + 1} vertices is beyond desk scale")
    if threads:
        _kernels.set_threads(threads)
    n = fd.order - 1
    succ = _kernels.successor_table(alpha.a.log_coeffs(), alpha.b.log_coeffs(), fd.tables.zech, n)
    periodic = _kernels.peel_periodic(succ)
    depth, root = _kernels.annotate_trees(succ, periodic)
    cyc = _kernels.cycle_ids(succ, periodic)
    return FunctionalGraph(succ, periodic, cyc, depth, root, class_flags(C))


def cycles(G: FunctionalGraph, restrict: str | None = None) -> list[CycleRecord]:
    keep = G.mask(restrict)
    out = []
    for start in np.flatnonzero(G.periodic & (G.cycle_id == np.arange(G.num_vertices))):
        if not keep[start]:
            continue
        members = [int(start)]
        v = int(G.succ[start])
        while v != start:
            members.append(v)
            v = int(G.succ[v])
        out.append(CycleRecord(len(members), tuple(members)))
    return out


def cycle_census(G: FunctionalGraph, restrict: str | None = None) -> Counter:
    """Multiset of cycle lengths as ``{length: count}``."""
    return Counter(c.length for c in cycles(G, restrict))


def tree_profiles(G: FunctionalGraph, restrict: str | None = None) -> dict[int, tuple[int, ...]]:
    """Level sizes of the tree hanging off every periodic vertex in the class."""
    keep = G.mask(restrict)
    roots = np.flatnonzero(G.periodic & keep)
    tree = ~G.periodic & keep
    width = int(G.depth_to_cycle.max()) + 1
    key = G.root_of[tree] * width + G.depth_to_cycle[tree]
    counts = np.bincount(key, minlength=G.num_vertices * width).reshape(G.num_vertices, width)
    out = {}
    for r in roots:
        row = counts[r, 1:]
        nz = np.flatnonzero(row)
        out[int(r)] = tuple(int(c) for c in row[: nz[-1] + 1]) if nz.size else ()
    return out


def tree_profile(G: FunctionalGraph, root: int, restrict: str | None = None) -> TreeRecord:
    if not G.periodic[root]:
        raise NotPeriodic(f"vertex {label_from_id(root)} is not periodic")
    keep = G.mask(restrict)
    sel = (G.root_of == root) & ~G.periodic & keep
    levels = np.bincount(G.depth_to_cycle[sel])[1:] if sel.any() else np.zeros(0, dtype=np.int64)
    return TreeRecord(root, len(levels), tuple(int(c) for c in levels))


def stability_violations(G: FunctionalGraph) -> dict[str, int]:
    """Vertices whose class flag is lost under r (should be none)."""
    out = {}
    for name in CLASSES:
        m = G.mask(name)
        out[name] = int(np.count_nonzero(m & ~m[G.succ]))
    return out


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

_COLORS = {"A": "#1f77b4", "B": "#d62728", "E0": "#2ca02c"}


def export_dot(G: FunctionalGraph, color_classes: bool = False, name: str = "G") -> str:
    """Deterministic Graphviz text; nodes and edges in vertex-id order."""
    lines = [f'digraph "{name}" {{', "  node [shape=circle];"]
    for v in range(G.num_vertices):
        attrs = f'label="{label_from_id(v)}"'
        if color_classes:
            if G.flags.in_E0[v]:
                cls = "E0"
            elif G.flags.in_A[v]:
                cls = "A"
            else:
                cls = "B"
            attrs += f', color="{_COLORS[cls]}", class="{cls}"'
        lines.append(f"  v{v} [{attrs}];")
    for v in range(G.num_vertices):
        lines.append(f"  v{v} -> v{int(G.succ[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
