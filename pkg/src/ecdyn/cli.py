"""Command line front end: ``ecdyn <analyze|graph|validate|census> --config FILE``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from . import _kernels
from .curve import (
    Curve,
    CurveError,
    EndoMap,
    check_ordinary,
    frobenius_endo,
    make_endo,
    mul2_endo,
    mul3_endo,
    scaled_frobenius_endo,
    validate_endo_rep,
)
from .dynamics import build_graph, cycles, export_dot, tree_profiles
from .ff import FieldDesc, FieldElem, FieldError, Poly, fld_make, label_from_id
from .predictor import ReconcileItem, predict, reconcile
from .quadorder import QuadError, QuadInt, frobenius_rep


class ConfigError(ValueError):
    pass


class ParseError(ConfigError):
    pass


class SchemaError(ConfigError):
    pass


class DegreeNormMismatch(ConfigError):
    pass


_COEFF = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?g\^\d+$"},
        {"type": "array", "items": {"type": "integer"}, "minItems": 1},
    ]
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "curve", "alpha"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "p": {"type": "integer", "minimum": 2},
        "s": {"type": "integer", "minimum": 1, "default": 1},
        "n": {"type": "integer", "minimum": 1},
        "modulus": {"type": "array", "items": {"type": "integer"}},
        "gamma": {"type": "string", "pattern": r"^g\^\d+$"},
        "curve": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: _COEFF for k in ("a1", "a2", "a3", "a4", "a6")},
        },
        "alpha": {
            "type": "object",
            "required": ["d"],
            "additionalProperties": False,
            "properties": {
                "d": {"type": "integer", "maximum": -1},
                "builtin": {"type": "string", "pattern": r"^(mul2|mul3|frobenius|[23]frobenius)$"},
                "a": {"type": "array", "items": _COEFF, "minItems": 1},
                "b": {"type": "array", "items": _COEFF, "minItems": 1},
                "a_scale": _COEFF,
                "b_scale": _COEFF,
                "quad_rep": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            },
            "oneOf": [{"required": ["builtin"]}, {"required": ["a", "b", "quad_rep"]}],
        },
        "tasks": {
            "type": "array",
            "items": {"enum": ["predict", "brute", "reconcile", "dot"]},
        },
    },
}


@dataclass
class AnalysisConfig:
    name: str
    p: int
    s: int
    n: int
    field: FieldDesc
    curve: Curve
    alpha: EndoMap
    m: int
    pi: QuadInt
    tasks: tuple[str, ...]

    @property
    def q(self) -> int:
        return self.p**self.s


def _coeff(fd: FieldDesc, value, gamma: FieldElem | None) -> FieldElem:
    if isinstance(value, int):
        return fd(value)
    if isinstance(value, str):
        neg = value.startswith("-")
        out = fd.g ** int(value.lstrip("-")[2:])
        return -out if neg else out
    if gamma is None:
        raise SchemaError("polynomial-in-gamma coefficients need a 'gamma' entry")
    acc = fd.zero
    for c in reversed(value):
        acc = acc * gamma + c
    return acc


def build_config(raw: dict) -> AnalysisConfig:
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from None
    p, s, n = raw["p"], raw.get("s", 1), raw["n"]
    fd = fld_make(p, s * n, raw.get("modulus"))
    gamma = _coeff(fd, raw["gamma"], None) if "gamma" in raw else None
    cv = {k: _coeff(fd, v, gamma) for k, v in raw["curve"].items()}
    curve = Curve(fd, p**s, *(cv.get(k, fd.zero) for k in ("a1", "a2", "a3", "a4", "a6")))
    m = check_ordinary(curve)
    amap = raw["alpha"]
    d = amap["d"]
    pi = frobenius_rep(curve.q, m, d)
    if "builtin" in amap:
        name = amap["builtin"]
        if name == "mul2":
            alpha = mul2_endo(curve, d)
        elif name == "mul3":
            alpha = mul3_endo(curve, d)
        elif name == "frobenius":
            alpha = frobenius_endo(curve, pi)
        else:
            alpha = scaled_frobenius_endo(curve, int(name[0]), pi)
    else:

        def poly(key):
            scale = _coeff(fd, amap.get(f"{key}_scale", 1), gamma)
            return Poly.from_desc(fd, [scale * _coeff(fd, c, gamma) for c in amap[key]])

        alpha = make_endo(poly("a"), poly("b"), QuadInt(*amap["quad_rep"], d))
    if alpha.degree != alpha.quad_rep.norm():
        raise DegreeNormMismatch(f"map has degree {alpha.degree} but N({alpha.quad_rep}) = {alpha.quad_rep.norm()}")
    tasks = tuple(raw.get("tasks", ["predict", "brute", "reconcile"]))
    return AnalysisConfig(raw.get("name", ""), p, s, n, fd, curve, alpha, m, pi, tasks)


def load_config(path) -> AnalysisConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return build_config(raw)


def bundled_example(k: int) -> Path:
    """Path of one of the bundled example configs (1, 2 or 3)."""
    return Path(str(resources.files("ecdyn") / "data" / f"example{k}.json"))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def analyze(cfg: AnalysisConfig) -> dict:
    return predict(cfg.curve, cfg.alpha, cfg.m).to_dict()


def validate(cfg: AnalysisConfig, threads: int | None = None):
    G = build_graph(cfg.curve, cfg.alpha, threads)
    rep = reconcile(predict(cfg.curve, cfg.alpha, cfg.m), G)
    check = validate_endo_rep(cfg.curve, cfg.alpha, cfg.pi)
    rep.items.append(ReconcileItem("endomorphism", True, check.ok))
    return rep, check


def census_table(cfg: AnalysisConfig, restrict: str | None, threads: int | None = None) -> str:
    G = build_graph(cfg.curve, cfg.alpha, threads)
    lines = [f"class {restrict or 'all'}: {G.num_vertices} vertices", "cycles (length x count):"]
    by_len = {}
    for c in cycles(G, restrict):
        by_len.setdefault(c.length, []).append(c)
    for length in sorted(by_len):
        lines.append(f"  {length} x {len(by_len[length])}")
    lines.append("trees (root: level sizes):")
    for root, levels in sorted(tree_profiles(G, restrict).items()):
        if levels:
            lines.append(f"  {label_from_id(root)}: {' '.join(map(str, levels))}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="ecdyn", description="Cycles and trees of x-coordinate maps of endomorphisms.")
    ap.add_argument("command", choices=["analyze", "graph", "validate", "census"])
    ap.add_argument("--config", required=True)
    ap.add_argument("--out")
    ap.add_argument("--dot")
    ap.add_argument("--class", dest="cls", choices=["A", "B", "all"], default="all")
    ap.add_argument("--threads", type=int)
    args = ap.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except (OSError, ConfigError, FieldError, CurveError, QuadError) as exc:
        print(f"ecdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.threads:
        _kernels.set_threads(args.threads)
    restrict = None if args.cls == "all" else args.cls

    if args.command == "analyze":
        _emit(json.dumps(analyze(cfg), indent=2, ensure_ascii=False) + "\n", args.out)
        return 0
    if args.command == "graph":
        G = build_graph(cfg.curve, cfg.alpha)
        _emit(export_dot(G, color_classes=True, name=cfg.name or "G"), args.dot or args.out)
        return 0
    if args.command == "census":
        _emit(census_table(cfg, restrict), args.out)
        return 0
    rep, check = validate(cfg)
    body = rep.to_dict()
    body["endomorphism_check"] = {
        "verdict": check.verdict.value,
        "relation": check.relation,
        "samples": check.samples_checked,
        "mismatches": check.mismatches,
    }
    _emit(json.dumps(body, indent=2, ensure_ascii=False) + "\n", args.out)
    if args.dot:
        _emit(export_dot(build_graph(cfg.curve, cfg.alpha), color_classes=True, name=cfg.name or "G"), args.dot)
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
