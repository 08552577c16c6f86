from collections import Counter

import numpy as np
import pytest

from ecdyn.curve import Curve, ScaleExceeded, make_endo
from ecdyn.dynamics import (
    NotPeriodic,
    build_graph,
    cycle_census,
    cycles,
    eval_r,
    export_dot,
    stability_violations,
    tree_profile,
    tree_profiles,
)
from ecdyn.ff import Poly, fld_make, label_from_id, vertex_from_id, vertex_id
from ecdyn.quadorder import QuadInt


def naive_structure(succ):
    # oracle: walk every orbit with a dict, no peeling
    V = len(succ)
    periodic = set()
    for v in range(V):
        seen = {}
        u = v
        while u not in seen:
            seen[u] = len(seen)
            u = succ[u]
        start = seen[u]
        periodic.update(w for w, i in seen.items() if i >= start)
    depth = {}
    for v in range(V):
        u, k = v, 0
        while u not in periodic:
            u, k = succ[u], k + 1
        depth[v] = (k, u)
    return periodic, depth


def test_eval_r_definition(ex1):
    cfg = ex1[0]
    F = cfg.field
    assert eval_r(cfg.curve, cfg.alpha, None) is None
    assert eval_r(cfg.curve, cfg.alpha, F.zero) is None
    assert eval_r(cfg.curve, cfg.alpha, F.g**5) == F.g**15


def test_succ_matches_scalar_evaluation(ex2):
    cfg, G, _ = ex2
    F = cfg.field
    for i in range(G.num_vertices):
        img = eval_r(cfg.curve, cfg.alpha, vertex_from_id(F, i))
        assert G.succ[i] == vertex_id(img)


def test_graph_annotations_match_naive_walk(ex1, ex3):
    for cfg, G, _ in (ex1, ex3):
        periodic, depth = naive_structure(G.succ.tolist())
        assert set(np.flatnonzero(G.periodic)) == periodic
        for v, (k, r) in depth.items():
            assert G.depth_to_cycle[v] == k
            assert G.root_of[v] == r
        assert G.succ[0] == 0


def test_sizes(ex1, ex3):
    assert ex1[1].num_vertices == 74
    assert ex3[1].num_vertices == 626


def test_reference_edges(ex1, ex2, ex3, reference_edges):
    # every labelled edge in the published figures
    for key, (_, G, _) in zip(("example1", "example2", "example3"), (ex1, ex2, ex3)):
        got = {label_from_id(v): label_from_id(int(G.succ[v])) for v in range(G.num_vertices)}
        for src, dst in reference_edges[key]:
            assert got[src] == dst, (key, src)
    assert len(reference_edges["example1"]) == 74
    assert len(reference_edges["example2"]) == 84


def test_census_examples(ex1, ex2, ex3):
    assert cycle_census(ex1[1], "B") == Counter({1: 1, 8: 1})
    assert cycle_census(ex1[1]) == Counter({1: 1, 8: 1})
    assert cycle_census(ex2[1], "B") == Counter({1: 13, 3: 13})
    full = cycle_census(ex3[1])
    assert sorted(full.elements()) == [1, 1, 2, 4, 18]


def test_cycle_members_follow_orbit(ex2):
    G = ex2[1]
    for c in cycles(G):
        assert c.members[0] == min(c.members)
        for a, b in zip(c.members, c.members[1:] + c.members[:1]):
            assert G.succ[a] == b


def test_tree_profiles_examples(ex1, ex3):
    G1 = ex1[1]
    assert tree_profile(G1, 0, "A").levels == (5, 6, 10, 20)
    for c in cycles(G1, "B"):
        if c.length == 8:
            for r in c.members:
                assert tree_profile(G1, r, "B").levels == (1, 2)
    assert tree_profile(ex3[1], 0, "B").levels == (1, 2, 2, 4)


def test_tree_profile_not_periodic(ex1):
    G = ex1[1]
    v = int(np.flatnonzero(~G.periodic)[0])
    with pytest.raises(NotPeriodic):
        tree_profile(G, v)


def test_tree_profiles_agree_with_single_root(ex3):
    G = ex3[1]
    for tag in (None, "A", "B"):
        for r, levels in tree_profiles(G, tag).items():
            assert tree_profile(G, r, tag).levels == levels


def test_invariants_on_examples(ex1, ex2, ex3):
    for _, G, _ in (ex1, ex2, ex3):
        assert stability_violations(G) == {"A": 0, "B": 0, "E0": 0}
        V = G.num_vertices
        fl = G.flags
        assert int(fl.in_A.sum() + fl.in_B.sum() - fl.in_E0.sum()) == V
        total = int(G.periodic.sum()) + sum(sum(lv) for lv in tree_profiles(G).values())
        assert total == V
        # E_0 is closed forward, so roots of E_0 vertices are E_0
        e0 = np.flatnonzero(fl.in_E0)
        assert fl.in_E0[G.root_of[e0]].all()


def test_dot_tiny_field():
    F = fld_make(2)
    C = Curve(F, 2, F(1), F(0), F(0), F(0), F(1))
    x = Poly(F, (0, 1))
    alpha = make_endo(x, Poly(F, (1,)), QuadInt(1, 0, -7))
    G = build_graph(C, alpha)
    text = export_dot(G)
    assert text.count("->") == 3
    assert text.count("label=") == 3
    assert 'label="∞"' in text and "label=\"'0'\"" in text and 'label="0"' in text


def test_dot_determinism(ex1):
    cfg, G, _ = ex1
    a = export_dot(G, color_classes=True)
    b = export_dot(build_graph(cfg.curve, cfg.alpha), color_classes=True)
    assert a == b
    assert a.count("->") == 74
    assert a.count("label=") == 74
    assert "\r" not in a
    a.encode("utf-8")


def test_scale_guard():
    F = fld_make(2, 21)
    C = Curve(F, 2, F(1), F(0), F(0), F(0), F(1))
    x = Poly(F, (0, 1))
    with pytest.raises(ScaleExceeded):
        build_graph(C, make_endo(x, Poly(F, (1,)), QuadInt(1, 0, -7)))
