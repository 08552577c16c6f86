import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecdyn import _kernels
from ecdyn.ff import fld_make

needs_numba = pytest.mark.skipif(not _kernels.NUMBA_KERNELS, reason="numba unavailable")
NP, NB = _kernels.NUMPY_KERNELS, _kernels.NUMBA_KERNELS


def random_map(draw_sizes):
    return st.integers(min_value=1, max_value=draw_sizes).flatmap(
        lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)
    )


@needs_numba
@settings(max_examples=150, deadline=None)
@given(random_map(60))
def test_graph_kernels_agree(succ):
    succ = np.array(succ, dtype=np.int64)
    p1, p2 = NP["peel_periodic"](succ), NB["peel_periodic"](succ)
    assert np.array_equal(p1, p2)
    d1, r1 = NP["annotate_trees"](succ, p1)
    d2, r2 = NB["annotate_trees"](succ, p2)
    assert np.array_equal(d1, d2) and np.array_equal(r1, r2)
    assert np.array_equal(NP["cycle_ids"](succ, p1), NB["cycle_ids"](succ, p2))


@settings(max_examples=100, deadline=None)
@given(random_map(40))
def test_peeling_finds_exactly_the_cycles(succ):
    # oracle: v is periodic iff iterating len(succ) steps from v can return to v
    n = len(succ)
    per = NP["peel_periodic"](np.array(succ, dtype=np.int64))
    for v in range(n):
        u, back = v, False
        for _ in range(n):
            u = succ[u]
            back |= u == v
        assert per[v] == back


@needs_numba
@pytest.mark.parametrize("p,k", [(7, 1), (5, 2), (3, 5), (2, 6)])
def test_successor_tables_agree(p, k):
    F = fld_make(p, k)
    n = F.order - 1
    rng = np.random.default_rng(p * k)
    zech = F.tables.zech
    for _ in range(5):
        a = rng.integers(-1, n, size=rng.integers(1, 8))
        b = rng.integers(-1, n, size=rng.integers(1, 8))
        b[-1] = max(b[-1], 0)
        s1 = NP["successor_table"](a, b, zech, n)
        s2 = NB["successor_table"](a, b, zech, n)
        assert np.array_equal(s1, s2)
        xs = np.arange(-1, n, dtype=np.int64)
        assert np.array_equal(NP["horner_logs"](a, xs, zech, n), NB["horner_logs"](a, xs, zech, n))


def test_log_add_matches_field():
    F = fld_make(3, 3)
    n = F.order - 1
    z = F.tables.zech
    for a in range(-1, n):
        for b in range(-1, n):
            x = (F.zero if a < 0 else F.from_log(a)) + (F.zero if b < 0 else F.from_log(b))
            want = -1 if not x else F.log_of(x)
            assert _kernels.log_add(a, b, z, n) == want


def test_env_flag_selects_numpy():
    code = "from ecdyn import _kernels; print(_kernels.backend())"
    env = dict(os.environ, ECDYN_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_thread_count_does_not_change_results(ex3):
    cfg, G, _ = ex3
    from ecdyn.dynamics import build_graph

    _kernels.set_threads(1)
    try:
        G1 = build_graph(cfg.curve, cfg.alpha)
    finally:
        _kernels.set_threads(os.cpu_count())
    assert np.array_equal(G1.succ, G.succ)
