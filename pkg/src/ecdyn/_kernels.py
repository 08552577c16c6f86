"""Hot loops over a whole field or a whole functional graph.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with the same signature and the same output.  The numba path is
used when numba imports cleanly and ``ECDYN_NUMBA`` is not set to ``0``.

Field elements are handled in the *log domain*: a nonzero element ``g**m``
is stored as ``m`` in ``[0, N)`` with ``N = Q - 1``, and zero is ``-1``.
Addition goes through the Zech table ``zech[k] = log(1 + g**k)``.

Graph vertex ids: ``0`` is infinity, ``1`` is the field zero and ``2 + m``
is ``g**m``.
"""

import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    _HAVE_NUMBA = True
    # the bundled TBB is often too old; skip it rather than warn on every run
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("ECDYN_NUMBA", "1") != "0"

INF_ID = 0
ZERO_ID = 1


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _np_build_exp_table(mul_matrix, p, k, order):
    """Integer encodings of ``g**0 .. g**(order-2)``; ``mul_matrix`` multiplies by g."""
    n = order - 1
    weights = p ** np.arange(k, dtype=np.int64)
    coeffs = np.zeros((1, k), dtype=np.int64)
    coeffs[0, 0] = 1
    step = mul_matrix.astype(np.int64) % p
    # doubling: rows [L, 2L) are rows [0, L) times g**L
    while coeffs.shape[0] < n:
        more = (coeffs @ step.T) % p
        coeffs = np.vstack([coeffs, more])
        step = (step @ step) % p
    return coeffs[:n] @ weights


def _np_log_mul(a, b, n):
    out = (a + b) % n
    return np.where((a < 0) | (b < 0), -1, out)


def _np_log_add(a, b, zech, n):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    diff = np.where((a < 0) | (b < 0), 0, (b - a) % n)
    z = zech[diff]
    s = np.where(z < 0, -1, (a + z) % n)
    s = np.where(a < 0, b, s)
    return np.where(b < 0, a, s)


def _np_horner_logs(coef_logs, xs, zech, n):
    acc = np.full(xs.shape, -1, dtype=np.int64)
    for c in coef_logs[::-1]:
        acc = _np_log_add(_np_log_mul(acc, xs, n), np.int64(c), zech, n)
    return acc


def _np_successor_table(a_logs, b_logs, zech, n):
    xs = np.concatenate([np.array([-1], dtype=np.int64), np.arange(n, dtype=np.int64)])
    av = _np_horner_logs(a_logs, xs, zech, n)
    bv = _np_horner_logs(b_logs, xs, zech, n)
    img = np.where(av < 0, ZERO_ID, 2 + (av - bv) % n)
    img = np.where(bv < 0, INF_ID, img)
    return np.concatenate([np.array([INF_ID], dtype=np.int64), img]).astype(np.int64)


def _np_peel_periodic(succ):
    v = succ.shape[0]
    indeg = np.bincount(succ, minlength=v)
    alive = np.ones(v, dtype=np.bool_)
    frontier = np.flatnonzero(indeg == 0)
    while frontier.size:
        alive[frontier] = False
        dec = np.bincount(succ[frontier], minlength=v)
        indeg -= dec
        frontier = np.flatnonzero((dec > 0) & (indeg == 0))
    return alive


def _np_annotate_trees(succ, periodic):
    v = succ.shape[0]
    depth = np.where(periodic, 0, -1).astype(np.int64)
    root = np.where(periodic, np.arange(v), -1).astype(np.int64)
    level = 0
    while True:
        mask = (depth == -1) & (depth[succ] == level)
        if not mask.any():
            break
        depth[mask] = level + 1
        root[mask] = root[succ[mask]]
        level += 1
    return depth, root


def _np_cycle_ids(succ, periodic):
    v = succ.shape[0]
    big = np.int64(v)
    lab = np.where(periodic, np.arange(v, dtype=np.int64), big)
    nxt = succ.copy()
    span = 1
    while span < v:
        lab = np.minimum(lab, lab[nxt])
        nxt = nxt[nxt]
        span *= 2
    return np.where(periodic, lab, -1)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True)
    def _nb_build_exp_table(mul_matrix, p, k, order):
        n = order - 1
        out = np.empty(n, dtype=np.int64)
        cur = np.zeros(k, dtype=np.int64)
        nxt = np.zeros(k, dtype=np.int64)
        cur[0] = 1
        for i in range(n):
            enc = 0
            w = 1
            for j in range(k):
                enc += cur[j] * w
                w *= p
            out[i] = enc
            for r in range(k):
                s = 0
                for c in range(k):
                    s += mul_matrix[r, c] * cur[c]
                nxt[r] = s % p
            for r in range(k):
                cur[r] = nxt[r]
        return out

    @njit(cache=True, inline="always")
    def _nb_mul(a, b, n):
        if a < 0 or b < 0:
            return -1
        return (a + b) % n

    @njit(cache=True, inline="always")
    def _nb_add(a, b, zech, n):
        if a < 0:
            return b
        if b < 0:
            return a
        z = zech[(b - a) % n]
        if z < 0:
            return -1
        return (a + z) % n

    @njit(cache=True)
    def _nb_horner_logs(coef_logs, xs, zech, n):
        out = np.empty(xs.shape[0], dtype=np.int64)
        for i in range(xs.shape[0]):
            acc = -1
            x = xs[i]
            for j in range(coef_logs.shape[0] - 1, -1, -1):
                acc = _nb_add(_nb_mul(acc, x, n), coef_logs[j], zech, n)
            out[i] = acc
        return out

    @njit(cache=True, parallel=True)
    def _nb_successor_table(a_logs, b_logs, zech, n):
        succ = np.empty(n + 2, dtype=np.int64)
        succ[0] = INF_ID
        for i in prange(n + 1):
            x = i - 1  # i == 0 is the field zero
            av = -1
            for j in range(a_logs.shape[0] - 1, -1, -1):
                av = _nb_add(_nb_mul(av, x, n), a_logs[j], zech, n)
            bv = -1
            for j in range(b_logs.shape[0] - 1, -1, -1):
                bv = _nb_add(_nb_mul(bv, x, n), b_logs[j], zech, n)
            if bv < 0:
                succ[i + 1] = INF_ID
            elif av < 0:
                succ[i + 1] = ZERO_ID
            else:
                succ[i + 1] = 2 + (av - bv) % n
        return succ

    @njit(cache=True)
    def _nb_peel_periodic(succ):
        v = succ.shape[0]
        indeg = np.zeros(v, dtype=np.int64)
        for i in range(v):
            indeg[succ[i]] += 1
        alive = np.ones(v, dtype=np.bool_)
        stack = np.empty(v, dtype=np.int64)
        top = 0
        for i in range(v):
            if indeg[i] == 0:
                stack[top] = i
                top += 1
        while top > 0:
            top -= 1
            u = stack[top]
            alive[u] = False
            w = succ[u]
            indeg[w] -= 1
            if indeg[w] == 0:
                stack[top] = w
                top += 1
        return alive

    @njit(cache=True)
    def _nb_annotate_trees(succ, periodic):
        v = succ.shape[0]
        depth = np.full(v, -1, dtype=np.int64)
        root = np.full(v, -1, dtype=np.int64)
        path = np.empty(v, dtype=np.int64)
        for i in range(v):
            if periodic[i]:
                depth[i] = 0
                root[i] = i
        for i in range(v):
            if depth[i] >= 0:
                continue
            m = 0
            u = i
            while depth[u] < 0:
                path[m] = u
                m += 1
                u = succ[u]
            d = depth[u]
            r = root[u]
            for j in range(m - 1, -1, -1):
                d += 1
                depth[path[j]] = d
                root[path[j]] = r
        return depth, root

    @njit(cache=True)
    def _nb_cycle_ids(succ, periodic):
        v = succ.shape[0]
        out = np.full(v, -1, dtype=np.int64)
        for i in range(v):
            if not periodic[i] or out[i] >= 0:
                continue
            lo = i
            u = succ[i]
            while u != i:
                if u < lo:
                    lo = u
                u = succ[u]
            out[i] = lo
            u = succ[i]
            while u != i:
                out[u] = lo
                u = succ[u]
        return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

NUMPY_KERNELS = {
    "build_exp_table": _np_build_exp_table,
    "horner_logs": _np_horner_logs,
    "successor_table": _np_successor_table,
    "peel_periodic": _np_peel_periodic,
    "annotate_trees": _np_annotate_trees,
    "cycle_ids": _np_cycle_ids,
}

if _HAVE_NUMBA:
    NUMBA_KERNELS = {
        "build_exp_table": _nb_build_exp_table,
        "horner_logs": _nb_horner_logs,
        "successor_table": _nb_successor_table,
        "peel_periodic": _nb_peel_periodic,
        "annotate_trees": _nb_annotate_trees,
        "cycle_ids": _nb_cycle_ids,
    }
else:  # pragma: no cover
    NUMBA_KERNELS = {}


def backend():
    return "numba" if USE_NUMBA else "numpy"


def _pick(name):
    return (NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS)[name]


def build_exp_table(mul_matrix, p, k, order):
    return _pick("build_exp_table")(np.ascontiguousarray(mul_matrix, dtype=np.int64), p, k, order)


def horner_logs(coef_logs, xs, zech, n):
    return _pick("horner_logs")(
        np.ascontiguousarray(coef_logs, dtype=np.int64), np.ascontiguousarray(xs, dtype=np.int64), zech, n
    )


def successor_table(a_logs, b_logs, zech, n):
    return _pick("successor_table")(
        np.ascontiguousarray(a_logs, dtype=np.int64), np.ascontiguousarray(b_logs, dtype=np.int64), zech, n
    )


def peel_periodic(succ):
    return _pick("peel_periodic")(succ)


def annotate_trees(succ, periodic):
    return _pick("annotate_trees")(succ, periodic)


def cycle_ids(succ, periodic):
    return _pick("cycle_ids")(succ, periodic)


def set_threads(n):
    """Cap numba's worker pool; a no-op on the numpy path."""
    if USE_NUMBA and n:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def log_mul(a, b, n):
    return _np_log_mul(a, b, n)


def log_add(a, b, zech, n):
    return _np_log_add(a, b, zech, n)
