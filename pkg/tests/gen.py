"""Random small configurations for oracle comparisons."""

import random

from sympy import primerange

from ecdyn.curve import Curve, NotOrdinary, check_ordinary, count_points, frobenius_endo, mul2_endo, mul3_endo
from ecdyn.ff import fld_make
from ecdyn.quadorder import conductor, frobenius_rep, fundamental_d

PRIMES = list(primerange(5, 62))
MAPS = ("mul2", "mul3", "frobenius")


def random_config(rng: random.Random, n: int | None = None, kind: str | None = None, max_vertices: int = 4000):
    """Ordinary short curve over F_p with Z[pi] maximal, viewed over F_{p^n}."""
    while True:
        p = rng.choice(PRIMES)
        n_ = n if n is not None else rng.choice((1, 2))
        if p**n_ + 1 > max_vertices:
            continue
        fp = fld_make(p)
        A, B = rng.randrange(p), rng.randrange(p)
        try:
            m = check_ordinary(Curve.short(fp, p, A, B))
        except (NotOrdinary, ValueError):
            continue
        d = fundamental_d(p, m)
        if conductor(p, m, d) != 1:
            continue
        host = fld_make(p, n_)
        C = Curve.short(host, p, A, B)
        pi = frobenius_rep(p, m, d)
        k = kind or rng.choice(MAPS)
        alpha = {"mul2": lambda: mul2_endo(C, d), "mul3": lambda: mul3_endo(C, d), "frobenius": lambda: frobenius_endo(C, pi)}[k]()
        return C, alpha, m
