import random

import numpy as np
import pytest

from ecdyn import _kernels
from ecdyn.ff import (
    FieldMismatch,
    NotPrime,
    Poly,
    ReducibleModulus,
    eval_all,
    find_primitive,
    fld_make,
    is_irreducible,
    label_from_id,
    vertex_from_id,
    vertex_id,
    vertex_label,
)


def exhaustive_primitive(p):
    # oracle: first residue whose powers hit every nonzero class
    for g in range(1, p):
        if len({pow(g, k, p) for k in range(p - 1)}) == p - 1:
            return g


def test_prime_field_sizes():
    F = fld_make(73)
    assert F.order == 73
    assert len(list(F.elements())) + 1 == 74


def test_f25_host():
    F = fld_make(5, 2)
    assert F.order == 25
    assert F.modulus == (2, 0, 1)


def test_f2_generator():
    assert fld_make(2).g == 1


@pytest.mark.parametrize("p,g", [(73, 5), (83, 2)])
def test_primitive_matches_exhaustive_scan(p, g):
    assert exhaustive_primitive(p) == g
    assert find_primitive(fld_make(p)) == g


def test_not_prime():
    with pytest.raises(NotPrime):
        fld_make(6)


def test_reducible_modulus():
    with pytest.raises(ReducibleModulus):
        fld_make(5, 2, (1, 0, 1))  # x^2 + 1 = (x - 2)(x + 2)
    assert not is_irreducible([1, 0, 1], 5)
    assert is_irreducible([2, 0, 1], 5)


def test_small_arithmetic():
    F = fld_make(73)
    assert F(-3) * F(22) == 7
    assert F(5) ** 72 == 1
    assert F(3) / F(3) == 1


def test_inverse_axiom_f25():
    F = fld_make(5, 2)
    for a in F.elements():
        if a:
            assert a * a.inverse() == F.one


def test_log_bookkeeping():
    F = fld_make(7, 3)
    rng = random.Random(3)
    n = F.order - 1
    for _ in range(200):
        m, k = rng.randrange(n), rng.randrange(n)
        assert F.from_log(m) * F.from_log(k) == F.from_log((m + k) % n)
        assert F.log_of(F.from_log(m)) == m


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        fld_make(5)(1) + fld_make(7)(1)


def test_frobenius_fixes_subfield():
    F = fld_make(5, 4)
    sub = [x for x in F.elements() if x**25 == x]
    assert len(sub) == 25
    assert all(F.in_subfield(x, 2) for x in sub)


def test_zech_table_against_direct_sums():
    F = fld_make(3, 4)
    t = F.tables
    for k in range(F.order - 1):
        s = F.from_log(k) + F.one
        assert t.zech[k] == (-1 if not s else F.log_of(s))


def test_vertex_labels():
    F = fld_make(73)
    assert vertex_label(None, F) == "∞"
    assert vertex_label(F.zero, F) == "'0'"
    assert vertex_label(F.g**5, F) == "5"
    for i in range(74):
        v = vertex_from_id(F, i)
        assert vertex_id(v) == i
        assert label_from_id(i) == vertex_label(v, F)


EX1_B = (1, 0, 28, 0, -21, 0, 28, 0, 1, 0)
EX1_A = (1, 0, -3, 0, 5, 0, -5, 0, 3, 0, -1)


def test_poly_eval_examples():
    F = fld_make(73)
    b = Poly.from_desc(F, EX1_B)
    a = Poly.from_desc(F, EX1_A)
    assert b(F.zero) == 0
    assert a(F.one) == 1 - 3 + 5 - 5 + 3 - 1
    assert Poly(F, (F(9),))(F(40)) == 9


def test_eval_all_matches_scalar():
    F = fld_make(11, 2)
    f = Poly(F, (F.g, F(3), F.zero, F.g**7, F.one))
    logs = eval_all(f)
    xs = [F.from_log(m) for m in range(F.order - 1)] + [F.zero]
    for x, lg in zip(xs, logs):
        y = f(x)
        assert lg == (-1 if not y else F.log_of(y))


def test_poly_divmod_gcd():
    F = fld_make(13)
    x = Poly(F, (0, 1))
    f = (x - Poly(F, (2,))) * (x - Poly(F, (5,)))
    g = (x - Poly(F, (5,))) * (x + Poly(F, (1,)))
    assert f.gcd(g) == (x - Poly(F, (5,))).monic()
    q, r = f.divmod(x - Poly(F, (2,)))
    assert not r and q == x - Poly(F, (5,))


def test_exp_table_backends_agree():
    F = fld_make(7, 3)
    M = F.mul_matrix(F.g)
    ref = _kernels.NUMPY_KERNELS["build_exp_table"](M, F.p, F.degree, F.order)
    assert np.array_equal(ref, F.tables.exp)
    if _kernels.NUMBA_KERNELS:
        fast = _kernels.NUMBA_KERNELS["build_exp_table"](M.astype(np.int64), F.p, F.degree, F.order)
        assert np.array_equal(ref, fast)
