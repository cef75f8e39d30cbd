import random
from fractions import Fraction as F

import pytest

from steinitz.linalg import (Matrix, ceil_sqrt, det, lcm_abs_dets, null_space,
                             primitive_integer_vector, rank, solve_linear)
from steinitz.norms import BlockMax, L1_NORM, LINF_NORM, norm_eval


def test_norm_examples():
    assert norm_eval(LINF_NORM, (F(3), F(-4))) == 4
    assert norm_eval(L1_NORM, (F(1, 2), F(-1, 2))) == 1
    assert norm_eval(BlockMax(LINF_NORM, 2), (F(1), F(0), F(0), F(-5))) == 5


def test_norm_dimension_mismatch():
    with pytest.raises(ValueError):
        norm_eval(BlockMax(LINF_NORM, 2), (F(1), F(0), F(0)))


def test_norm_axioms_random():
    rng = random.Random(7)
    for spec in (L1_NORM, LINF_NORM, BlockMax(L1_NORM, 2)):
        for _ in range(50):
            d = 4
            v = tuple(F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(d))
            w = tuple(F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(d))
            a = F(rng.randint(-6, 6), rng.randint(1, 5))
            assert norm_eval(spec, tuple(a * x for x in v)) == abs(a) * norm_eval(spec, v)
            lhs = norm_eval(spec, tuple(x + y for x, y in zip(v, w)))
            assert lhs <= norm_eval(spec, v) + norm_eval(spec, w)
            assert norm_eval(spec, v) >= 0
            assert (norm_eval(spec, v) == 0) == all(x == 0 for x in v)


def test_solve_linear_examples():
    assert solve_linear(Matrix.identity(2), (F(3), F(7))) == (3, 7)
    assert solve_linear(Matrix.from_rows([[1, 1], [1, -1]]), (F(2), F(0))) == (1, 1)
    assert solve_linear(Matrix.from_rows([[1], [1]]), (F(0), F(1))) is None


def test_solve_linear_roundtrip_random():
    rng = random.Random(3)
    for _ in range(40):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        M = Matrix.from_rows([[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)])
        b = tuple(F(rng.randint(-5, 5)) for _ in range(r))
        x = solve_linear(M, b)
        if x is not None:
            assert M.mul_vec(x) == b


def test_null_space_examples():
    assert null_space(Matrix.identity(3)) == []
    basis = null_space(Matrix.from_rows([[1, -1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] == v[1] != 0
    assert len(null_space(Matrix.zeros(1, 2))) == 2


def test_null_space_properties_random():
    rng = random.Random(11)
    for _ in range(40):
        r, c = rng.randint(1, 3), rng.randint(1, 5)
        M = Matrix.from_rows([[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)])
        basis = null_space(M)
        for v in basis:
            assert all(x == 0 for x in M.mul_vec(v))
        assert len(basis) == c - rank(M)
        if basis:
            assert rank(Matrix.from_rows(basis)) == len(basis)


def test_lcm_abs_dets_examples():
    assert lcm_abs_dets([Matrix.from_rows([[2]])], 1) == 2
    assert lcm_abs_dets([Matrix.from_rows([[2, 3]])], 1) == 6
    assert lcm_abs_dets([Matrix.identity(2)], 2) == 1


def test_lcm_abs_dets_divisibility_and_hadamard():
    rng = random.Random(5)
    for _ in range(20):
        s = rng.randint(1, 2)
        cols = rng.randint(s, 4)
        delta = rng.randint(1, 3)
        mats = [Matrix.from_rows([[rng.randint(-delta, delta) for _ in range(cols)]
                                  for _ in range(s)]) for _ in range(2)]
        g = lcm_abs_dets(mats, s, entry_bound=delta)
        from itertools import combinations
        for M in mats:
            for sub in combinations(range(cols), s):
                d = det(M.column_submatrix(sub))
                if d != 0:
                    assert g % abs(int(d)) == 0


def test_ceil_sqrt():
    assert ceil_sqrt(0) == 0
    assert ceil_sqrt(1) == 1
    assert ceil_sqrt(2) == 2
    assert ceil_sqrt(4) == 2
    assert ceil_sqrt(8) == 3


def test_primitive_integer_vector():
    assert primitive_integer_vector((F(2, 3), F(4, 3))) == (1, 2)
    assert primitive_integer_vector((F(-6), F(9))) == (-2, 3)
