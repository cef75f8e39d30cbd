from fractions import Fraction as F

import pytest

from steinitz.linalg import Matrix
from steinitz.norms import LINF_NORM
from steinitz.rearrange import VectorSequence
from steinitz.blockip import FourBlockInstance
from steinitz.generate import gen_zero_sum_family
from steinitz.oracles import (BudgetExceeded, brute_colorful_optimum, brute_ilp,
                              brute_rearrange_optimum, brute_single_sum)


def test_brute_rearrange_two_elements():
    seq = VectorSequence(((F(1),), (F(-1),)), 1, LINF_NORM)
    assert brute_rearrange_optimum(seq) == 1


def test_brute_rearrange_axis_vectors():
    vs = ((F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(0), F(-1)))
    seq = VectorSequence(vs, 2, LINF_NORM)
    assert brute_rearrange_optimum(seq) == 1


def test_brute_rearrange_budget():
    seq = VectorSequence(tuple(((F(0),)) for _ in range(9)), 1, LINF_NORM)
    seq = VectorSequence(tuple((F(0),) for _ in range(9)), 1, LINF_NORM)
    with pytest.raises(BudgetExceeded):
        brute_rearrange_optimum(seq, budget=1000)


def test_brute_colorful_bound():
    fam = gen_zero_sum_family(1, 2, 2, LINF_NORM, 5)
    opt = brute_colorful_optimum(fam)
    assert opt <= min(2 * 1, 40)


def test_brute_colorful_budget():
    fam = gen_zero_sum_family(1, 3, 4, LINF_NORM, 6)
    with pytest.raises(BudgetExceeded):
        brute_colorful_optimum(fam, budget=100)


def test_brute_single_sum_edges():
    fam = gen_zero_sum_family(2, 2, 3, LINF_NORM, 7)
    assert brute_single_sum(fam, 0) == 0
    assert brute_single_sum(fam, 3) == 0


def test_brute_single_sum_budget():
    fam = gen_zero_sum_family(1, 5, 8, LINF_NORM, 8)
    with pytest.raises(BudgetExceeded):
        brute_single_sum(fam, 4, budget=100)


def _knapsack_instance():
    # single linking row 2x + y1 + 3y2 = 7 with small boxes; the diagonal
    # rows are zero so the search is a plain knapsack
    return FourBlockInstance.make(
        Matrix.from_rows([[2]]),
        [Matrix.zeros(1, 1), Matrix.zeros(1, 1)],
        [Matrix.zeros(1, 1), Matrix.zeros(1, 1)],
        [Matrix.from_rows([[1]]), Matrix.from_rows([[3]])],
        (7, 0, 0), (3,), (1, 2), (F(2),), (F(3), F(2)))


def test_brute_ilp_knapsack_hand_check():
    inst = _knapsack_instance()
    res = brute_ilp(inst)
    assert res is not None
    z, value = res
    # hand enumeration: 2x + y1 + 3y2 = 7, x <= 2, y1 <= 3, y2 <= 2,
    # maximize 3x + y1 + 2y2: best is x=2, y1=3, y2=0 -> 9
    assert value == 9 and z == (2, 3, 0)


def test_brute_ilp_zero_objective():
    inst = _knapsack_instance()
    inst2 = FourBlockInstance.make(
        inst.A0, list(inst.B), list(inst.A), list(inst.C), inst.b,
        (0,), (0, 0), inst.ux, inst.uy)
    res = brute_ilp(inst2)
    assert res is not None and res[1] == 0


def test_brute_ilp_infeasible():
    inst = _knapsack_instance()
    bad = FourBlockInstance.make(
        inst.A0, list(inst.B), list(inst.A), list(inst.C), (100, 0, 0),
        inst.cx, inst.cy, inst.ux, inst.uy)
    assert brute_ilp(bad) is None


def test_brute_ilp_unbounded_box_rejected():
    inst = _knapsack_instance()
    open_inst = FourBlockInstance.make(
        inst.A0, list(inst.B), list(inst.A), list(inst.C), inst.b,
        inst.cx, inst.cy, (None,), inst.uy)
    with pytest.raises(ValueError):
        brute_ilp(open_inst)
    # with x freed up to the cap, x=3 y1=1 y2=0 wins: 2*3+1 = 7, value 10
    assert brute_ilp(open_inst, box_cap=4)[1] == 10
