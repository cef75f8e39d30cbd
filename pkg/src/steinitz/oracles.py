"""Brute-force references; every bound in the library is checked against
these at tiny scale.  Budgets are hard caps with explicit errors, never
silent truncation."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations

from .linalg import ZERO, rat
from .norms import norm_eval
from .rearrange import VectorSequence
from .colorful import ColoredFamily

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


def brute_rearrange_optimum(seq: VectorSequence, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Exact minimum over all m! orders of the max prefix norm."""
    m = len(seq)
    if math.factorial(m) > budget:
        raise BudgetExceeded(f"{m}! exceeds budget {budget}")
    vectors = seq.vectors
    d = seq.dim
    best = None

    def dfs(remaining, prefix, curmax):
        nonlocal best
        if best is not None and curmax >= best:
            return
        if not remaining:
            best = curmax
            return
        for i, idx in enumerate(remaining):
            nxt = tuple(p + v for p, v in zip(prefix, vectors[idx]))
            val = norm_eval(seq.norm, nxt)
            dfs(remaining[:i] + remaining[i + 1:], nxt, max(curmax, val))

    dfs(tuple(range(m)), (ZERO,) * d, ZERO)
    return best


def brute_colorful_optimum(fam: ColoredFamily, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Exact minimum over all per-color permutation tuples of the max
    norm over the n*k-element prefixes."""
    n, m = fam.colors, fam.length
    total = math.factorial(m) ** n
    if total > budget:
        raise BudgetExceeded(f"(m!)^n = {total} exceeds budget {budget}")
    best = None
    perms = list(permutations(range(m)))

    def dfs(color, chosen):
        nonlocal best
        if color == n:
            prefix = [ZERO] * fam.dim
            curmax = ZERO
            for k in range(m):
                for j in range(n):
                    v = fam.vectors[j][chosen[j][k]]
                    for i in range(fam.dim):
                        prefix[i] += v[i]
                val = norm_eval(fam.norm, tuple(prefix))
                if val > curmax:
                    curmax = val
                if best is not None and curmax >= best:
                    return
            best = curmax
            return
        for p in perms:
            dfs(color + 1, chosen + [p])

    dfs(0, [])
    return best


def brute_single_sum(fam: ColoredFamily, k: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Exact minimum of the selected-sum norm over all equal-size-k
    selections, one index set per color."""
    n, m = fam.colors, fam.length
    per_color = math.comb(m, k)
    if per_color ** n > budget:
        raise BudgetExceeded(f"C(m,k)^n = {per_color ** n} exceeds budget {budget}")
    # fold color by color, deduplicating partial sums
    partial = {(ZERO,) * fam.dim: None}
    for j in range(n):
        sums = set()
        for sel in combinations(range(m), k):
            s = [ZERO] * fam.dim
            for i in sel:
                v = fam.vectors[j][i]
                for r in range(fam.dim):
                    s[r] += v[r]
            sums.add(tuple(s))
        nxt = set()
        for p in partial:
            for s in sums:
                nxt.add(tuple(a + b for a, b in zip(p, s)))
        partial = nxt
    return min(norm_eval(fam.norm, p) for p in partial)


def brute_ilp(inst, box_cap: int | None = None):
    """Exact integer optimum of a 4-block instance by full enumeration.

    Returns (z, value) or None when infeasible inside the search box.
    Requires finite upper bounds, or box_cap to close them off.
    """
    from .lp import enum_integer_points

    H = inst.H_matrix()
    bounds = list(inst.ux) + list(inst.uy)
    upper = []
    for u in bounds:
        if u is None:
            if box_cap is None:
                raise ValueError("unbounded search box: provide box_cap")
            upper.append(Fraction(box_cap))
        else:
            upper.append(min(rat(u), Fraction(box_cap)) if box_cap is not None else rat(u))
    b = tuple(inst.b)
    c = tuple(inst.cx) + tuple(inst.cy)
    best = None
    best_val = None
    for z in enum_integer_points((ZERO,) * len(upper), tuple(upper)):
        if H.mul_vec(z) != b:
            continue
        val = sum((ci * zi for ci, zi in zip(c, z)), ZERO)
        if best_val is None or val > best_val:
            best, best_val = z, val
    if best is None:
        return None
    return best, best_val
