"""Seeded instance generation.  Identical seed and parameters give a
bit-identical instance (Python's Mersenne Twister is stable across
platforms)."""

from __future__ import annotations

import random
from fractions import Fraction

from .linalg import Matrix, ZERO, rank
from .lp import BoxLP, lp_solve
from .norms import NormSpec, norm_eval
from .colorful import ColoredFamily
from .blockip import FourBlockInstance, KernelPoint
from .rearrange import VectorSequence


class GenerationError(RuntimeError):
    """Retry budget exhausted; reseed and try again."""


def gen_zero_sum_family(d: int, n: int, m: int, norm: NormSpec, seed: int,
                        denom: int = 16) -> ColoredFamily:
    """n*m rational vectors with denominator denom, recentered to an exact
    zero sum and rescaled into the unit ball of the requested norm."""
    if n * m < 1:
        raise ValueError("need at least one vector")
    if denom < 1:
        raise ValueError("denom must be positive")
    rng = random.Random(seed)
    vs = [[[Fraction(rng.randint(-denom, denom), denom) for _ in range(d)]
           for _ in range(m)] for _ in range(n)]
    total = [ZERO] * d
    for color in vs:
        for v in color:
            for r in range(d):
                total[r] += v[r]
    mean = [x / (n * m) for x in total]
    vs = [[[x - mu for x, mu in zip(v, mean)] for v in color] for color in vs]
    radius = max((norm_eval(norm, tuple(v)) for color in vs for v in color),
                 default=ZERO)
    if radius > 1:
        vs = [[[x / radius for x in v] for v in color] for color in vs]
    vectors = tuple(tuple(tuple(v) for v in color) for color in vs)
    return ColoredFamily(d, n, m, vectors, norm)


def gen_zero_sum_sequence(d: int, m: int, norm: NormSpec, seed: int,
                          denom: int = 16) -> VectorSequence:
    fam = gen_zero_sum_family(d, 1, m, norm, seed, denom)
    return VectorSequence(fam.vectors[0], d, norm)


def gen_four_block(s0: int, s: int, t0: int, t: int, n: int, delta: int, seed: int,
                   scale: int | None = None, zero_a0: bool = False,
                   require_full_rank: bool = True, ub_cap: int = 3,
                   max_retries: int = 60):
    """A random 4-block instance plus a planted rational kernel point.

    The kernel point is a vertex of {H z = 0, z >= 0, sum z = scale} for a
    seeded objective; blocks are redrawn when that slice is empty.  With
    require_full_rank the diagonal blocks are redrawn until they have full
    row rank (needed by the decomposition pipeline; pass False to allow
    degenerate blocks such as delta = 0).
    """
    rng = random.Random(seed)
    dim = t0 + n * t
    total = scale if scale is not None else 2 * dim

    def draw_matrix(r, c):
        return Matrix.from_rows(
            [[rng.randint(-delta, delta) for _ in range(c)] for _ in range(r)])

    for _ in range(max_retries):
        A0 = Matrix.zeros(s0, t0) if zero_a0 else draw_matrix(s0, t0)
        B = [draw_matrix(s, t0) for _ in range(n)]
        A = [draw_matrix(s, t) for _ in range(n)]
        C = [draw_matrix(s0, t) for _ in range(n)]
        if require_full_rank and any(rank(Ai) != s for Ai in A):
            continue
        # integer feasible point fixes b; finite bounds keep brute force finite
        z0 = [rng.randint(0, ub_cap) for _ in range(dim)]
        cx = tuple(rng.randint(-3, 3) for _ in range(t0))
        cy = tuple(rng.randint(-3, 3) for _ in range(n * t))
        ux = (Fraction(ub_cap),) * t0
        uy = (Fraction(ub_cap),) * (n * t)
        inst = FourBlockInstance.make(
            A0, B, A, C, (0,) * (s0 + n * s), cx, cy, ux, uy)
        b = inst.H_matrix().mul_vec(tuple(z0))
        inst = FourBlockInstance.make(A0, B, A, C, b, cx, cy, ux, uy)

        obj = tuple(Fraction(rng.randint(1, 7)) for _ in range(dim))
        H = inst.H_matrix()
        rows = [list(H.row(r)) for r in range(H.rows)]
        rows.append([1] * dim)
        slice_lp = BoxLP(Matrix.from_rows(rows),
                         (ZERO,) * H.rows + (Fraction(total),),
                         (ZERO,) * dim, (None,) * dim, obj)
        res = lp_solve(slice_lp)
        if not res.is_optimal:
            continue
        planted = KernelPoint(res.x[:t0], res.x[t0:])
        return inst, planted
    raise GenerationError(
        f"no nontrivial nonnegative kernel point after {max_retries} draws (seed {seed})")


def gen_adversarial_scalar_family(n: int, m: int, seed: int,
                                  denom: int = 16) -> ColoredFamily:
    """d = 1 family whose colors are near-identical sign patterns, so the
    identity arrangement has row sums on the order of n.  Exercises the
    row-balancing loop."""
    rng = random.Random(seed)
    base = [1 if i < m // 2 else -1 for i in range(m)]
    cols = []
    for _ in range(n):
        col = []
        for i in range(m):
            jitter = Fraction(rng.randint(0, denom // 4), denom)
            col.append(base[i] * (1 - jitter))
        cols.append(col)
    total = sum(x for col in cols for x in col)
    mean = total / (n * m)
    cols = [[x - mean for x in col] for col in cols]
    radius = max(abs(x) for col in cols for x in col)
    if radius > 1:
        cols = [[x / radius for x in col] for col in cols]
    from .norms import LINF_NORM
    vectors = tuple(tuple((x,) for x in col) for col in cols)
    return ColoredFamily(1, n, m, vectors, LINF_NORM)


def gen_rank_deficient_sequence(d: int, r: int, m: int, seed: int,
                                denom: int = 16) -> VectorSequence:
    """Zero-sum unit-ball sequence in R^d whose span has dimension at most
    r < d: a random integer map applied to a dimension-r family."""
    if not 1 <= r < d:
        raise ValueError("need 1 <= r < d")
    from .norms import LINF_NORM
    rng = random.Random(seed)
    inner = gen_zero_sum_family(r, 1, m, LINF_NORM, seed * 2 + 1, denom)
    lift = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(d)]
    vs = []
    for v in inner.vectors[0]:
        vs.append(tuple(sum(lift[row][c] * v[c] for c in range(r)) for row in range(d)))
    from .norms import LINF_NORM
    radius = max((max(abs(x) for x in v) for v in vs), default=ZERO)
    if radius > 1:
        vs = [tuple(x / radius for x in v) for v in vs]
    return VectorSequence(tuple(vs), d, LINF_NORM)


def gen_unit_family(d: int, n: int, m: int, norm: NormSpec, seed: int,
                    denom: int = 16) -> ColoredFamily:
    """Unit-ball family without recentering; the union generally does not
    sum to zero (input for the affine variant)."""
    rng = random.Random(seed)
    vs = [[[Fraction(rng.randint(-denom, denom), denom) for _ in range(d)]
           for _ in range(m)] for _ in range(n)]
    radius = max((norm_eval(norm, tuple(v)) for color in vs for v in color),
                 default=ZERO)
    if radius > 1:
        vs = [[[x / radius for x in v] for v in color] for color in vs]
    vectors = tuple(tuple(tuple(v) for v in color) for color in vs)
    return ColoredFamily(d, n, m, vectors, norm)
