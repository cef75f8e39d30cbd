"""Colorful rearrangement: permuting several unit-ball sequences at once.

Main entry points:

* ``colorful_rearrange`` certifies prefix sums of n jointly permuted
  sequences against min{n*d, 40*d^5}.  The n-independent route first runs
  ``balance_rows``, a local-improvement loop that caps every row sum by
  (d+1)^2 (4d(d+1)+2), then orders the balanced rows classically.
* ``colorful_affine`` drops the zero-sum requirement by recentering, at
  the cost of a factor 2 in the certified bound.
* ``single_partial_sum`` picks one size-k subset per sequence whose joint
  sum has norm at most d, via vertex purification and sorted rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Vec, ZERO, ONE, rat, vsub, vscale, is_zero_vec, null_space
from .lp import BoxLP, purify_to_vertex
from .norms import BlockMax, NormSpec, norm_eval
from .rearrange import ZeroSumRequired, rearrangement_order

ROUTE_TRIVIAL = "trivial_nd"
ROUTE_BALANCED = "balanced_40d5"


@dataclass(frozen=True)
class ColoredFamily:
    """n sequences ("colors") of m vectors each in dimension d; access
    vectors[j][i] for the i-th vector of color j."""

    dim: int
    colors: int
    length: int
    vectors: tuple
    norm: NormSpec

    def __post_init__(self):
        if len(self.vectors) != self.colors:
            raise ValueError("color count mismatch")
        for color in self.vectors:
            if len(color) != self.length:
                raise ValueError("per-color length mismatch")
            for v in color:
                if len(v) != self.dim:
                    raise ValueError("vector dimension mismatch")

    def total(self) -> Vec:
        out = [ZERO] * self.dim
        for color in self.vectors:
            for v in color:
                for i, x in enumerate(v):
                    out[i] += x
        return tuple(out)

    def max_norm(self) -> Fraction:
        return max((norm_eval(self.norm, v) for color in self.vectors for v in color),
                   default=ZERO)


@dataclass(frozen=True)
class ColorfulCertificate:
    permutations: tuple       # n orders, each position -> original index
    certified_bound: Fraction
    achieved_max: Fraction
    route: str
    phase1_row_bound: Fraction | None = None
    drift: Vec | None = None               # per-position drift, affine variant only
    tight_bound_met: bool | None = None    # soft check of the un-doubled bound


@dataclass(frozen=True)
class SubsetSelection:
    index_sets: tuple   # n sorted index tuples, all of size k
    k: int
    achieved: Fraction


@dataclass(frozen=True)
class BalanceResult:
    orders: tuple           # sigma_j as row -> original index
    row_bound: Fraction     # final max row-sum norm
    history: tuple          # (max_row_norm, count_attaining) per inspection


def _require_unit_ball(fam: ColoredFamily):
    if fam.max_norm() > 1:
        raise ValueError("family has a vector outside the unit ball")


def _require_zero_sum_union(fam: ColoredFamily):
    if not is_zero_vec(fam.total()):
        raise ZeroSumRequired("union of the family is not zero-sum")


def _colorful_prefix_max(fam: ColoredFamily, perms, drift: Vec | None = None) -> Fraction:
    prefix = [ZERO] * fam.dim
    best = ZERO
    for k in range(fam.length):
        for j in range(fam.colors):
            v = fam.vectors[j][perms[j][k]]
            for i in range(fam.dim):
                prefix[i] += v[i]
        if drift is None:
            val = norm_eval(fam.norm, tuple(prefix))
        else:
            val = norm_eval(fam.norm, tuple(p - (k + 1) * d for p, d in zip(prefix, drift)))
        if val > best:
            best = val
    return best


# ---------------------------------------------------------------------------
# Caratheodory subroutine


def conic_caratheodory_anchor(row_sums, anchor: int):
    """Indices (including anchor, at most d+1 of them) and convex
    coefficients lam >= 0 with sum(lam) = 1 and sum(lam_i row_i) = 0.

    Writes -row[anchor] as a nonnegative combination of the other rows
    (the all-ones combination works because the rows are zero-sum), then
    prunes the support below d+1 by eliminating linear dependencies
    without leaving the nonnegative orthant.
    """
    rows = [tuple(rat(x) for x in r) for r in row_sums]
    d = len(rows[0]) if rows else 0
    total = [sum(col, ZERO) for col in zip(*rows)] if rows else []
    if any(x != 0 for x in total):
        raise ZeroSumRequired("row sums are not zero-sum")
    if is_zero_vec(rows[anchor]):
        return (anchor,), (ONE,)

    mu = {i: ONE for i in range(len(rows)) if i != anchor}
    # drop zero rows immediately; they contribute nothing
    for i in list(mu):
        if is_zero_vec(rows[i]):
            del mu[i]
    while len(mu) > d:
        supp = sorted(mu)
        cols = Matrix.from_rows([rows[i] for i in supp]).transpose()
        kern = null_space(cols)
        if not kern:
            break
        nu = dict(zip(supp, kern[0]))
        if not any(c > 0 for c in nu.values()):
            nu = {i: -c for i, c in nu.items()}
        theta = min(mu[i] / c for i, c in nu.items() if c > 0)
        for i, c in nu.items():
            mu[i] -= theta * c
        mu = {i: v for i, v in mu.items() if v != 0}
    scale = ONE / (ONE + sum(mu.values(), ZERO))
    indices = tuple(sorted([anchor] + list(mu)))
    lams = tuple(scale if i == anchor else mu[i] * scale for i in indices)
    if len(indices) > d + 1:
        raise AssertionError("Caratheodory support exceeded d+1")
    residual = [ZERO] * d
    for i, lam in zip(indices, lams):
        for r in range(d):
            residual[r] += lam * rows[i][r]
    if any(x != 0 for x in residual) or sum(lams, ZERO) != 1:
        raise AssertionError("Caratheodory coefficients failed verification")
    return indices, lams


# ---------------------------------------------------------------------------
# row balancing (the n-independent route)


def balance_rows(fam: ColoredFamily) -> BalanceResult:
    """Per-color permutations capping every row-sum norm by
    (d+1)^2 (4d(d+1)+2).

    Local improvement: while some row exceeds the threshold, pick the worst
    row, find at most d more rows whose sums surround the origin, rotate
    windows of consecutive colors among those rows (after a classical
    rearrangement of the per-color deviations decides the color order),
    and recheck.  The pair (max row norm, number of rows attaining it)
    strictly decreases lexicographically, which gives termination.
    """
    _require_unit_ball(fam)
    _require_zero_sum_union(fam)
    d, n, m = fam.dim, fam.colors, fam.length
    threshold = Fraction((d + 1) ** 2 * (4 * d * (d + 1) + 2))
    sigma = [list(range(m)) for _ in range(n)]
    history = []
    prev = None
    while True:
        rows = []
        for i in range(m):
            acc = [ZERO] * d
            for j in range(n):
                v = fam.vectors[j][sigma[j][i]]
                for r in range(d):
                    acc[r] += v[r]
            rows.append(tuple(acc))
        norms = [norm_eval(fam.norm, row) for row in rows]
        mx = max(norms, default=ZERO)
        cnt = sum(1 for v in norms if v == mx)
        history.append((mx, cnt))
        if prev is not None and not (mx, cnt) < prev:
            raise AssertionError("row-balancing potential failed to decrease")
        prev = (mx, cnt)
        if mx <= threshold:
            break

        anchor = norms.index(mx)
        sel_rows, _lams = conic_caratheodory_anchor(rows, anchor)
        p = len(sel_rows)
        t = n // p
        if t < 1 or n - p * t >= t:
            raise AssertionError("window arithmetic requires n much larger than d")

        # stacked per-color deviations over the selected rows; norm <= 2 each
        block_norm = BlockMax(fam.norm, d)
        stacked = []
        for j in range(n):
            parts = []
            for r in sel_rows:
                v = fam.vectors[j][sigma[j][r]]
                parts.extend(x - rows[r][idx] / n for idx, x in enumerate(v))
            w = tuple(parts)
            if norm_eval(block_norm, w) > 2:
                raise AssertionError("stacked deviation left the radius-2 ball")
            stacked.append(w)
        tau = rearrangement_order(stacked, d * p)

        new_sigma = [list(s) for s in sigma]
        for pos, j in enumerate(tau):
            w = (pos // t) % p
            for a in range(p):
                new_sigma[j][sel_rows[a]] = sigma[j][sel_rows[(a + w) % p]]
        sigma = new_sigma

        # the proof's chain bound on every touched row, and strict progress
        cap = Fraction((d + 1) * (4 * d * (d + 1) + 2)) + Fraction(d, d + 1) * mx
        for a in sel_rows:
            acc = [ZERO] * d
            for j in range(n):
                v = fam.vectors[j][sigma[j][a]]
                for r in range(d):
                    acc[r] += v[r]
            val = norm_eval(fam.norm, tuple(acc))
            if val > cap:
                raise AssertionError("touched row exceeded the improvement chain bound")
            if val >= mx:
                raise AssertionError("touched row failed to improve strictly")
    return BalanceResult(tuple(tuple(s) for s in sigma), prev[0], tuple(history))


# ---------------------------------------------------------------------------
# the colorful rearrangement bound


def colorful_rearrange(fam: ColoredFamily) -> ColorfulCertificate:
    """Permutations of each color with every joint prefix bounded by
    min{n*d, 40*d^5}."""
    _require_unit_ball(fam)
    _require_zero_sum_union(fam)
    d, n, m = fam.dim, fam.colors, fam.length
    bound_nd = Fraction(n * d)
    bound_poly = Fraction(40 * d ** 5)
    certified = min(bound_nd, bound_poly)

    aggregate = []
    for i in range(m):
        acc = [ZERO] * d
        for j in range(n):
            v = fam.vectors[j][i]
            for r in range(d):
                acc[r] += v[r]
        aggregate.append(tuple(acc))
    rho = rearrangement_order(aggregate, d)
    perms_trivial = tuple(tuple(rho) for _ in range(n))
    achieved_trivial = _colorful_prefix_max(fam, perms_trivial)

    best = (achieved_trivial, ROUTE_TRIVIAL, perms_trivial)
    row_bound = None
    if bound_nd > bound_poly:
        bal = balance_rows(fam)
        row_bound = bal.row_bound
        balanced_rows = []
        for i in range(m):
            acc = [ZERO] * d
            for j in range(n):
                v = fam.vectors[j][bal.orders[j][i]]
                for r in range(d):
                    acc[r] += v[r]
            balanced_rows.append(tuple(acc))
        rho2 = rearrangement_order(balanced_rows, d)
        perms_bal = tuple(tuple(order[i] for i in rho2) for order in bal.orders)
        achieved_bal = _colorful_prefix_max(fam, perms_bal)
        if achieved_bal < best[0]:
            best = (achieved_bal, ROUTE_BALANCED, perms_bal)
    achieved, route, perms = best
    if achieved > certified:
        raise AssertionError("colorful prefix bound min{nd, 40d^5} violated")
    return ColorfulCertificate(perms, certified, achieved, route, row_bound)


def colorful_affine(fam: ColoredFamily) -> ColorfulCertificate:
    """Affine variant: no zero-sum requirement; prefixes are compared
    against the proportional share (k/m) of the total sum.

    Recentring pushes vectors to norm <= 2, so the certified bound is
    2 * min{n*d, 40*d^5}; whether the un-doubled bound held anyway is
    reported in tight_bound_met.
    """
    _require_unit_ball(fam)
    d, n, m = fam.dim, fam.colors, fam.length
    total = fam.total()
    center = vscale(total, Fraction(1, n * m))
    centered = tuple(
        tuple(vscale(vsub(v, center), Fraction(1, 2)) for v in color)
        for color in fam.vectors)
    inner = ColoredFamily(d, n, m, centered, fam.norm)
    cert = colorful_rearrange(inner)
    drift = vscale(total, Fraction(1, m))
    achieved = _colorful_prefix_max(fam, cert.permutations, drift)
    certified = 2 * min(Fraction(n * d), Fraction(40 * d ** 5))
    if achieved > certified:
        raise AssertionError("affine deviation bound 2*min{nd, 40d^5} violated")
    return ColorfulCertificate(
        cert.permutations, certified, achieved, cert.route, cert.phase1_row_bound,
        drift=drift, tight_bound_met=bool(achieved <= certified / 2))


# ---------------------------------------------------------------------------
# single partial sum


def round_to_binary(y: Vec, k: int):
    """0/1 vector with exactly k ones at the k largest entries of y
    (ties to the lower index); l1 distance to y is at most m/2."""
    y = tuple(rat(v) for v in y)
    m = len(y)
    if any(v < 0 or v > 1 for v in y):
        raise ValueError("entries must lie in [0, 1]")
    if sum(y, ZERO) != k:
        raise ValueError("entries must sum to k exactly")
    if not 0 <= k <= m:
        raise ValueError("k out of range")
    ranked = sorted(range(m), key=lambda i: (-y[i], i))
    z = [0] * m
    for i in ranked[:k]:
        z[i] = 1
    dist = sum((abs(yi - zi) for yi, zi in zip(y, z)), ZERO)
    if dist > Fraction(m, 2):
        raise AssertionError("rounding distance exceeded m/2")
    return tuple(z)


def single_partial_sum(fam: ColoredFamily, k: int) -> SubsetSelection:
    """One size-k index set per color whose joint selected sum has norm
    at most d.

    Purifies the uniform point of the selection polytope to a vertex
    (at most 2d fractional entries), then rounds each color's fractional
    part with round_to_binary.
    """
    _require_unit_ball(fam)
    _require_zero_sum_union(fam)
    d, n, m = fam.dim, fam.colors, fam.length
    if not 0 <= k <= m:
        raise ValueError("k out of range")

    # variables alpha[j][i] flattened j-major
    nm = n * m
    rows = []
    b = []
    for j in range(n):
        row = [ZERO] * nm
        for i in range(m):
            row[j * m + i] = ONE
        rows.append(row)
        b.append(Fraction(k))
    for r in range(d):
        row = [fam.vectors[j][i][r] for j in range(n) for i in range(m)]
        rows.append(row)
        b.append(ZERO)
    lp = BoxLP(Matrix.from_rows(rows), tuple(b), (ZERO,) * nm, (ONE,) * nm)
    uniform = (Fraction(k, m),) * nm if m else ()
    vertex = purify_to_vertex(lp, uniform)

    frac_total = sum(1 for v in vertex if 0 < v < 1)
    if frac_total > 2 * d:
        raise AssertionError("vertex has more than 2d fractional entries")

    index_sets = []
    for j in range(n):
        alpha = vertex[j * m:(j + 1) * m]
        frac_idx = [i for i, v in enumerate(alpha) if 0 < v < 1]
        ones = {i for i, v in enumerate(alpha) if v == 1}
        if frac_idx:
            kj = Fraction(k) - len(ones)
            if kj.denominator != 1:
                raise AssertionError("fractional part of a color does not sum to an integer")
            z = round_to_binary(tuple(alpha[i] for i in frac_idx), int(kj))
            ones.update(i for i, zi in zip(frac_idx, z) if zi == 1)
        if len(ones) != k:
            raise AssertionError("selection size drifted from k")
        index_sets.append(tuple(sorted(ones)))

    acc = [ZERO] * d
    for j, sel in enumerate(index_sets):
        for i in sel:
            v = fam.vectors[j][i]
            for r in range(d):
                acc[r] += v[r]
    achieved = norm_eval(fam.norm, tuple(acc))
    if achieved > d:
        raise AssertionError("selected sum exceeded the bound d")
    return SubsetSelection(tuple(index_sets), k, achieved)
