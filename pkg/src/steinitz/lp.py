"""Exact linear programming primitives.

All computations run over Fraction.  The simplex is a bounded-variable
tableau method with Bland's rule, so it terminates on degenerate inputs.
Infinite bounds are represented by None and handled symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Vec, ZERO, ONE, rat, primitive_integer_vector, null_space

INF = None  # sentinel for an absent (infinite) bound


class LPError(Exception):
    pass


class InfeasibleStart(LPError):
    """x0 handed to purify_to_vertex is not feasible."""


class NonPointedCone(LPError):
    """The cone contains a line; extreme rays are not well defined."""


@dataclass(frozen=True)
class BoxLP:
    """max objective.x  s.t.  M x = b,  lower <= x <= upper.

    Bound entries equal to None mean -inf (lower) or +inf (upper).
    """

    M: Matrix
    b: Vec
    lower: tuple
    upper: tuple
    objective: Vec | None = None

    def __post_init__(self):
        n = self.M.cols
        if len(self.b) != self.M.rows:
            raise ValueError("b dimension does not match M.rows")
        if len(self.lower) != n or len(self.upper) != n:
            raise ValueError("bound dimensions do not match M.cols")
        if self.objective is not None and len(self.objective) != n:
            raise ValueError("objective dimension does not match M.cols")
        for lo, hi in zip(self.lower, self.upper):
            if lo is not None and hi is not None and lo > hi:
                raise ValueError("lower bound exceeds upper bound")

    def is_feasible_point(self, x: Vec) -> bool:
        if len(x) != self.M.cols:
            return False
        if self.M.mul_vec(x) != tuple(self.b):
            return False
        for xi, lo, hi in zip(x, self.lower, self.upper):
            if lo is not None and xi < lo:
                return False
            if hi is not None and xi > hi:
                return False
        return True


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Vec | None = None
    value: Fraction | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


# ---------------------------------------------------------------------------
# vertex purification


def purify_to_vertex(lp: BoxLP, x0: Vec) -> Vec:
    """Walk from a feasible x0 to a vertex of the feasible region.

    Repeatedly finds a kernel direction of M supported on the strictly
    interior coordinates and moves maximally until a bound becomes tight.
    Columns are streamed once through an incremental elimination, so the
    cost is roughly one Gaussian pass over the interior columns.
    """
    if not lp.is_feasible_point(tuple(x0)):
        raise InfeasibleStart("starting point is not feasible")
    M = lp.M
    nrows = M.rows
    x = [rat(v) for v in x0]

    def is_tight(j):
        return (lp.lower[j] is not None and x[j] == lp.lower[j]) or \
               (lp.upper[j] is not None and x[j] == lp.upper[j])

    # basis entries: [col, reduced column, expansion tag over raw columns, pivot row]
    basis: list[list] = []

    def reduce_column(c):
        """Reduce raw column c against the basis; returns (residual, tag)."""
        v = list(M.col(c)) if nrows else []
        tag = {c: ONE}
        for bc, red, btag, p in basis:
            f = v[p] / red[p] if red[p] else ZERO
            if f:
                for i in range(nrows):
                    if red[i]:
                        v[i] -= f * red[i]
                for k, coef in btag.items():
                    tag[k] = tag.get(k, ZERO) - f * coef
        return v, tag

    def insert(c) -> bool:
        """Try to add column c to the basis; False means c is dependent."""
        v, tag = reduce_column(c)
        pivot = next((i for i in range(nrows) if v[i] != 0), None)
        if pivot is None:
            return False
        basis.append([c, v, tag, pivot])
        return True

    def kernel_direction(c):
        v, tag = reduce_column(c)
        if any(vi != 0 for vi in v):
            return None, tag
        return {k: coef for k, coef in tag.items() if coef != 0}, tag

    pending = [j for j in range(M.cols) if not is_tight(j)]
    idx = 0
    while idx < len(pending):
        c = pending[idx]
        idx += 1
        if is_tight(c):
            continue
        g, _ = kernel_direction(c)
        if g is None:
            insert(c)
            continue
        # line search along +g / -g for the first finite blocking bound
        def max_step(sign):
            best = None
            for j, gj in g.items():
                gj = sign * gj
                if gj > 0:
                    if lp.upper[j] is not None:
                        t = (lp.upper[j] - x[j]) / gj
                        best = t if best is None or t < best else best
                elif gj < 0:
                    if lp.lower[j] is not None:
                        t = (x[j] - lp.lower[j]) / (-gj)
                        best = t if best is None or t < best else best
            return best

        step = max_step(1)
        sign = 1
        if step is None:
            step = max_step(-1)
            sign = -1
        if step is None:
            raise NonPointedCone("feasible region contains a line through x")
        for j, gj in g.items():
            x[j] += sign * step * gj
        tightened = [j for j in g if is_tight(j)]
        if not tightened:
            raise AssertionError("maximal move failed to tighten a bound")
        removed_basic = [e for e in basis if e[0] in tightened]
        if removed_basic:
            keep = [e[0] for e in basis if e[0] not in tightened]
            if c not in tightened:
                keep.append(c)
            basis.clear()
            for col in keep:
                if not insert(col):
                    raise AssertionError("basis rebuild lost independence")
    return tuple(x)


# ---------------------------------------------------------------------------
# bounded-variable simplex


class _Canonical:
    """max c.y  s.t.  A y = b, 0 <= y <= ub (ub entries may be None)."""

    def __init__(self, lp: BoxLP):
        M, n = lp.M, lp.M.cols
        self.b = [rat(v) for v in lp.b]
        self.cols = []      # list of column vectors
        self.ub = []
        self.c = []
        self.const = ZERO
        self.backmap = []   # per original var: ("shift", k, lo) | ("mirror", k, hi) | ("split", k+, k-)
        obj = lp.objective if lp.objective is not None else (ZERO,) * n
        for j in range(n):
            col = [M.at(i, j) for i in range(M.rows)]
            lo, hi, cj = lp.lower[j], lp.upper[j], rat(obj[j])
            if lo is not None:
                if lo != 0:
                    for i in range(M.rows):
                        self.b[i] -= lo * col[i]
                    self.const += cj * lo
                self.backmap.append(("shift", len(self.cols), lo))
                self.cols.append(col)
                self.ub.append(None if hi is None else hi - lo)
                self.c.append(cj)
            elif hi is not None:
                for i in range(M.rows):
                    self.b[i] -= hi * col[i]
                self.const += cj * hi
                self.backmap.append(("mirror", len(self.cols), hi))
                self.cols.append([-v for v in col])
                self.ub.append(None)
                self.c.append(-cj)
            else:
                self.backmap.append(("split", len(self.cols), len(self.cols) + 1))
                self.cols.append(col)
                self.cols.append([-v for v in col])
                self.ub.extend([None, None])
                self.c.extend([cj, -cj])

    def restore(self, y) -> Vec:
        out = []
        for kind, a, bb in self.backmap:
            if kind == "shift":
                out.append(y[a] + bb)
            elif kind == "mirror":
                out.append(bb - y[a])
            else:
                out.append(y[a] - y[bb])
        return tuple(out)


class _Simplex:
    def __init__(self, cols, b, ub):
        self.nrows = len(b)
        self.nstruct = len(cols)
        self.ub = list(ub) + [None] * self.nrows
        # rows made b >= 0, artificial identity appended
        self.T = []
        self.rhs = []
        for i in range(self.nrows):
            row = [col[i] for col in cols]
            bi = b[i]
            if bi < 0:
                row = [-v for v in row]
                bi = -bi
            row.extend(ONE if k == i else ZERO for k in range(self.nrows))
            self.T.append(row)
            self.rhs.append(bi)
        self.basis = [self.nstruct + i for i in range(self.nrows)]
        self.xb = list(self.rhs)
        self.at_upper = set()

    def _iterate(self, c):
        """Run simplex to optimality for objective c (maximize); returns
        "optimal" or "unbounded"."""
        nb_all = self.nstruct + self.nrows if len(c) > self.nstruct else self.nstruct
        while True:
            basic = set(self.basis)
            # reduced costs via multipliers: z_j = c_j - y . col_j with y from basic costs
            # full tableau: c_B . T[:, j]
            cb = [c[v] if v < len(c) else ZERO for v in self.basis]
            entering = None
            direction = 0
            for j in range(nb_all):
                if j in basic or (j >= len(c)):
                    continue
                zj = c[j] - sum((cb[i] * self.T[i][j] for i in range(self.nrows)), ZERO)
                if j in self.at_upper:
                    if zj < 0:
                        entering, direction = j, -1
                        break
                else:
                    if zj > 0:
                        entering, direction = j, 1
                        break
            if entering is None:
                return "optimal"
            col = [self.T[i][entering] for i in range(self.nrows)]
            # ratio test; candidates: (step, tie-break var index, kind, row)
            candidates = []
            if self.ub[entering] is not None:
                candidates.append((self.ub[entering], entering, "flip", -1))
            for i in range(self.nrows):
                rate = -direction * col[i]
                if rate < 0:
                    candidates.append((self.xb[i] / (-rate), self.basis[i], "drop-lower", i))
                elif rate > 0:
                    ubi = self.ub[self.basis[i]]
                    if ubi is not None:
                        candidates.append(((ubi - self.xb[i]) / rate, self.basis[i], "drop-upper", i))
            if not candidates:
                return "unbounded"
            step = min(cand[0] for cand in candidates)
            _, _, kind, row = min(c4 for c4 in candidates if c4[0] == step)
            for i in range(self.nrows):
                self.xb[i] -= direction * step * col[i]
            if kind == "flip":
                if direction == 1:
                    self.at_upper.add(entering)
                else:
                    self.at_upper.discard(entering)
                continue
            leaving = self.basis[row]
            enter_val = (self.ub[entering] if entering in self.at_upper else ZERO) + direction * step
            self.at_upper.discard(entering)
            if kind == "drop-upper":
                self.at_upper.add(leaving)
            self.basis[row] = entering
            self.xb[row] = enter_val
            piv = self.T[row][entering]
            inv = ONE / piv
            self.T[row] = [v * inv for v in self.T[row]]
            prow = self.T[row]
            for i in range(self.nrows):
                if i != row and self.T[i][entering] != 0:
                    f = self.T[i][entering]
                    self.T[i] = [a - f * pb for a, pb in zip(self.T[i], prow)]

    def solve_phase1(self) -> bool:
        c1 = [ZERO] * self.nstruct + [Fraction(-1)] * self.nrows
        status = self._iterate(c1)
        if status != "optimal":
            raise AssertionError("phase-1 objective cannot be unbounded")
        if any(self.xb[i] != 0 and self.basis[i] >= self.nstruct for i in range(self.nrows)):
            return False
        # drive artificial variables out of the basis, dropping redundant rows
        for i in reversed(range(self.nrows)):
            if self.basis[i] < self.nstruct:
                continue
            pcol = next((j for j in range(self.nstruct) if self.T[i][j] != 0), None)
            if pcol is None:
                del self.T[i], self.xb[i], self.basis[i]
                self.nrows -= 1
                continue
            piv = self.T[i][pcol]
            inv = ONE / piv
            self.T[i] = [v * inv for v in self.T[i]]
            prow = self.T[i]
            for k in range(len(self.T)):
                if k != i and self.T[k][pcol] != 0:
                    f = self.T[k][pcol]
                    self.T[k] = [a - f * pb for a, pb in zip(self.T[k], prow)]
            self.basis[i] = pcol
            # label swap at step zero: the entering column keeps its value
            self.xb[i] = self.ub[pcol] if pcol in self.at_upper else ZERO
            self.at_upper.discard(pcol)
        # forget artificial columns entirely
        for i in range(self.nrows):
            self.T[i] = self.T[i][:self.nstruct]
        return True

    def values(self):
        y = []
        basic_pos = {v: i for i, v in enumerate(self.basis)}
        for j in range(self.nstruct):
            if j in basic_pos:
                y.append(self.xb[basic_pos[j]])
            elif j in self.at_upper:
                y.append(self.ub[j])
            else:
                y.append(ZERO)
        return y


def find_feasible(lp: BoxLP) -> Vec | None:
    """Phase-1 only: some feasible point of the LP, or None."""
    canon = _Canonical(lp)
    sx = _Simplex(canon.cols, canon.b, canon.ub)
    if not sx.solve_phase1():
        return None
    return canon.restore(sx.values())


def _has_free_var(lp: BoxLP) -> bool:
    return any(lo is None and hi is None for lo, hi in zip(lp.lower, lp.upper))


def lp_solve(lp: BoxLP) -> LPResult:
    """Exact optimum of a BoxLP; the optimum is returned at a vertex
    whenever the feasible region is pointed."""
    if lp.objective is None:
        raise ValueError("lp_solve requires an objective")
    canon = _Canonical(lp)
    sx = _Simplex(canon.cols, canon.b, canon.ub)
    if not sx.solve_phase1():
        return LPResult("infeasible")
    status = sx._iterate(list(canon.c))
    if status == "unbounded":
        return LPResult("unbounded")
    x = canon.restore(sx.values())
    if not _has_free_var(lp):
        x = purify_to_vertex(
            BoxLP(lp.M, lp.b, lp.lower, lp.upper, lp.objective), x)
    value = sum((rat(ci) * xi for ci, xi in zip(lp.objective, x)), ZERO)
    return LPResult("optimal", x, value)


# ---------------------------------------------------------------------------
# extreme rays by double description


def _tight_set(ray, rows, indices):
    out = set()
    for q in indices:
        if sum((rows[q][k] * ray[k] for k in range(len(ray))), ZERO) == 0:
            out.add(q)
    return frozenset(out)


def extreme_rays(ineqs: Matrix):
    """One primitive integer representative per extreme ray of
    {x : ineqs @ x >= 0}; the cone must be pointed."""
    d = ineqs.cols
    if d == 0:
        return []
    if null_space(ineqs):
        raise NonPointedCone("cone contains a line (inequality matrix is rank deficient)")
    rows = [ineqs.row(i) for i in range(ineqs.rows)]

    # initial simplicial cone from the first d independent rows
    chosen = []
    probe = []
    for i in range(len(rows)):
        probe.append(list(rows[i]))
        from .linalg import _echelon  # reuse internal elimination
        test = [list(r) for r in probe]
        if len(_echelon(test)) > len(chosen):
            chosen.append(i)
        else:
            probe.pop()
        if len(chosen) == d:
            break
    base = Matrix.from_rows([rows[i] for i in chosen])
    from .linalg import solve_linear
    rays = []
    for j in range(d):
        e = tuple(ONE if k == j else ZERO for k in range(d))
        r = solve_linear(base, e)
        rays.append(primitive_integer_vector(r))

    processed = list(chosen)
    remaining = [i for i in range(len(rows)) if i not in set(chosen)]
    tight = {r: _tight_set(r, rows, processed) for r in rays}

    for q in remaining:
        vals = {r: sum((rows[q][k] * r[k] for k in range(d)), ZERO) for r in rays}
        plus = [r for r in rays if vals[r] > 0]
        zero = [r for r in rays if vals[r] == 0]
        minus = [r for r in rays if vals[r] < 0]
        new_rays = list(plus) + list(zero)
        for rp in plus:
            for rm in minus:
                common = tight[rp] & tight[rm]
                adjacent = True
                for other in rays:
                    if other is rp or other is rm:
                        continue
                    if common <= tight[other]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(vals[rp] * rm[k] - vals[rm] * rp[k] for k in range(d))
                new_rays.append(primitive_integer_vector(combo))
        processed.append(q)
        dedup = {}
        for r in new_rays:
            dedup[tuple(r)] = r
        rays = list(dedup.values())
        tight = {r: _tight_set(r, rows, processed) for r in rays}

    for r in rays:
        for i in range(len(rows)):
            if sum((rows[i][k] * r[k] for k in range(d)), ZERO) < 0:
                raise AssertionError("double description produced an infeasible ray")
    return sorted(rays)


# ---------------------------------------------------------------------------
# integer point enumeration


def enum_integer_points(lower: Vec, upper: Vec, ell1_cap=None, predicate=None):
    """Yield every integer point in the box (and l1 ball, when capped)
    satisfying the predicate, in lexicographic order, depth first."""
    n = len(lower)
    if len(upper) != n:
        raise ValueError("bound dimension mismatch")
    lo = [math.ceil(rat(v)) for v in lower]
    hi = [math.floor(rat(v)) for v in upper]
    point = [0] * n

    def dfs(i, budget):
        if i == n:
            pt = tuple(point)
            if predicate is None or predicate(pt):
                yield pt
            return
        for v in range(lo[i], hi[i] + 1):
            cost = abs(v)
            if budget is not None and cost > budget:
                if v > 0:
                    break
                continue
            point[i] = v
            yield from dfs(i + 1, None if budget is None else budget - cost)
        point[i] = 0

    if all(l <= h for l, h in zip(lo, hi)):
        yield from dfs(0, ell1_cap)
