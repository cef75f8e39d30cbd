"""4-block integer programs: kernel decomposition, reduction, Graver
enumeration within a box, the proximity-driven solver, and proximity
reports.

The decomposition pipeline mirrors the constants it certifies: every
stage asserts its own exact bound and any violation aborts with the name
of the violated property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import (Matrix, Vec, ZERO, ONE, rat, ceil_sqrt, det, is_integer_vec,
                     l1_norm, linf_norm, lcm_abs_dets, rank, rank_of_vectors,
                     solve_linear, vadd, vscale, vsub, vzero)
from .lp import BoxLP, LPError, enum_integer_points, extreme_rays, find_feasible, lp_solve, purify_to_vertex
from .norms import LINF_NORM
from .rearrange import rearrangement_order
from .colorful import ColoredFamily, colorful_affine


class PropertyViolation(AssertionError):
    """A certified decomposition property failed; carries the property name."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"property {name} violated" + (f": {detail}" if detail else ""))


class UnboundedRelaxation(LPError):
    """The LP relaxation of the 4-block program is unbounded."""


# ---------------------------------------------------------------------------
# instance and kernel-point types


@dataclass(frozen=True)
class FourBlockInstance:
    s0: int
    s: int
    t0: int
    t: int
    n: int
    A0: Matrix
    B: tuple
    A: tuple
    C: tuple
    b: Vec
    cx: Vec
    cy: Vec
    ux: tuple
    uy: tuple
    delta: int

    def __post_init__(self):
        if min(self.s0, self.s, self.t0, self.t, self.n) < 1:
            raise ValueError("all block dimensions must be positive")
        if (self.A0.rows, self.A0.cols) != (self.s0, self.t0):
            raise ValueError("A0 shape mismatch")
        if len(self.B) != self.n or len(self.A) != self.n or len(self.C) != self.n:
            raise ValueError("block count mismatch")
        for i in range(self.n):
            if (self.B[i].rows, self.B[i].cols) != (self.s, self.t0):
                raise ValueError(f"B[{i}] shape mismatch")
            if (self.A[i].rows, self.A[i].cols) != (self.s, self.t):
                raise ValueError(f"A[{i}] shape mismatch")
            if (self.C[i].rows, self.C[i].cols) != (self.s0, self.t):
                raise ValueError(f"C[{i}] shape mismatch")
        if len(self.b) != self.s0 + self.n * self.s:
            raise ValueError("b dimension mismatch")
        if len(self.cx) != self.t0 or len(self.ux) != self.t0:
            raise ValueError("x objective/bound dimension mismatch")
        if len(self.cy) != self.n * self.t or len(self.uy) != self.n * self.t:
            raise ValueError("y objective/bound dimension mismatch")
        mats = [self.A0, *self.B, *self.A, *self.C]
        for M in mats:
            if not all(Fraction(x).denominator == 1 for x in M.data):
                raise ValueError("blocks must have integer entries")
        if not is_integer_vec(self.b):
            raise ValueError("b must be integer")
        biggest = max((int(M.max_abs_entry()) for M in mats), default=0)
        if self.delta != biggest:
            raise ValueError(f"delta={self.delta} but largest absolute entry is {biggest}")

    @staticmethod
    def make(A0, B, A, C, b, cx, cy, ux, uy) -> "FourBlockInstance":
        s0, t0 = A0.rows, A0.cols
        n = len(A)
        s, t = A[0].rows, A[0].cols
        mats = [A0, *B, *A, *C]
        delta = max((int(M.max_abs_entry()) for M in mats), default=0)
        return FourBlockInstance(s0, s, t0, t, n, A0, tuple(B), tuple(A), tuple(C),
                                 tuple(b), tuple(cx), tuple(cy), tuple(ux), tuple(uy), delta)

    @property
    def x_dim(self) -> int:
        return self.t0

    @property
    def y_dim(self) -> int:
        return self.n * self.t

    def y_block(self, y: Vec, i: int) -> Vec:
        return tuple(y[i * self.t:(i + 1) * self.t])

    def apply_C(self, y: Vec) -> Vec:
        acc = [ZERO] * self.s0
        for i in range(self.n):
            part = self.C[i].mul_vec(self.y_block(y, i))
            for r in range(self.s0):
                acc[r] += part[r]
        return tuple(acc)

    def H_matrix(self) -> Matrix:
        top = [list(self.A0.row(r)) for r in range(self.s0)]
        for i in range(self.n):
            for r in range(self.s0):
                top[r].extend(self.C[i].row(r))
        rows = top
        for i in range(self.n):
            for r in range(self.s):
                row = list(self.B[i].row(r))
                row.extend([ZERO] * (self.t * i))
                row.extend(self.A[i].row(r))
                row.extend([ZERO] * (self.t * (self.n - 1 - i)))
                rows.append(row)
        return Matrix.from_rows(rows)


@dataclass(frozen=True)
class KernelPoint:
    x: Vec
    y: Vec

    def check(self, inst: FourBlockInstance):
        if len(self.x) != inst.x_dim or len(self.y) != inst.y_dim:
            raise ValueError("kernel point dimension mismatch")
        if any(v < 0 for v in self.x) or any(v < 0 for v in self.y):
            raise ValueError("kernel point must be nonnegative")
        z = tuple(self.x) + tuple(self.y)
        if any(v != 0 for v in inst.H_matrix().mul_vec(z)):
            raise ValueError("point is not in the kernel of H")


def kernel_bound(inst: FourBlockInstance) -> int:
    """t (2 s Delta + 1)^s, the l1 threshold for extracting an integer
    kernel vector from a block."""
    return inst.t * (2 * inst.s * inst.delta + 1) ** inst.s


def omega1(inst: FourBlockInstance) -> int:
    """t0 Delta^s s^((s+1)/2), rounded up to stay rational for even s."""
    return inst.t0 * inst.delta ** inst.s * ceil_sqrt(inst.s ** (inst.s + 1))


# ---------------------------------------------------------------------------
# the A0 = 0 lift


def lift_three_block(inst: FourBlockInstance) -> FourBlockInstance:
    """Equivalent instance with A0 = 0; kernel points (x, y) of the input
    biject with kernel points (x, (x, y^1), (0, y^2), ...) of the output."""
    if inst.A0.is_zero():
        return inst
    s0, s, t0, t, n = inst.s0, inst.s, inst.t0, inst.t, inst.n
    Id = Matrix.identity(t0)
    Zst = Matrix.zeros(t0, t)
    A2, B2, C2, b2, cy2, uy2 = [], [], [], list(inst.b[:s0]), [], []
    for i in range(n):
        corner = Matrix.from_rows(
            [[-x for x in Id.row(r)] for r in range(t0)]) if i == 0 else Id
        A2.append(Matrix.from_rows(
            [list(corner.row(r)) + list(Zst.row(r)) for r in range(t0)] +
            [[ZERO] * t0 + list(inst.A[i].row(r)) for r in range(s)]))
        B2.append(Matrix.from_rows(
            [list(Id.row(r)) if i == 0 else [ZERO] * t0 for r in range(t0)] +
            [list(inst.B[i].row(r)) for r in range(s)]))
        C2.append(Matrix.from_rows(
            [(list(inst.A0.row(r)) if i == 0 else [ZERO] * t0) + list(inst.C[i].row(r))
             for r in range(s0)]))
        b2.extend([ZERO] * t0)
        b2.extend(inst.b[s0 + i * s:s0 + (i + 1) * s])
        cy2.extend([ZERO] * t0)
        cy2.extend(inst.cy[i * t:(i + 1) * t])
        uy2.extend(inst.ux if i == 0 else [Fraction(0)] * t0)
        uy2.extend(inst.uy[i * t:(i + 1) * t])
    return FourBlockInstance.make(
        Matrix.zeros(s0, t0), B2, A2, C2, tuple(b2), inst.cx, tuple(cy2),
        inst.ux, tuple(uy2))


def lift_point(inst: FourBlockInstance, x: Vec, y: Vec):
    """Map a point of the original instance into the lifted coordinates."""
    if inst.A0.is_zero():
        return tuple(x), tuple(y)
    t0, t, n = inst.t0, inst.t, inst.n
    out = []
    for i in range(n):
        out.extend(x if i == 0 else [ZERO] * t0)
        out.extend(y[i * t:(i + 1) * t])
    return tuple(x), tuple(out)


def project_lifted_point(inst: FourBlockInstance, x: Vec, y_lifted: Vec):
    """Inverse of lift_point on the y coordinates."""
    if inst.A0.is_zero():
        return tuple(x), tuple(y_lifted)
    t0, t, n = inst.t0, inst.t, inst.n
    width = t0 + t
    out = []
    for i in range(n):
        out.extend(y_lifted[i * width + t0:(i + 1) * width])
    return tuple(x), tuple(out)


# ---------------------------------------------------------------------------
# maximal kernel split and the u-decomposition


def split_max_kernel(inst: FourBlockInstance, pt: KernelPoint):
    """(u, v) with y = u + v, u a blockwise-maximal nonnegative kernel
    vector of the diagonal blocks, and ||v||_inf <= omega1 ||x||_inf."""
    if not inst.A0.is_zero():
        raise ValueError("split_max_kernel requires a lifted instance (A0 = 0)")
    pt.check(inst)
    u = []
    for i in range(inst.n):
        yi = inst.y_block(pt.y, i)
        lp = BoxLP(inst.A[i], (ZERO,) * inst.s, (ZERO,) * inst.t, yi, (ONE,) * inst.t)
        res = lp_solve(lp)
        if not res.is_optimal:
            raise AssertionError("block kernel LP must be solvable")
        u.extend(res.x)
    u = tuple(u)
    v = vsub(pt.y, u)
    if any(x < 0 for x in v):
        raise AssertionError("kernel split produced a negative remainder")
    if linf_norm(v) > omega1(inst) * linf_norm(pt.x):
        raise PropertyViolation("v-bound-omega1", "||v||_inf > omega1 ||x||_inf")
    return u, v


def minimal_kernel_below(Ai: Matrix, w: Vec, cap: int):
    """First (lex) nonzero integer point of ker Ai inside [0, floor(w)]
    with l1 norm at most cap, or None when no such point exists."""
    upper = tuple(math.floor(rat(x)) for x in w)
    for z in enum_integer_points((0,) * len(w), upper, ell1_cap=cap):
        if any(z) and all(x == 0 for x in Ai.mul_vec(z)):
            return z
    return None


def decompose_u(inst: FourBlockInstance, u_hat: Vec):
    """u = u0 + sum of alpha0 small integer kernel vectors, the integer
    pieces ordered so their C-images stay near the proportional line."""
    K = kernel_bound(inst)
    pieces = []
    residuals = []
    for i in range(inst.n):
        res = list(inst.y_block(u_hat, i))
        if any(x < 0 for x in res):
            raise ValueError("u must be nonnegative")
        if any(x != 0 for x in inst.A[i].mul_vec(tuple(res))):
            raise ValueError("u is not in the kernel of the diagonal blocks")
        while l1_norm(tuple(res)) > K:
            wbar = minimal_kernel_below(inst.A[i], tuple(res), K)
            if wbar is None:
                raise PropertyViolation("kernel-extraction",
                                        "no small kernel vector below a large residual")
            res = [a - b for a, b in zip(res, wbar)]
            padded = [0] * (inst.n * inst.t)
            padded[i * inst.t:(i + 1) * inst.t] = list(wbar)
            pieces.append(tuple(padded))
        residuals.extend(res)
    u0 = tuple(residuals)
    alpha0 = len(pieces)

    c_images = [inst.apply_C(p) for p in pieces]
    if alpha0 >= 2:
        q = tuple(sum(col, ZERO) for col in zip(*c_images))
        mean = vscale(q, Fraction(1, alpha0))
        deviations = [vsub(ci, mean) for ci in c_images]
        order = rearrangement_order(deviations, inst.s0)
        pieces = [pieces[i] for i in order]
        c_images = [c_images[i] for i in order]

    # certified bounds of the u-decomposition
    if alpha0 < Fraction(linf_norm(u_hat), K) - 1:
        raise PropertyViolation("u-layer-count", "alpha0 < ||u||_inf / K - 1")
    for p in pieces:
        if l1_norm(p) > K:
            raise PropertyViolation("u-piece-norm", "an integer piece exceeds the l1 cap")
    if l1_norm(u0) > inst.n * K or linf_norm(u0) > K:
        raise PropertyViolation("u-remainder-norm", "remainder norm bound failed")
    if alpha0 >= 1:
        q = tuple(sum(col, ZERO) for col in zip(*c_images))
        cap_iv = Fraction(inst.s0 * 2 * inst.delta * K)
        prefix = [ZERO] * inst.s0
        for k, ci in enumerate(c_images, start=1):
            for r in range(inst.s0):
                prefix[r] += ci[r]
            dev = tuple(prefix[r] - Fraction(k, alpha0) * q[r] for r in range(inst.s0))
            if linf_norm(dev) > cap_iv:
                raise PropertyViolation("u-prefix-tube", "ordered C-prefix left the certified tube")
    return u0, tuple(pieces)


# ---------------------------------------------------------------------------
# the x-decomposition over cone rays


@dataclass(frozen=True)
class FeasibleBasis:
    cols: tuple
    mat: Matrix


def feasible_bases(Ai: Matrix, Bi: Matrix, x_hat: Vec):
    """All invertible s x s column submatrices D of Ai with
    -D^{-1} Bi x_hat >= 0, in lexicographic column order."""
    s = Ai.rows
    rhs = Bi.mul_vec(x_hat)
    out = []
    from itertools import combinations
    for cols in combinations(range(Ai.cols), s):
        D = Ai.column_submatrix(cols)
        if det(D) == 0:
            continue
        w = solve_linear(D, rhs)
        if all(-x >= 0 for x in w):
            out.append(FeasibleBasis(cols, D))
    return out


def basis_vertex(fb: FeasibleBasis, Bi: Matrix, x: Vec, t: int) -> Vec:
    """The point supported on fb.cols with Ai y = -Bi x."""
    w = solve_linear(fb.mat, Bi.mul_vec(x))
    y = [ZERO] * t
    for r, c in enumerate(fb.cols):
        y[c] = -w[r]
    return tuple(y)


def cone_rays_K(inst: FourBlockInstance, x_hat: Vec, bases_x=None):
    """Extreme rays of {x >= 0 : -D^{-1} B^i x >= 0 for all feasible
    bases D}, scaled into gamma Z^{t0}; returns (rays, omega2, gamma)."""
    if bases_x is None:
        bases_x = [feasible_bases(inst.A[i], inst.B[i], x_hat) for i in range(inst.n)]
    rows = [list(Matrix.identity(inst.t0).row(r)) for r in range(inst.t0)]
    for i in range(inst.n):
        for fb in bases_x[i]:
            # -D^{-1} B^i as s rows
            cols = [solve_linear(fb.mat, inst.B[i].col(c)) for c in range(inst.t0)]
            for r in range(inst.s):
                rows.append([-cols[c][r] for c in range(inst.t0)])
    ineqs = Matrix.from_rows(rows)
    for r in range(ineqs.rows):
        if sum((ineqs.at(r, c) * x_hat[c] for c in range(inst.t0)), ZERO) < 0:
            raise PropertyViolation("x-in-cone", "x violates a cone inequality")
    gamma = lcm_abs_dets(inst.A, inst.s, entry_bound=inst.delta)
    rays = [tuple(gamma * x for x in r) for r in extreme_rays(ineqs)]
    omega2 = max((linf_norm(r) for r in rays), default=ZERO)
    return tuple(rays), omega2, gamma


def decompose_x(x_hat: Vec, rays):
    """x as a conic combination of at most t0 rays: (lambdas, chosen rays)."""
    t0 = len(x_hat)
    if all(v == 0 for v in x_hat):
        return (), ()
    if not rays:
        raise PropertyViolation("cone-membership", "nonzero x but the cone has no rays")
    M = Matrix.from_rows([[r[c] for r in rays] for c in range(t0)])
    lp = BoxLP(M, tuple(x_hat), (ZERO,) * len(rays), (None,) * len(rays))
    start = find_feasible(lp)
    if start is None:
        raise PropertyViolation("cone-membership", "x is not in the conic hull of the rays")
    vertex = purify_to_vertex(lp, start)
    pairs = [(lam, rays[i]) for i, lam in enumerate(vertex) if lam != 0]
    if len(pairs) > t0:
        raise PropertyViolation("conic-support", "conic support exceeds t0")
    recon = [ZERO] * t0
    for lam, h in pairs:
        for c in range(t0):
            recon[c] += lam * h[c]
    if tuple(recon) != tuple(x_hat):
        raise PropertyViolation("conic-reconstruction", "conic combination mismatch")
    return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


# ---------------------------------------------------------------------------
# the v-decomposition


def _convex_combo_over_vertices(vertices, target: Vec, support_cap: int, prop: str):
    """Convex coefficients over the given points reproducing target with
    bounded support, found by feasibility plus purification."""
    k = len(vertices)
    tdim = len(target)
    if k == 0:
        raise PropertyViolation(prop, "no candidate vertices")
    rows = [[v[r] for v in vertices] for r in range(tdim)]
    rows.append([ONE] * k)
    lp = BoxLP(Matrix.from_rows(rows), tuple(target) + (ONE,),
               (ZERO,) * k, (None,) * k)
    start = find_feasible(lp)
    if start is None:
        raise PropertyViolation(prop, "convex decomposition infeasible")
    vertex = purify_to_vertex(lp, start)
    combo = {i: c for i, c in enumerate(vertex) if c != 0}
    if len(combo) > support_cap:
        raise PropertyViolation(prop, f"support {len(combo)} exceeds {support_cap}")
    return combo


def decompose_v(inst: FourBlockInstance, lambdas, hs, v_hat: Vec, omega2, bases_x):
    """Split v into per-ray parts and extract integer pieces per part.

    Returns (v0_per_ell, vseq_per_ell, alphas, av0_integral) where
    vseq_per_ell[ell][j] are stacked integer vectors ordered so that the
    C-image prefixes stay inside the certified tube."""
    s, t, t0, n = inst.s, inst.t, inst.t0, inst.n
    ell_count = len(lambdas)
    Xv = Fraction(inst.delta ** (s + 1) * s ** s * t0) * omega2
    CXv = inst.delta * Xv

    if ell_count == 0:
        if any(x != 0 for x in v_hat):
            raise PropertyViolation("maximality-zero-v", "x = 0 but v != 0")
        return (), (), (), ()

    x_hat = tuple(
        sum((lam * h[c] for lam, h in zip(lambdas, hs)), ZERO) for c in range(t0))

    # per block: convex multipliers over the vertices of {y >= 0 : A y = -B x}
    v_parts = [[None] * ell_count for _ in range(n)]  # v_parts[i][ell] : t-dim
    for i in range(n):
        vi = inst.y_block(v_hat, i)
        verts = [basis_vertex(fb, inst.B[i], x_hat, t) for fb in bases_x[i]]
        mu = _convex_combo_over_vertices(verts, vi, t + 1, "v-convex-decomposition")
        for ell, (lam, h) in enumerate(zip(lambdas, hs)):
            acc = [ZERO] * t
            for k, coef in mu.items():
                yk = basis_vertex(bases_x[i][k], inst.B[i], h, t)
                for r in range(t):
                    acc[r] += coef * yk[r]
            part = tuple(lam * v for v in acc)
            if any(v < 0 for v in part):
                raise PropertyViolation("v-part-nonneg", "a v part left the orthant")
            v_parts[i][ell] = part
        recon = tuple(sum(v_parts[i][ell][r] for ell in range(ell_count)) for r in range(t))
        if recon != vi:
            raise PropertyViolation("v-part-reconstruction", "v parts do not sum back")

    span = t - s + 1
    alphas = []
    for lam in lambdas:
        alphas.append(math.floor(lam - (t - s)) if lam >= span else 0)

    v0_per_ell = []
    vseq_per_ell = []
    av0_flags = []
    for ell, (lam, h) in enumerate(zip(lambdas, hs)):
        a_ell = alphas[ell]
        seq_blocks = [[] for _ in range(n)]
        rem_blocks = []
        for i in range(n):
            fbs = feasible_bases(inst.A[i], inst.B[i], h)
            verts = [basis_vertex(fb, inst.B[i], h, t) for fb in fbs]
            for v in verts:
                if not is_integer_vec(v):
                    raise PropertyViolation("vertex-integrality",
                                            "gamma scaling failed to make a vertex integer")
                if l1_norm(v) > Xv:
                    raise PropertyViolation("v-piece-norm", "vertex l1 norm exceeds the cap")
            w = list(v_parts[i][ell])
            if a_ell > 0:
                target = tuple(x / lam for x in w)
                tau = _convex_combo_over_vertices(verts, target, span, "vertex-support")
                beta = lam
                for j in range(a_ell):
                    dbar = max(tau, key=lambda idx: (tau[idx], -idx))
                    if tau[dbar] < Fraction(1, span) or tau[dbar] * beta < 1:
                        raise PropertyViolation("vertex-weight",
                                                "no vertex carries enough weight")
                    piece = verts[dbar]
                    w = [a - b for a, b in zip(w, piece)]
                    if any(x < 0 for x in w):
                        raise PropertyViolation("extraction-nonneg", "extraction overshot")
                    seq_blocks[i].append(tuple(int(x) for x in piece))
                    if j < a_ell - 1:
                        tau = {idx: (c * beta - (ONE if idx == dbar else ZERO)) / (beta - 1)
                               for idx, c in tau.items()}
                        tau = {idx: c for idx, c in tau.items() if c != 0}
                        beta -= 1
            if l1_norm(tuple(w)) > span * Xv:
                raise PropertyViolation("v-remainder-norm", "v remainder exceeds its l1 cap")
            rem_blocks.append(tuple(w))
        # stack per-block remainders / pieces into R^{nt}
        v0 = tuple(x for blk in rem_blocks for x in blk)
        v0_per_ell.append(v0)
        av0_flags.append(all(
            is_integer_vec(inst.A[i].mul_vec(rem_blocks[i])) for i in range(n)))

        if a_ell > 0:
            # order the pieces jointly across blocks
            scaled = tuple(
                tuple(tuple(x / CXv for x in inst.C[i].mul_vec(v)) for v in seq_blocks[i])
                for i in range(n))
            fam = ColoredFamily(inst.s0, n, a_ell, scaled, LINF_NORM)
            cert = colorful_affine(fam)
            stacked = []
            for j in range(a_ell):
                parts = []
                for i in range(n):
                    parts.extend(seq_blocks[i][cert.permutations[i][j]])
                stacked.append(tuple(parts))
            vseq_per_ell.append(tuple(stacked))
        else:
            vseq_per_ell.append(())

    # exact prefix check of the ordered C-images
    cap_ix = Fraction(40 * inst.s0 ** 5) * CXv
    for ell, seq in enumerate(vseq_per_ell):
        a_ell = alphas[ell]
        if a_ell < 1:
            continue
        p_ell = [ZERO] * inst.s0
        images = [inst.apply_C(vv) for vv in seq]
        for im in images:
            for r in range(inst.s0):
                p_ell[r] += im[r]
        prefix = [ZERO] * inst.s0
        for k, im in enumerate(images, start=1):
            for r in range(inst.s0):
                prefix[r] += im[r]
            dev = tuple(prefix[r] - Fraction(k, a_ell) * p_ell[r] for r in range(inst.s0))
            if linf_norm(dev) > cap_ix:
                raise PropertyViolation("v-prefix-tube", "ordered C-prefix left the certified tube")

    # kernel pairing and the layer-count bound
    for ell, (lam, h) in enumerate(zip(lambdas, hs)):
        for j, vv in enumerate(vseq_per_ell[ell]):
            for i in range(n):
                lhs = inst.A[i].mul_vec(inst.y_block(vv, i))
                rhs = inst.B[i].mul_vec(h)
                if any(a + b != 0 for a, b in zip(lhs, rhs)):
                    raise PropertyViolation("v-piece-kernel", "(h, v) is not in ker [B A]")
            if any(x < 0 for x in vv) or not is_integer_vec(vv):
                raise PropertyViolation("v-piece-kernel", "piece not a nonnegative integer vector")
    if omega2 > 0:
        if sum(alphas) < Fraction(linf_norm(x_hat)) / omega2 - t0 * (t - s + 2):
            raise PropertyViolation("v-layer-count", "too few extracted layers")
    return tuple(v0_per_ell), tuple(vseq_per_ell), tuple(alphas), tuple(av0_flags)


# ---------------------------------------------------------------------------
# bundle assembly and the constants table


@dataclass(frozen=True)
class DecompositionBundle:
    x_hat: Vec
    y_hat: Vec
    u_hat: Vec
    v_hat: Vec
    u0: Vec
    u_seq: tuple            # alpha0 integer vectors in Z^{nt}, ordered
    lambdas: tuple
    rays: tuple             # h^ell, integer vectors in gamma Z^{t0}
    alphas: tuple
    v0: tuple               # per ell
    v_seq: tuple            # per ell: ordered integer vectors in Z^{nt}
    p: tuple                # per ell: C-image totals of v_seq[ell]
    q: Vec
    r: Vec
    gamma: int
    omega2: Fraction
    av0_integral: tuple     # diagnostic: is A v_{ell,0} integral?

    @property
    def alpha0(self) -> int:
        return len(self.u_seq)


@dataclass(frozen=True)
class ConstantsTable:
    gamma: int
    omega1: Fraction
    omega2: Fraction
    omega3: Fraction
    omega4: Fraction
    omega5: Fraction
    xi: Fraction
    psi: int
    dim_v: int
    kernel_bound: Fraction


def _require_pipeline_ready(inst: FourBlockInstance):
    if not inst.A0.is_zero():
        raise ValueError("pipeline requires a lifted instance (A0 = 0); call lift_three_block")
    if inst.t < inst.s:
        raise ValueError("pipeline requires t >= s in the diagonal blocks")
    for i in range(inst.n):
        if rank(inst.A[i]) != inst.s:
            raise ValueError(f"diagonal block {i} is not of full row rank")


def decompose_bundle(inst: FourBlockInstance, pt: KernelPoint):
    """Run the full decomposition pipeline; returns (bundle, constants).

    Every certified property is asserted exactly along the way; a failure
    raises PropertyViolation naming the property.
    """
    _require_pipeline_ready(inst)
    pt.check(inst)
    u_hat, v_hat = split_max_kernel(inst, pt)
    u0, u_seq = decompose_u(inst, u_hat)
    bases_x = [feasible_bases(inst.A[i], inst.B[i], pt.x) for i in range(inst.n)]
    rays_all, omega2, gamma = cone_rays_K(inst, pt.x, bases_x)
    lambdas, hs = decompose_x(pt.x, rays_all)
    v0s, vseqs, alphas, av0 = decompose_v(inst, lambdas, hs, v_hat, omega2, bases_x)

    # exact reassembly checks
    if vadd(u_hat, v_hat) != tuple(pt.y):
        raise PropertyViolation("split-reassembly", "u + v != y")
    acc = list(u0)
    for piece in u_seq:
        acc = [a + b for a, b in zip(acc, piece)]
    if tuple(acc) != tuple(u_hat):
        raise PropertyViolation("u-reassembly", "u0 + sum u_j != u")
    acc = [ZERO] * inst.y_dim
    for ell in range(len(lambdas)):
        for r, x in enumerate(v0s[ell]):
            acc[r] += x
        for piece in vseqs[ell]:
            for r, x in enumerate(piece):
                acc[r] += x
    if tuple(acc) != tuple(v_hat):
        raise PropertyViolation("v-reassembly", "sum of v pieces != v")

    p_vecs = []
    for ell in range(len(lambdas)):
        total = [ZERO] * inst.s0
        for piece in vseqs[ell]:
            im = inst.apply_C(piece)
            for r in range(inst.s0):
                total[r] += im[r]
        p_vecs.append(tuple(total))
    q = tuple(sum(col, ZERO) for col in zip(*[inst.apply_C(p) for p in u_seq])) \
        if u_seq else (ZERO,) * inst.s0
    r_vec = list(inst.apply_C(u0))
    for ell in range(len(lambdas)):
        im = inst.apply_C(v0s[ell])
        for rr in range(inst.s0):
            r_vec[rr] += im[rr]
    r_vec = tuple(r_vec)
    total = [ZERO] * inst.s0
    for vec_ in (*p_vecs, q, r_vec):
        for rr in range(inst.s0):
            total[rr] += vec_[rr]
    if any(x != 0 for x in total):
        raise PropertyViolation("zero-sum-Cy", "sum p + q + r != 0")

    bundle = DecompositionBundle(
        tuple(pt.x), tuple(pt.y), u_hat, v_hat, u0, u_seq, lambdas, hs, alphas,
        v0s, vseqs, tuple(p_vecs), q, r_vec, gamma, omega2, av0)
    return bundle, compute_constants(inst, bundle)


def compute_constants(inst: FourBlockInstance, bundle: DecompositionBundle) -> ConstantsTable:
    """Every derived constant of the pipeline, each recomputable from its
    defining formula."""
    s, t, s0, t0 = inst.s, inst.t, inst.s0, inst.t0
    K = Fraction(kernel_bound(inst))
    w1 = Fraction(omega1(inst))
    w2 = bundle.omega2
    terms = []
    for ell, a in enumerate(bundle.alphas):
        if a > 0:
            terms.append(linf_norm(bundle.p[ell]) / a)
    if bundle.alpha0 > 0:
        terms.append(linf_norm(bundle.q) / bundle.alpha0)
    terms.append(linf_norm(bundle.r))
    w3 = max(terms)
    w4 = Fraction(s0 * 2 * inst.delta) * K + \
        Fraction(t0 * 40 * s0 ** 5 * inst.delta ** (s + 2) * s ** s * t0) * w2
    span_vecs = [bundle.r, bundle.q, *bundle.p]
    dim_v = rank_of_vectors([v for v in span_vecs if any(x != 0 for x in v)])
    root = Fraction(ceil_sqrt(s0))
    w5 = Fraction(36) * (root * (w3 * (dim_v + 1) + w4 + Fraction(1, 2))) ** dim_v \
        * (root * (w4 + Fraction(1, 2))) ** (s0 - dim_v)
    psi = 1 + bundle.alpha0 + sum(bundle.alphas)
    xi = (w5 + t0 * (t - s + 2) + 1) * max(w2, ONE) * max(w1, ONE) * K
    return ConstantsTable(bundle.gamma, w1, w2, w3, w4, w5, xi, psi, dim_v, K)


# ---------------------------------------------------------------------------
# the reduction (pigeonhole over offset vectors)


@dataclass(frozen=True)
class ReduceOutcome:
    vector: tuple | None       # (x, y) or None
    bundle: DecompositionBundle
    constants: ConstantsTable
    diagnostics: dict


def reduce_kernel_point(inst: FourBlockInstance, pt: KernelPoint) -> ReduceOutcome:
    """Extract a nonzero integer kernel vector dominated by pt.

    Succeeds whenever ||pt||_inf > xi; may also succeed below that.
    Returns an outcome with vector=None plus diagnostics when no offset
    collision exists.
    """
    bundle, consts = decompose_bundle(inst, pt)
    s0 = inst.s0
    tags = []
    values = []
    for ell, a in enumerate(bundle.alphas):
        if a >= 1:
            val = vscale(bundle.p[ell], Fraction(1, a))
            for _ in range(a):
                tags.append(("p", ell))
                values.append(val)
    if bundle.alpha0 >= 1:
        val = vscale(bundle.q, Fraction(1, bundle.alpha0))
        for _ in range(bundle.alpha0):
            tags.append(("q",))
            values.append(val)
    tags.append(("r",))
    values.append(bundle.r)
    psi = len(values)
    if psi != consts.psi:
        raise AssertionError("psi bookkeeping mismatch")

    # order within the span, then force r to the last position
    distinct = {}
    for v in values:
        distinct.setdefault(v, None)
    basis = []
    for v in distinct:
        if any(x != 0 for x in v) and rank_of_vectors(basis + [v]) > len(basis):
            basis.append(v)
    rdim = len(basis)
    if rdim == 0:
        order = list(range(psi))
    else:
        bmat = Matrix.from_rows(basis).transpose()
        coord_of = {}
        for v in distinct:
            phi = solve_linear(bmat, v)
            if phi is None:
                raise AssertionError("psi-sequence element outside its span")
            coord_of[v] = phi
        coords = [coord_of[v] for v in values]
        order = list(rearrangement_order(coords, rdim))
    r_pos = order.index(psi - 1)
    order = order[:r_pos] + order[r_pos + 1:] + [psi - 1]

    cap_prefix = consts.omega3 * (consts.dim_v + 1)
    prefix = [ZERO] * s0
    for idx in order:
        for r in range(s0):
            prefix[r] += values[idx][r]
        if linf_norm(tuple(prefix)) > cap_prefix:
            raise PropertyViolation("prefix-omega3",
                                    "rearranged prefix left omega3 (dimV + 1) box")

    # offsets O_k with exact integer keys, k = 0 .. psi-1
    cum_v = []
    for ell in range(len(bundle.lambdas)):
        cums = [vzero(inst.y_dim)]
        for piece in bundle.v_seq[ell]:
            cums.append(vadd(cums[-1], piece))
        cum_v.append(cums)
    cum_u = [vzero(inst.y_dim)]
    for piece in bundle.u_seq:
        cum_u.append(vadd(cum_u[-1], piece))

    phi_counts = [0] * len(bundle.lambdas)
    mu_count = 0
    offset = [ZERO] * s0
    frac = [ZERO] * s0
    seen = {tuple(offset): 0}
    snapshots = [(tuple(phi_counts), 0)]
    collision = None
    for k in range(1, psi):
        tag = tags[order[k - 1]]
        if tag[0] == "p":
            ell = tag[1]
            phi_counts[ell] += 1
            piece = bundle.v_seq[ell][phi_counts[ell] - 1]
            im = inst.apply_C(piece)
        elif tag[0] == "q":
            mu_count += 1
            im = inst.apply_C(bundle.u_seq[mu_count - 1])
        else:
            raise AssertionError("r appeared before the last position")
        for r in range(s0):
            offset[r] += im[r]
            frac[r] += values[order[k - 1]][r]
        dev = tuple(o - f for o, f in zip(offset, frac))
        if linf_norm(dev) > consts.omega4:
            raise PropertyViolation("omega4-deviation",
                                    "offset drifted from the fractional prefix")
        snapshots.append((tuple(phi_counts), mu_count))
        key = tuple(offset)
        if key in seen:
            collision = (seen[key], k)
            break
        seen[key] = k

    diagnostics = {
        "psi": psi,
        "dim_v": consts.dim_v,
        "distinct_offsets": len(seen),
        "collision": collision,
        "av0_integral": bundle.av0_integral,
    }
    if collision is None:
        return ReduceOutcome(None, bundle, consts, diagnostics)

    k_lo, k_hi = collision
    phi_lo, mu_lo = snapshots[k_lo]
    phi_hi, mu_hi = snapshots[k_hi]
    x = [0] * inst.t0
    for ell, h in enumerate(bundle.rays):
        times = phi_hi[ell] - phi_lo[ell]
        for c in range(inst.t0):
            x[c] += times * h[c]
    y = [ZERO] * inst.y_dim
    for ell in range(len(bundle.lambdas)):
        hi = cum_v[ell][phi_hi[ell]]
        lo = cum_v[ell][phi_lo[ell]]
        for r in range(inst.y_dim):
            y[r] += hi[r] - lo[r]
    for r in range(inst.y_dim):
        y[r] += cum_u[mu_hi][r] - cum_u[mu_lo][r]

    xv, yv = tuple(x), tuple(y)
    if all(v == 0 for v in xv) and all(v == 0 for v in yv):
        raise PropertyViolation("reduce-nonzero", "assembled vector is zero")
    if not (is_integer_vec(xv) and is_integer_vec(yv)):
        raise PropertyViolation("reduce-integral", "assembled vector is not integer")
    if any(v < 0 for v in xv) or any(v < 0 for v in yv):
        raise PropertyViolation("reduce-nonneg", "assembled vector left the orthant")
    if any(v != 0 for v in inst.H_matrix().mul_vec(xv + yv)):
        raise PropertyViolation("reduce-kernel", "assembled vector is not in ker H")
    if any(a > b for a, b in zip(xv, pt.x)) or any(a > b for a, b in zip(yv, pt.y)):
        raise PropertyViolation("reduce-dominated", "assembled vector is not below pt")
    return ReduceOutcome((xv, yv), bundle, consts, diagnostics)


# ---------------------------------------------------------------------------
# sign normalization wrapper


def flip_for_kernel_work(inst: FourBlockInstance, flips):
    """Instance with the flipped columns negated; bounds and objective are
    cleared since only kernel structure is used downstream."""
    t0, t, n = inst.t0, inst.t, inst.n

    def flip_cols(M, offs):
        rows = []
        for r in range(M.rows):
            rows.append([-x if flips[offs + c] else x for c, x in enumerate(M.row(r))])
        return Matrix.from_rows(rows)

    A0 = flip_cols(inst.A0, 0)
    B = [flip_cols(inst.B[i], 0) for i in range(n)]
    A = [flip_cols(inst.A[i], t0 + i * t) for i in range(n)]
    C = [flip_cols(inst.C[i], t0 + i * t) for i in range(n)]
    return FourBlockInstance.make(
        A0, B, A, C, (0,) * (inst.s0 + n * inst.s), (0,) * t0, (0,) * (n * t),
        (None,) * t0, (None,) * (n * t))


def reduce_kernel_point_signed(inst: FourBlockInstance, x: Vec, y: Vec):
    """Caller-facing reduction: lifts A0 away, flips columns so the target
    is nonnegative, reduces, and flips/projects the answer back."""
    lifted = lift_three_block(inst)
    lx, ly = lift_point(inst, x, y)
    z = tuple(lx) + tuple(ly)
    flips = tuple(v < 0 for v in z)
    work = flip_for_kernel_work(lifted, flips) if any(flips) else lifted
    absz = tuple(abs(v) for v in z)
    pt = KernelPoint(absz[:lifted.t0], absz[lifted.t0:])
    outcome = reduce_kernel_point(work, pt)
    if outcome.vector is None:
        return None, outcome
    rx, ry = outcome.vector
    rz = list(rx) + list(ry)
    rz = [-v if f else v for v, f in zip(rz, flips)]
    px, py = project_lifted_point(inst, tuple(rz[:lifted.t0]), tuple(rz[lifted.t0:]))
    return (px, py), outcome


# ---------------------------------------------------------------------------
# Graver enumeration within a box


def conformal_leq(a, b) -> bool:
    """a is sign-compatible with b and componentwise no larger in magnitude."""
    return all(x * y >= 0 and abs(x) <= abs(y) for x, y in zip(a, b))


def graver_enumerate(inst: FourBlockInstance, box: int):
    """All conformally-minimal nonzero integer kernel vectors of H inside
    [-box, box]^{t0+nt}; the true Graver basis restricted to the box."""
    if box < 1:
        raise ValueError("box must be at least 1")
    H = inst.H_matrix()
    dim = inst.x_dim + inst.y_dim
    zero = (ZERO,) * H.rows
    kernel = [z for z in enum_integer_points((-box,) * dim, (box,) * dim,
                                             predicate=lambda z: any(z))
              if H.mul_vec(z) == zero]
    out = []
    for g in kernel:
        if not any(h != g and conformal_leq(h, g) for h in kernel):
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# the proximity-driven solver and proximity report


def _relaxation(inst: FourBlockInstance) -> BoxLP:
    dim = inst.x_dim + inst.y_dim
    return BoxLP(inst.H_matrix(), tuple(inst.b), (ZERO,) * dim,
                 tuple(inst.ux) + tuple(inst.uy), tuple(inst.cx) + tuple(inst.cy))


def _implied_upper(lp: BoxLP, j: int):
    probe = BoxLP(lp.M, lp.b, lp.lower, lp.upper,
                  tuple(ONE if k == j else ZERO for k in range(lp.M.cols)))
    res = lp_solve(probe)
    if res.status == "unbounded":
        raise ValueError("cannot brute force: coordinate unbounded and no cap given")
    if res.status == "infeasible":
        return ZERO
    return res.value


def solve_four_block(inst: FourBlockInstance, radius: int):
    """Solve exactly: LP relaxation, enumerate integer x within the proximity
    radius, solve the residual program per candidate, return the best.

    Returns (x, y, value) or None; raises UnboundedRelaxation when the LP
    relaxation is unbounded.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    res = lp_solve(_relaxation(inst))
    if res.status == "infeasible":
        return None
    if res.status == "unbounded":
        raise UnboundedRelaxation("LP relaxation of the 4-block program is unbounded")
    x_hat = res.x[:inst.t0]

    ranges = []
    for c in range(inst.t0):
        lo = max(0, math.ceil(x_hat[c] - radius))
        hi = math.floor(x_hat[c] + radius)
        if inst.ux[c] is not None:
            hi = min(hi, math.floor(rat(inst.ux[c])))
        ranges.append(range(lo, hi + 1))

    best = None
    from itertools import product
    for xbar in product(*ranges):
        rhs0 = vsub(tuple(inst.b[:inst.s0]), inst.A0.mul_vec(xbar))
        rows = []
        b_res = list(rhs0)
        Hy = []
        for r in range(inst.s0):
            row = []
            for i in range(inst.n):
                row.extend(inst.C[i].row(r))
            Hy.append(row)
        for i in range(inst.n):
            rhs_i = vsub(tuple(inst.b[inst.s0 + i * inst.s: inst.s0 + (i + 1) * inst.s]),
                         inst.B[i].mul_vec(xbar))
            for r in range(inst.s):
                row = [ZERO] * (inst.t * i) + list(inst.A[i].row(r)) \
                    + [ZERO] * (inst.t * (inst.n - 1 - i))
                Hy.append(row)
            b_res.extend(rhs_i)
        My = Matrix.from_rows(Hy)
        lp_y = BoxLP(My, tuple(b_res), (ZERO,) * inst.y_dim, tuple(inst.uy),
                     tuple(inst.cy))
        upper = []
        for j, u in enumerate(inst.uy):
            if u is not None:
                upper.append(math.floor(rat(u)))
            else:
                upper.append(math.floor(_implied_upper(lp_y, j)))
        target = tuple(b_res)
        for y in enum_integer_points((0,) * inst.y_dim, tuple(upper)):
            if My.mul_vec(y) != target:
                continue
            value = sum((ci * xi for ci, xi in zip(inst.cx, xbar)), ZERO) + \
                sum((ci * yi for ci, yi in zip(inst.cy, y)), ZERO)
            if best is None or value > best[2]:
                best = (tuple(xbar), y, value)
    return best


@dataclass(frozen=True)
class ProximityReport:
    lp_status: str
    ip_feasible: bool
    lp_vertex: Vec | None = None
    nearest_optimal_ip: Vec | None = None
    distance_inf: Fraction | None = None
    xi: Fraction | None = None


def xi_for_difference(inst: FourBlockInstance, z_from: Vec, z_to: Vec):
    """Domination-threshold constants for the (sign-normalized, lifted) difference of
    two solutions with equal right-hand side."""
    diff = vsub(z_from, z_to)
    lifted = lift_three_block(inst)
    lx, ly = lift_point(inst, diff[:inst.t0], diff[inst.t0:])
    z = tuple(lx) + tuple(ly)
    flips = tuple(v < 0 for v in z)
    work = flip_for_kernel_work(lifted, flips) if any(flips) else lifted
    absz = tuple(abs(v) for v in z)
    pt = KernelPoint(absz[:lifted.t0], absz[lifted.t0:])
    _, consts = decompose_bundle(work, pt)
    return consts.xi


def proximity_report(inst: FourBlockInstance, box_cap: int | None = None) -> ProximityReport:
    """LP vertex, nearest optimal integer solution, their distance, and the
    xi bound certified for the difference; asserts distance <= xi."""
    from .oracles import brute_ilp
    res = lp_solve(_relaxation(inst))
    if res.status != "optimal":
        return ProximityReport(res.status, ip_feasible=False)
    opt = brute_ilp(inst, box_cap=box_cap)
    if opt is None:
        return ProximityReport("optimal", ip_feasible=False, lp_vertex=res.x)

    from .lp import enum_integer_points as _enum
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
    c = tuple(inst.cx) + tuple(inst.cy)
    b = tuple(inst.b)
    best_val = opt[1]
    nearest = None
    best_dist = None
    for z in _enum((ZERO,) * len(upper), tuple(upper)):
        if H.mul_vec(z) != b:
            continue
        if sum((ci * zi for ci, zi in zip(c, z)), ZERO) != best_val:
            continue
        dist = linf_norm(vsub(res.x, z))
        if best_dist is None or dist < best_dist:
            best_dist, nearest = dist, z
    xi = xi_for_difference(inst, res.x, nearest)
    if best_dist > xi:
        raise PropertyViolation(
            "proximity-xi", f"distance {best_dist} exceeds xi {xi} on {inst!r}")
    return ProximityReport("optimal", True, res.x, nearest, best_dist, xi)
