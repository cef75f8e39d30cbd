"""Zero-sum sequence rearrangement with certified prefix-sum bounds.

The core construction maintains a shrinking chain of index sets.  At each
step the current feasible point is rescaled into the polytope whose
coordinate sum is one lower, purified to a vertex, and an element sitting
at value zero is dropped.  A counting argument over the vertex guarantees
such an element exists, so the descent never needs to backtrack; any
violation of that guarantee would be a genuine bug and raises.

Dimension one has a cheap special case: always append an element whose
sign opposes the running prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Vec, ZERO, ONE, rank_of_vectors, solve_linear
from .lp import BoxLP, purify_to_vertex
from .norms import NormSpec, norm_eval


class ZeroSumRequired(ValueError):
    """The operation needs an exactly zero-sum input sequence."""


@dataclass(frozen=True)
class VectorSequence:
    vectors: tuple
    dim: int
    norm: NormSpec

    def __post_init__(self):
        for v in self.vectors:
            if len(v) != self.dim:
                raise ValueError("vector dimension does not match sequence dimension")

    def __len__(self):
        return len(self.vectors)

    def total(self) -> Vec:
        out = [ZERO] * self.dim
        for v in self.vectors:
            for i, x in enumerate(v):
                out[i] += x
        return tuple(out)

    def radius(self) -> Fraction:
        return max((norm_eval(self.norm, v) for v in self.vectors), default=ZERO)


@dataclass(frozen=True)
class RearrangementCertificate:
    permutation: tuple        # position -> original index, 0-based
    certified_bound: Fraction
    achieved_max: Fraction
    radius: Fraction


def _require_zero_sum(seq: VectorSequence):
    if not all(x == 0 for x in seq.total()):
        raise ZeroSumRequired("sequence does not sum to zero exactly")


def _order_dim1(values) -> tuple:
    """Greedy order for scalars: always oppose the sign of the prefix."""
    pos = [i for i, v in enumerate(values) if v > 0]
    neg = [i for i, v in enumerate(values) if v < 0]
    zer = [i for i, v in enumerate(values) if v == 0]
    ip = ineg = iz = 0
    prefix = ZERO
    order = []
    for _ in range(len(values)):
        if prefix > 0:
            idx = neg[ineg]; ineg += 1
        elif prefix < 0:
            idx = pos[ip]; ip += 1
        else:
            heads = []
            if ip < len(pos):
                heads.append(pos[ip])
            if ineg < len(neg):
                heads.append(neg[ineg])
            if iz < len(zer):
                heads.append(zer[iz])
            idx = min(heads)
            if idx == (pos[ip] if ip < len(pos) else -1):
                ip += 1
            elif idx == (neg[ineg] if ineg < len(neg) else -1):
                ineg += 1
            else:
                iz += 1
        order.append(idx)
        prefix += values[idx]
    return tuple(order)


def _order_chain(vectors, dim) -> tuple:
    """The shrinking-chain construction for zero-sum vectors in R^dim."""
    m = len(vectors)
    order = [-1] * m
    active = list(range(m))
    value = [Fraction(m - dim, m)] * m
    for k in range(m, dim, -1):
        rho = Fraction(k - 1 - dim, k - dim)
        point = tuple(rho * v for v in value)
        rows = [[vectors[j][r] for j in active] for r in range(dim)]
        rows.append([ONE] * k)
        lp = BoxLP(
            Matrix.from_rows(rows),
            tuple([ZERO] * dim + [Fraction(k - 1 - dim)]),
            (ZERO,) * k,
            (ONE,) * k,
        )
        vertex = purify_to_vertex(lp, point)
        drop = next((p for p, v in enumerate(vertex) if v == 0), None)
        if drop is None:
            raise AssertionError("vertex without a zero coordinate; descent invariant broken")
        order[k - 1] = active[drop]
        active = active[:drop] + active[drop + 1:]
        value = list(vertex[:drop] + vertex[drop + 1:])
    for pos, idx in enumerate(active):
        order[pos] = idx
    return tuple(order)


def rearrangement_order(vectors, dim) -> tuple:
    """Order (position -> index) with all prefix norms at most dim * radius."""
    m = len(vectors)
    if m <= dim:
        return tuple(range(m))
    if dim == 1:
        return _order_dim1([v[0] for v in vectors])
    return _order_chain(vectors, dim)


def max_prefix_norm(seq: VectorSequence, perm, drift: Vec | None = None) -> Fraction:
    """Exact max over k of || sum of the first k permuted vectors - k*drift ||."""
    m = len(seq)
    if sorted(perm) != list(range(m)):
        raise ValueError("perm is not a bijection on the sequence indices")
    prefix = [ZERO] * seq.dim
    best = ZERO
    for k, idx in enumerate(perm, start=1):
        v = seq.vectors[idx]
        for i in range(seq.dim):
            prefix[i] += v[i]
        if drift is None:
            val = norm_eval(seq.norm, tuple(prefix))
        else:
            val = norm_eval(seq.norm, tuple(p - k * d for p, d in zip(prefix, drift)))
        if val > best:
            best = val
    return best


def steinitz_rearrange(seq: VectorSequence) -> RearrangementCertificate:
    """Order a zero-sum sequence so every prefix has norm <= dim * radius."""
    _require_zero_sum(seq)
    order = rearrangement_order(seq.vectors, seq.dim)
    radius = seq.radius()
    certified = seq.dim * radius
    achieved = max_prefix_norm(seq, order)
    if achieved > certified:
        raise AssertionError("prefix bound dim * radius violated; construction is broken")
    return RearrangementCertificate(order, certified, achieved, radius)


def subspace_rearrange(seq: VectorSequence) -> RearrangementCertificate:
    """Like steinitz_rearrange but certified against the span dimension.

    The vectors are mapped through a coordinate bijection onto the span of
    the input, rearranged there, and the certificate is stated in the
    ambient norm with bound dim(span) * radius.
    """
    _require_zero_sum(seq)
    basis = []
    for v in seq.vectors:
        if rank_of_vectors(basis + [v]) > len(basis):
            basis.append(v)
    r = len(basis)
    radius = seq.radius()
    if r == 0:
        order = tuple(range(len(seq)))
    elif r == seq.dim:
        order = rearrangement_order(seq.vectors, seq.dim)
    else:
        bmat = Matrix.from_rows(basis).transpose()
        coords = []
        for v in seq.vectors:
            phi = solve_linear(bmat, v)
            if phi is None:
                raise AssertionError("vector outside the computed span")
            coords.append(phi)
        order = rearrangement_order(coords, r)
    certified = r * radius
    achieved = max_prefix_norm(seq, order)
    if achieved > certified:
        raise AssertionError("subspace prefix bound dim(V) * radius violated")
    return RearrangementCertificate(order, certified, achieved, radius)
