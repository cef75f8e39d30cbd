"""Batch property verification for the CLI.

Each suite turns (seed, count) into a deterministic list of report lines;
a line starts with "ok" or "FAIL".  Instances may be checked in parallel
workers, results are merged back in input order, so output bytes depend
only on the suite parameters.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .linalg import linf_norm, rank_of_vectors, vscale
from .norms import L1_NORM, LINF_NORM
from .rearrange import max_prefix_norm, steinitz_rearrange, subspace_rearrange
from .colorful import balance_rows, colorful_affine, colorful_rearrange, single_partial_sum
from .oracles import BudgetExceeded, brute_ilp, brute_rearrange_optimum, brute_single_sum
from .generate import (GenerationError, gen_adversarial_scalar_family, gen_four_block,
                       gen_rank_deficient_sequence, gen_unit_family, gen_zero_sum_family,
                       gen_zero_sum_sequence)
from .blockip import (KernelPoint, decompose_bundle, graver_enumerate, proximity_report,
                      reduce_kernel_point, solve_four_block)


def _norm_for(idx):
    return LINF_NORM if idx % 2 == 0 else L1_NORM


def _gen_pipeline_instance(idx: int, seed: int, shapes, delta_choices=(1, 2),
                           scale=None):
    """Deterministic instance for pipeline suites, skipping empty draws."""
    shape = shapes[idx % len(shapes)]
    delta = delta_choices[idx % len(delta_choices)]
    sub = 0
    while True:
        try:
            return gen_four_block(*shape, delta, seed * 10_000 + idx * 100 + sub,
                                  zero_a0=True, scale=scale)
        except GenerationError:
            sub += 1
            if sub > 50:
                raise


PIPELINE_SHAPES = ((1, 1, 1, 1, 2), (1, 1, 1, 2, 2), (2, 1, 1, 2, 3),
                   (1, 1, 2, 2, 2), (2, 1, 2, 2, 4), (1, 2, 1, 2, 2))


def suite_steinitz(seed: int, idx: int):
    d = 1 + idx % 5
    m = 5 + (seed + idx * 7) % 36
    seq = gen_zero_sum_sequence(d, m, _norm_for(idx), seed * 1000 + idx)
    cert = steinitz_rearrange(seq)
    assert cert.radius <= 1
    assert cert.achieved_max <= d * cert.radius
    assert cert.achieved_max == max_prefix_norm(seq, cert.permutation)
    return f"ok steinitz[{idx}] d={d} m={m} achieved={cert.achieved_max}"


def suite_steinitz_oracle(seed: int, idx: int):
    d = 1 + idx % 3
    m = 4 + idx % 5
    seq = gen_zero_sum_sequence(d, m, _norm_for(idx), seed * 1000 + idx)
    cert = steinitz_rearrange(seq)
    opt = brute_rearrange_optimum(seq)
    assert opt <= cert.achieved_max <= d
    return f"ok steinitz-oracle[{idx}] d={d} m={m} opt={opt} achieved={cert.achieved_max}"


def suite_colorful(seed: int, idx: int):
    d = 1 + idx % 3
    n = 1 + idx % 8
    m = 2 + idx % 9
    fam = gen_zero_sum_family(d, n, m, _norm_for(idx), seed * 1000 + idx)
    cert = colorful_rearrange(fam)
    bound = min(n * d, 40 * d ** 5)
    assert cert.achieved_max <= bound
    for perm in cert.permutations:
        assert sorted(perm) == list(range(m))
    return f"ok colorful[{idx}] d={d} n={n} m={m} route={cert.route} achieved={cert.achieved_max}"


def suite_colorful_balanced(seed: int, idx: int):
    n = 50 if idx % 2 == 0 else 100
    m = 3 + idx % 4
    fam = gen_adversarial_scalar_family(n, m, seed * 1000 + idx)
    bal = balance_rows(fam)
    assert bal.row_bound <= 40
    for prev, cur in zip(bal.history, bal.history[1:]):
        assert cur < prev
    cert = colorful_rearrange(fam)
    assert cert.achieved_max <= min(n, 40)
    assert cert.phase1_row_bound is not None and cert.phase1_row_bound <= 40
    return (f"ok colorful-balanced[{idx}] n={n} m={m} iters={len(bal.history) - 1} "
            f"rowbound={bal.row_bound} achieved={cert.achieved_max}")


def suite_affine(seed: int, idx: int):
    d = 1 + idx % 3
    n = 1 + idx % 5
    m = 2 + idx % 7
    fam = gen_unit_family(d, n, m, _norm_for(idx), seed * 1000 + idx)
    cert = colorful_affine(fam)
    bound = min(n * d, 40 * d ** 5)
    assert cert.achieved_max <= 2 * bound
    return (f"ok affine[{idx}] d={d} n={n} m={m} achieved={cert.achieved_max} "
            f"tight_bound_met={cert.tight_bound_met}")


SINGLESUM_SIZES = ((2, 8), (3, 6), (4, 5), (5, 4))


def suite_singlesum(seed: int, idx: int):
    d = 1 + idx % 4
    n, m = SINGLESUM_SIZES[idx % len(SINGLESUM_SIZES)]
    fam = gen_zero_sum_family(d, n, m, _norm_for(idx), seed * 1000 + idx)
    worst = Fraction(0)
    for k in range(m + 1):
        sel = single_partial_sum(fam, k)
        assert all(len(I) == k for I in sel.index_sets)
        assert sel.achieved <= d
        worst = max(worst, sel.achieved)
        try:
            opt = brute_single_sum(fam, k)
            assert opt <= sel.achieved
        except BudgetExceeded:
            pass
    return f"ok singlesum[{idx}] d={d} n={n} m={m} worst={worst}"


def suite_subspace(seed: int, idx: int):
    d = 2 + idx % 4
    r = 1 + idx % (d - 1) if d > 2 else 1
    m = 6 + idx % 10
    seq = gen_rank_deficient_sequence(d, r, m, seed * 1000 + idx)
    cert = subspace_rearrange(seq)
    span = rank_of_vectors(seq.vectors)
    assert cert.certified_bound == span * cert.radius
    assert cert.achieved_max <= span * cert.radius
    return f"ok subspace[{idx}] d={d} span={span} m={m} achieved={cert.achieved_max}"


def suite_pipeline(seed: int, idx: int):
    inst, pt = _gen_pipeline_instance(idx, seed, PIPELINE_SHAPES, scale=24)
    out = reduce_kernel_point(inst, pt)
    diag = out.diagnostics
    return (f"ok pipeline[{idx}] shape=({inst.s0},{inst.s},{inst.t0},{inst.t},{inst.n}) "
            f"delta={inst.delta} psi={diag['psi']} dimV={diag['dim_v']} "
            f"found={out.vector is not None}")


def suite_reduce(seed: int, idx: int):
    inst, pt = _gen_pipeline_instance(idx, seed, ((1, 1, 1, 1, 2), (1, 1, 1, 1, 3)),
                                      delta_choices=(1,))
    z = tuple(pt.x) + tuple(pt.y)
    if linf_norm(z) == 0:
        raise AssertionError("generator planted the zero point")
    _, consts = decompose_bundle(inst, pt)
    c = math.ceil(consts.xi / linf_norm(z)) + 1
    for _ in range(6):
        big = KernelPoint(vscale(pt.x, c), vscale(pt.y, c))
        out = reduce_kernel_point(inst, big)
        if linf_norm(tuple(big.x) + tuple(big.y)) > out.constants.xi:
            break
        c *= 2
    else:
        raise AssertionError("could not scale past xi")
    assert out.vector is not None, "no reduction above xi"
    # independent existence check below the found vector's radius
    found = tuple(out.vector[0]) + tuple(out.vector[1])
    H = inst.H_matrix()
    from .lp import enum_integer_points
    cap = int(linf_norm(found))
    upper = tuple(min(math.floor(v), cap) for v in tuple(big.x) + tuple(big.y))
    witness = None
    for zz in enum_integer_points((0,) * len(upper), upper,
                                  predicate=lambda w: any(w)):
        if all(v == 0 for v in H.mul_vec(zz)):
            witness = zz
            break
    assert witness is not None
    return (f"ok reduce[{idx}] xi={out.constants.xi} psi={out.diagnostics['psi']} "
            f"norm={linf_norm(tuple(big.x) + tuple(big.y))}")


def suite_graver(seed: int, idx: int):
    inst, _ = _gen_pipeline_instance(idx, seed, ((1, 1, 1, 1, 2),), delta_choices=(1,))
    box = 4
    basis = graver_enumerate(inst, box)
    from .blockip import conformal_leq
    from .lp import enum_integer_points
    H = inst.H_matrix()
    dim = inst.x_dim + inst.y_dim
    kernel = [z for z in enum_integer_points((-box,) * dim, (box,) * dim,
                                             predicate=lambda z: any(z))
              if all(v == 0 for v in H.mul_vec(z))]
    for g in basis:
        assert not any(h != g and conformal_leq(h, g) for h in kernel)
    for h in kernel:
        if h not in basis:
            assert any(g != h and conformal_leq(g, h) for g in kernel)
    return f"ok graver[{idx}] box={box} size={len(basis)}"


def suite_solve(seed: int, idx: int):
    sub = 0
    while True:
        try:
            inst, _ = gen_four_block(1, 1, 1, 1, 2 + idx % 2, 1,
                                     seed * 10_000 + idx * 100 + sub)
        except GenerationError:
            sub += 1
            continue
        rep = proximity_report(inst)
        if rep.ip_feasible and rep.lp_status == "optimal":
            break
        sub += 1
        if sub > 50:
            raise AssertionError("no feasible instance found")
    opt = brute_ilp(inst)
    sol = solve_four_block(inst, math.ceil(rep.xi))
    assert sol is not None and opt is not None
    assert sol[2] == opt[1]
    return f"ok solve[{idx}] value={sol[2]} radius_xi={math.ceil(rep.xi)}"


def suite_proximity(seed: int, idx: int):
    sub = 0
    while True:
        try:
            inst, _ = gen_four_block(1, 1, 1, 1, 2 + idx % 2, 1,
                                     seed * 20_000 + idx * 100 + sub)
        except GenerationError:
            sub += 1
            continue
        rep = proximity_report(inst)
        if rep.ip_feasible and rep.lp_status == "optimal":
            break
        sub += 1
        if sub > 50:
            raise AssertionError("no feasible instance found")
    assert rep.distance_inf <= rep.xi
    return f"ok proximity[{idx}] dist={rep.distance_inf} xi={rep.xi}"


SUITES = {
    "steinitz": suite_steinitz,
    "steinitz-oracle": suite_steinitz_oracle,
    "colorful": suite_colorful,
    "colorful-balanced": suite_colorful_balanced,
    "affine": suite_affine,
    "singlesum": suite_singlesum,
    "subspace": suite_subspace,
    "pipeline": suite_pipeline,
    "reduce": suite_reduce,
    "graver": suite_graver,
    "solve": suite_solve,
    "proximity": suite_proximity,
}

DEFAULT_COUNTS = {
    "steinitz": 8, "steinitz-oracle": 6, "colorful": 8, "colorful-balanced": 2,
    "affine": 6, "singlesum": 4, "subspace": 6, "pipeline": 6, "reduce": 2,
    "graver": 4, "solve": 4, "proximity": 4,
}


def _run_task(task):
    suite, seed, idx = task
    try:
        return SUITES[suite](seed, idx)
    except Exception as exc:  # noqa: BLE001 - reported as a FAIL line
        name = getattr(exc, "name", type(exc).__name__)
        return f"FAIL {suite}[{idx}] {name}: {exc}"


def run_suites(names, seed: int, count: int | None = None, workers: int = 1):
    """Run the named suites; returns (lines, all_ok)."""
    tasks = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        c = count if count is not None else DEFAULT_COUNTS[name]
        tasks.extend((name, seed, idx) for idx in range(c))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            lines = list(pool.map(_run_task, tasks))
    else:
        lines = [_run_task(t) for t in tasks]
    return lines, all(line.startswith("ok") for line in lines)
