import io
from contextlib import redirect_stdout

import pytest

from steinitz import fileio
from steinitz.cli import main
from steinitz.fileio import ParseError
from steinitz.generate import gen_four_block, gen_zero_sum_family
from steinitz.norms import LINF_NORM


def test_gen_family_single_vector_is_zero():
    fam = gen_zero_sum_family(3, 1, 1, LINF_NORM, 9)
    assert fam.vectors[0][0] == (0, 0, 0)


def test_gen_family_zero_sum_and_unit_ball():
    fam = gen_zero_sum_family(2, 3, 5, LINF_NORM, 42)
    assert all(x == 0 for x in fam.total())
    assert fam.max_norm() <= 1


def test_gen_family_determinism():
    a = gen_zero_sum_family(2, 3, 5, LINF_NORM, 42)
    b = gen_zero_sum_family(2, 3, 5, LINF_NORM, 42)
    assert a == b
    c = gen_zero_sum_family(2, 3, 5, LINF_NORM, 43)
    assert a != c


def test_gen_four_block_planted_point_in_kernel():
    inst, pt = gen_four_block(1, 1, 1, 1, 2, 1, 3)
    z = tuple(pt.x) + tuple(pt.y)
    assert all(v == 0 for v in inst.H_matrix().mul_vec(z))
    assert all(v >= 0 for v in z)


def test_gen_four_block_delta_zero_edge():
    inst, pt = gen_four_block(1, 1, 1, 1, 2, 0, 4, require_full_rank=False)
    assert inst.delta == 0
    z = tuple(pt.x) + tuple(pt.y)
    assert sum(z) == 2 * (inst.x_dim + inst.y_dim)  # any slice point qualifies


def test_gen_four_block_determinism():
    a = gen_four_block(1, 1, 1, 2, 2, 1, 11)
    b = gen_four_block(1, 1, 1, 2, 2, 1, 11)
    assert a[0] == b[0] and a[1] == b[1]


def test_family_roundtrip(tmp_path):
    fam = gen_zero_sum_family(2, 3, 4, LINF_NORM, 5)
    path = tmp_path / "fam.txt"
    fileio.write_family(fam, str(path))
    again = fileio.read_family(str(path))
    assert again == fam
    # and writing again is byte-identical
    path2 = tmp_path / "fam2.txt"
    fileio.write_family(again, str(path2))
    assert path.read_bytes() == path2.read_bytes()


def test_fourblock_roundtrip(tmp_path):
    inst, pt = gen_four_block(2, 1, 2, 2, 2, 2, 6)
    path = tmp_path / "inst.4blk"
    fileio.write_fourblock(inst, str(path))
    again = fileio.read_fourblock(str(path))
    assert again == inst
    ppath = tmp_path / "pt.txt"
    fileio.write_point(pt, str(ppath))
    pt2 = fileio.read_point(str(ppath), inst)
    assert pt2 == pt


def test_malformed_rational_rejected(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("colorful 1 1 1 linf\n1/0\n")
    with pytest.raises(ParseError) as err:
        fileio.read_family(str(path))
    assert "denominator" in str(err.value)
    assert err.value.line == 2


def test_missing_section_named(tmp_path):
    inst, _ = gen_four_block(1, 1, 1, 1, 1, 1, 7)
    path = tmp_path / "inst.4blk"
    fileio.write_fourblock(inst, str(path))
    text = path.read_text().replace("\ncx\n", "\noops\n")
    path.write_text(text)
    with pytest.raises(ParseError) as err:
        fileio.read_fourblock(str(path))
    assert "'cx'" in str(err.value)


def test_infinite_bounds_roundtrip(tmp_path):
    inst, _ = gen_four_block(1, 1, 1, 1, 1, 1, 8)
    from steinitz.blockip import FourBlockInstance
    open_inst = FourBlockInstance.make(
        inst.A0, list(inst.B), list(inst.A), list(inst.C), inst.b,
        inst.cx, inst.cy, (None,), inst.uy)
    path = tmp_path / "open.4blk"
    fileio.write_fourblock(open_inst, str(path))
    assert "inf" in path.read_text()
    assert fileio.read_fourblock(str(path)) == open_inst


# ---------------------------------------------------------------------------
# CLI


def _run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def test_cli_gen_and_rearrange(tmp_path):
    fam = tmp_path / "f.txt"
    code, _ = _run(["gen", "family", "--d", "2", "--n", "1", "--m", "6",
                    "--seed", "3", "--output", str(fam)])
    assert code == 0
    code, out = _run(["rearrange", "--input", str(fam)])
    assert code == 0
    assert "certified_bound: 2" in out
    perm_line = [l for l in out.splitlines() if l.startswith("permutation:")][0]
    assert sorted(int(v) for v in perm_line.split(":")[1].split()) == [1, 2, 3, 4, 5, 6]


def test_cli_colorful_json(tmp_path):
    import json
    fam = tmp_path / "f.txt"
    _run(["gen", "family", "--d", "1", "--n", "3", "--m", "4",
          "--seed", "5", "--output", str(fam)])
    code, out = _run(["colorful", "--input", str(fam), "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["certified_bound"] == "3"
    assert len(data["permutations"]) == 3


def test_cli_singlesum(tmp_path):
    fam = tmp_path / "f.txt"
    _run(["gen", "family", "--d", "2", "--n", "2", "--m", "4",
          "--seed", "9", "--output", str(fam)])
    code, out = _run(["singlesum", "--input", str(fam), "--k", "2"])
    assert code == 0 and "achieved:" in out


def test_cli_fourblock_pipeline(tmp_path):
    inst = tmp_path / "i.4blk"
    pt = tmp_path / "p.txt"
    code, _ = _run(["gen", "fourblock", "--s0", "1", "--s", "1", "--t0", "1",
                    "--t", "1", "--n", "2", "--delta", "1", "--seed", "5",
                    "--output", str(inst), "--point-output", str(pt)])
    assert code == 0
    code, out = _run(["reduce", "--input", str(inst), "--point", str(pt)])
    assert code == 0 and "xi:" in out
    code, out = _run(["graver", "--input", str(inst), "--box", "3"])
    assert code == 0 and "size:" in out
    code, out = _run(["solve", "--input", str(inst), "--radius", "3"])
    assert code == 0 and "status:" in out
    code, out = _run(["proximity", "--input", str(inst)])
    assert code == 0 and "lp_status: optimal" in out
    code, out = _run(["oracle", "--kind", "ilp", "--input", str(inst)])
    assert code == 0 and "value:" in out


def test_cli_oracle_rearrange(tmp_path):
    fam = tmp_path / "f.txt"
    _run(["gen", "family", "--d", "1", "--n", "1", "--m", "5",
          "--seed", "8", "--output", str(fam)])
    code, out = _run(["oracle", "--kind", "rearrange", "--input", str(fam)])
    assert code == 0 and "value:" in out


def test_cli_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("colorful 1 1 1 linf\n1/0\n")
    code, _ = _run(["rearrange", "--input", str(bad)])
    assert code == 2


def test_cli_verify_single_suite(tmp_path):
    out_file = tmp_path / "report.txt"
    code, _ = _run(["verify", "--suite", "graver", "--count", "2",
                    "--output", str(out_file)])
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert len(lines) == 2 and all(l.startswith("ok graver") for l in lines)


def test_cli_plotdata(tmp_path):
    fam = tmp_path / "f.txt"
    _run(["gen", "family", "--d", "2", "--n", "2", "--m", "3",
          "--seed", "4", "--output", str(fam)])
    code, out = _run(["plotdata", "--input", str(fam), "--mode", "colorful"])
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert len(rows) == 3  # one trace row per k


def test_cli_output_determinism(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for target in (a, b):
        _run(["gen", "fourblock", "--s0", "1", "--s", "1", "--t0", "1", "--t", "2",
              "--n", "2", "--delta", "1", "--seed", "77", "--output", str(target)])
    assert a.read_bytes() == b.read_bytes()


def test_verify_workers_match_sequential():
    from steinitz.verify import run_suites
    seq_lines, ok1 = run_suites(["steinitz", "graver"], seed=5, count=2, workers=1)
    par_lines, ok2 = run_suites(["steinitz", "graver"], seed=5, count=2, workers=2)
    assert ok1 and ok2
    assert seq_lines == par_lines


def test_cli_reduce_scaled_point_end_to_end(tmp_path):
    import json
    import math
    from steinitz.generate import gen_four_block
    from steinitz.blockip import decompose_bundle
    from steinitz.linalg import linf_norm, vscale
    from steinitz.blockip import KernelPoint

    inst, pt = gen_four_block(1, 1, 1, 1, 2, 1, 61, zero_a0=True)
    _, consts = decompose_bundle(inst, pt)
    z = tuple(pt.x) + tuple(pt.y)
    c = math.ceil(consts.xi / linf_norm(z)) + 1
    big = KernelPoint(vscale(pt.x, c), vscale(pt.y, c))
    ipath, ppath = tmp_path / "i.4blk", tmp_path / "p.txt"
    fileio.write_fourblock(inst, str(ipath))
    fileio.write_point(big, str(ppath))
    code, out = _run(["reduce", "--input", str(ipath), "--point", str(ppath), "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["found"] is True
    found = [int(v) for v in data["x"]] + [int(v) for v in data["y"]]
    assert any(found)
    assert all(v == 0 for v in inst.H_matrix().mul_vec(tuple(found)))


def test_read_write_instance_dispatch(tmp_path):
    from steinitz.fileio import read_instance, write_instance
    fam = gen_zero_sum_family(2, 2, 3, LINF_NORM, 15)
    inst, _ = gen_four_block(1, 1, 1, 1, 2, 1, 15)
    f1, f2 = tmp_path / "a.txt", tmp_path / "b.txt"
    write_instance(fam, str(f1))
    write_instance(inst, str(f2))
    assert read_instance(str(f1)) == fam
    assert read_instance(str(f2)) == inst
    bad = tmp_path / "c.txt"
    bad.write_text("mystery 1 2 3\n")
    with pytest.raises(ParseError):
        read_instance(str(bad))
