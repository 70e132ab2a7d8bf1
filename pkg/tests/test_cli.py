import json
import subprocess
import sys
from dataclasses import replace

import pytest

from instances import get

from twobundle import bundle as bd
from twobundle import io
from twobundle import simplicial as S
from twobundle.cli import main


def run(argv, capsys):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def strip_time(rep):
    return {k: v for k, v in rep.items() if k != "wall_time"}


# -- validate ------------------------------------------------------------------


def test_validate_pass(data_dir, capsys):
    code, rep = run(["validate", str(data_dir / "gerbe3.2cat"), "--groupoid"], capsys)
    assert code == 0 and rep["outcome"] == "pass"
    assert rep["groupoid"] is True and rep["strict"] is True
    assert rep["counts"]["violations"] == 0


def test_validate_monoid_not_groupoid(data_dir, capsys):
    code, rep = run(["validate", str(data_dir / "monoid.2cat"), "--groupoid"], capsys)
    assert code == 0 and rep["groupoid"] is False


def test_validate_reports_witness(tmp_path, capsys):
    C = get("twisted3b")
    bad = replace(C, alpha={k: C.identity_two[C.hcomp1[(k[0], C.hcomp1[(k[1], k[2])])]] for k in C.alpha})
    io.save_two_category(bad, tmp_path / "bad.2cat")
    code, rep = run(["validate", str(tmp_path / "bad.2cat")], capsys)
    assert code == 1 and rep["outcome"] == "fail"
    by_axiom = rep["counts"]["violations_by_axiom"]
    assert set(rep["witnesses"]) == set(by_axiom)
    assert sum(by_axiom.values()) == rep["counts"]["violations"] > 0


def test_parse_error_exit_code(data_dir, tmp_path, capsys):
    text = (data_dir / "deloop2.2cat").read_text()
    (tmp_path / "cut.2cat").write_text("\n".join(text.splitlines()[:14]))
    code, rep = run(["validate", str(tmp_path / "cut.2cat")], capsys)
    assert code == 1 and rep["outcome"] == "error"
    assert ":14:4" in rep["error"]


def test_missing_file(capsys):
    code, rep = run(["validate", "/nonexistent/x.2cat"], capsys)
    assert code == 1 and rep["outcome"] == "error"


def test_bad_arguments(capsys):
    assert main(["no-such-command"]) == 1
    capsys.readouterr()


# -- nerve and kan -------------------------------------------------------------


def test_nerve_counts(data_dir, capsys):
    code, rep = run(["nerve", str(data_dir / "deloop2.2cat")], capsys)
    assert code == 0 and rep["counts"]["simplices"] == [1, 2, 4, 8]


def test_nerve_coskeletal(data_dir, capsys):
    code, rep = run(["nerve", str(data_dir / "gerbe2.2cat"), "--dim", "4"], capsys)
    assert code == 0 and rep["coskeletal_3"] is True


def test_nerve_dimension_cap(data_dir, capsys):
    code, rep = run(["nerve", str(data_dir / "gerbe2.2cat"), "--dim", "9"], capsys)
    assert code == 2 and rep["outcome"] == "limit"


def test_nerve_bound(data_dir, capsys):
    code, rep = run(["nerve", str(data_dir / "s3.2cat"), "--bound", "50"], capsys)
    assert code == 2


def test_nerve_dump_then_kan(data_dir, tmp_path, capsys):
    dump = tmp_path / "n.sset"
    code, _ = run(["nerve", str(data_dir / "gerbe2.2cat"), "--dump", str(dump)], capsys)
    assert code == 0 and dump.exists()
    code, rep = run(["kan", str(dump)], capsys)
    assert code == 0 and rep["kan"]["passed"]


def test_kan_groupoid(data_dir, capsys):
    code, rep = run(["kan", str(data_dir / "gerbe3.2cat"), "--dim", "3"], capsys)
    assert code == 0
    assert rep["fillers"]["failures"] == 0 and rep["fillers"]["ok"] == rep["fillers"]["horns"]
    assert rep["counts"]["horns_checked"] > 0


def test_kan_monoid_fails(data_dir, capsys):
    code, rep = run(["kan", str(data_dir / "monoid.2cat"), "--dim", "3"], capsys)
    assert code == 1 and rep["outcome"] == "fail"
    assert rep["witnesses"]["horn"]["n"] == 2 and rep["witnesses"]["horn"]["k"] == 0


def test_kan_on_complex(data_dir, capsys):
    code, rep = run(["kan", str(data_dir / "point.cplx")], capsys)
    assert code == 0


# -- classify ------------------------------------------------------------------


@pytest.mark.parametrize("cat,base,classes", [("gerbe2", "boundary3", 2), ("deloop3", "circle3", 3),
                                               ("gerbe3", "point", 1)])
def test_classify(data_dir, capsys, cat, base, classes):
    code, rep = run(["classify", str(data_dir / f"{cat}.2cat"), str(data_dir / f"{base}.cplx")], capsys)
    assert code == 0
    assert rep["counts"]["classes"] == classes == rep["oracle"]
    assert len(rep["representatives"]) == classes


def test_classify_is_deterministic(data_dir, capsys):
    args = ["classify", str(data_dir / "gerbe2.2cat"), str(data_dir / "boundary3.cplx")]
    _, a = run(args, capsys)
    _, b = run(args, capsys)
    assert strip_time(a) == strip_time(b)


# -- bundle files --------------------------------------------------------------


def _write_bundle(tmp_path, B, name, two, base):
    io.save_bundle(B, tmp_path / name, two, base)
    return str(tmp_path / name)


@pytest.fixture
def gerbe_files(tmp_path, data_dir):
    C = io.load_two_category(data_dir / "gerbe2.2cat")
    io.save_two_category(C, tmp_path / "g.2cat")
    for K, name in [(S.simplex(2), "tri.cplx"), (S.simplex(1), "edge.cplx")]:
        io.save_base(K, tmp_path / name)
    return tmp_path, C


def test_bundle_verify(gerbe_files, capsys):
    tmp_path, C = gerbe_files
    io.save_base(S.simplex(3), tmp_path / "tet.cplx")
    B = bd.trivial_bundle(C, S.simplex(3))
    good = _write_bundle(tmp_path, B, "good.bundle", "g.2cat", "tet.cplx")
    code, rep = run(["bundle-verify", good], capsys)
    assert code == 0 and rep["counts"]["violations"] == 0
    B.phi[(0, 1, 2)] = 1 - B.phi[(0, 1, 2)]
    bad = _write_bundle(tmp_path, B, "bad.bundle", "g.2cat", "tet.cplx")
    code, rep = run(["bundle-verify", bad], capsys)
    assert code == 1 and rep["witnesses"]["tetrahedron"] == [0, 1, 2, 3]


def test_glue(gerbe_files, capsys):
    tmp_path, C = gerbe_files
    K = S.simplex(2)
    B = bd.enumerate_bundles(C, K)[1]
    first = _write_bundle(tmp_path, B, "x.bundle", "g.2cat", "tri.cplx")
    second = _write_bundle(tmp_path, B, "y.bundle", "g.2cat", "tri.cplx")
    (tmp_path / "along.json").write_text(io.dumps({"format": "glue", "A": [[0, 1]], "map": [[0, 0], [1, 1]]}))
    out = tmp_path / "glued.bundle"
    code, rep = run(["glue", first, second, "--along", str(tmp_path / "along.json"), "-o", str(out)], capsys)
    assert code == 0 and rep["counts"]["triangles"] == 2
    glued = io.load_bundle(out)
    assert len(glued.base.vertices) == 4 and bd.validate_bundle(glued) == []


def test_glue_mismatch(gerbe_files, capsys):
    tmp_path, C = gerbe_files
    bs = bd.enumerate_bundles(C, S.simplex(2))
    a = next(b for b in bs if b.phi[(0, 1, 2)] == 0)
    b = next(b for b in bs if b.phi[(0, 1, 2)] == 1)
    first = _write_bundle(tmp_path, a, "x.bundle", "g.2cat", "tri.cplx")
    second = _write_bundle(tmp_path, b, "y.bundle", "g.2cat", "tri.cplx")
    # glue along the whole triangle: the 2-cells disagree
    (tmp_path / "along.json").write_text(io.dumps({"format": "glue", "A": [[0, 1, 2]],
                                                   "map": [[0, 0], [1, 1], [2, 2]]}))
    code, rep = run(["glue", first, second, "--along", str(tmp_path / "along.json")], capsys)
    assert code == 1 and "MismatchOnA" in rep["error"]


def test_pullback(gerbe_files, capsys):
    tmp_path, C = gerbe_files
    B = bd.enumerate_bundles(C, S.simplex(1))[0]
    src = _write_bundle(tmp_path, B, "e.bundle", "g.2cat", "edge.cplx")
    (tmp_path / "m.json").write_text(io.dumps({"format": "map", "vertex_map": [[0, 0], [1, 0], [2, 1]]}))
    out = tmp_path / "pb.bundle"
    code, rep = run(["pullback", src, "--source", str(tmp_path / "tri.cplx"), "--map", str(tmp_path / "m.json"),
                     "-o", str(out)], capsys)
    assert code == 0 and rep["counts"]["triangles"] == 1
    assert io.load_bundle(out) == bd.pullback(B, S.BaseMap(S.simplex(2), S.simplex(1), (0, 0, 1)))


def test_pullback_non_monotone(gerbe_files, capsys):
    tmp_path, C = gerbe_files
    B = bd.enumerate_bundles(C, S.simplex(1))[0]
    src = _write_bundle(tmp_path, B, "e.bundle", "g.2cat", "edge.cplx")
    (tmp_path / "m.json").write_text(io.dumps({"format": "map", "vertex_map": [[0, 1], [1, 0], [2, 1]]}))
    code, rep = run(["pullback", src, "--source", str(tmp_path / "tri.cplx"), "--map", str(tmp_path / "m.json")],
                    capsys)
    assert code == 1 and rep["outcome"] == "error"


# -- example and bc-report -----------------------------------------------------


@pytest.mark.parametrize("argv,cells", [
    (["gerbe", "--n", "3"], (1, 1, 3)),
    (["delooping", "--n", "4"], (1, 4, 4)),
    (["bc", "--b1", "1", "--b0", "1", "--p", "2", "--dimB", "1"], (2, 13, 146)),
    (["bc-ho", "--dimB", "1"], (2, 13, 73)),
    (["kv", "--n", "2", "--entry-bound", "2"], (1, 14, 14)),
])
def test_example_writes_loadable_file(argv, cells, tmp_path, capsys):
    out = tmp_path / "c.2cat"
    code, rep = run(["example"] + argv + ["-o", str(out)], capsys)
    assert code == 0
    C = io.load_two_category(out)
    assert (len(C.objects), len(C.one_cells), len(C.two_cells)) == cells
    assert (rep["counts"]["objects"], rep["counts"]["one_cells"], rep["counts"]["two_cells"]) == cells


def test_example_base(tmp_path, capsys):
    code, rep = run(["example", "base", "--base", "circle4", "-o", str(tmp_path / "c.cplx")], capsys)
    assert code == 0 and io.load_base(tmp_path / "c.cplx").simplices == S.circle(4).simplices
    code, rep = run(["example", "base", "--base", "torus"], capsys)
    assert code == 1


def test_example_size_limit(capsys):
    code, rep = run(["example", "bc", "--variant", "eq", "--dimB", "1", "--bound", "2000"], capsys)
    assert code == 2 and rep["outcome"] == "limit"


def test_bc_report(capsys):
    code, rep = run(["bc-report", "--b1", "1", "--b0", "1", "--p", "2", "--dimB", "1"], capsys)
    assert code == 0
    assert rep["verdicts"] == {"hi_identity": True, "ho_colax": True, "ho_well_defined": True,
                               "b2_counterexample": True}
    assert rep["counts"]["b2_colax_failures"] == 25
    assert "b2_colax" in rep["witnesses"]


def test_stderr_summary(data_dir, capsys):
    assert main(["validate", str(data_dir / "gerbe2.2cat")]) == 0
    err = capsys.readouterr().err
    assert err.startswith("validate: pass")


def test_console_entry_point(data_dir):
    r = subprocess.run([sys.executable, "-m", "twobundle.cli", "validate", str(data_dir / "deloop2.2cat"), "--json"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert json.loads(r.stdout)["outcome"] == "pass"
