import io
import json
import shutil
import subprocess

import pytest

from cellforge.cli import cell_name, fmt, fmt_complex, run
from cellforge.closed_forms import construct_cells


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_list_shows_catalog():
    code, out, _ = call("list")
    assert code == 0
    assert "E1_12" in out and "A:12" in out and "E24" in out


def test_show_reports_pf_and_precision():
    code, out, _ = call("show", "--graph", "E8star")
    assert code == 0
    assert "PF eigenvalue" in out and "precision = 53 bits" in out


def test_cells_table_uses_shortest_round_trip():
    code, out, _ = call("cells", "--graph", "E8star")
    assert code == 0
    assert "W_222 = +2.7595664559264153" in out
    assert "W_333 = -2.7595664559264153" in out


def test_cells_csv_and_json():
    code, out, _ = call("cells", "--graph", "A:5", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "triangle,re,im"
    code, out, _ = call("cells", "--graph", "E1:12", "--variant", "minus", "--format", "json")
    assert code == 0 and json.loads(out)["variant"] == "minus"


def test_verify_exit_codes():
    assert call("verify", "--graph", "E8")[0] == 0
    code, out, _ = call("verify", "--graph", "E8", "--tol", "1e-30")
    assert code == 1


def test_hecke_block_and_all_blocks():
    code, out, _ = call("hecke", "--graph", "E8star", "--x", "2", "--y", "2")
    assert code == 0 and out.startswith("U^(2,2)")
    code, out, _ = call("hecke", "--graph", "A:5", "--format", "json")
    assert code == 0 and json.loads(out)


def test_connection_passes():
    code, out, _ = call("connection", "--graph", "D:9", "--variant", "conj")
    assert code == 0 and "Yang-Baxter" in out


def test_usage_errors():
    assert call("cells", "--graph", "A:6", "--variant", "plus")[0] == 2
    assert call("cells", "--graph", "Z:3")[0] == 2
    assert call("cells")[0] == 2
    assert call("bogus")[0] == 2
    assert call("suite", "--only", "99")[0] == 2


def test_unsupported_graph_exit_code():
    code, _, err = call("show", "--graph", "E4:12")
    assert code == 3
    assert "E4(12): not determined in source paper" in err


@pytest.mark.parametrize("graph,variant", [("E1:12", "minus"), ("D:9", "conj"), ("E24", None),
                                           ("Astar:8", "plus")])
@pytest.mark.parametrize("kind", ["cells", "graph"])
def test_export_import_is_byte_identical(tmp_path, graph, variant, kind):
    args = ["export", "--graph", graph, "--kind", kind] + (["--variant", variant] if variant else [])
    code, first, _ = call(*args)
    assert code == 0
    path = tmp_path / "x.json"
    path.write_text(first, encoding="utf-8")
    code, second, err = call("import", str(path))
    assert code == 0
    assert second == first
    if kind == "cells":
        assert "type I" in err


def test_out_option_writes_file(tmp_path):
    target = tmp_path / "cells.json"
    code, out, _ = call("export", "--graph", "A:4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["graph"]["name"] == "A(4)"


def test_solve_reports_json():
    code, out, _ = call("solve", "--graph", "A:5", "--format", "json", "--no-cells")
    d = json.loads(out)
    assert code == 0 and d["status"] == "solved"
    assert float.fromhex(d["objective"]) <= 1e-16
    assert "cells" not in d


def test_solve_failure_exit_code():
    code, _, _ = call("solve", "--graph", "A:6", "--restarts", "1", "--max-iterations", "2")
    assert code == 1


def test_precision_environment(monkeypatch):
    monkeypatch.setenv("CELLFORGE_PRECISION", "120")
    code, out, _ = call("show", "--graph", "A:6")
    assert code == 0 and "precision = 120 bits" in out
    monkeypatch.setenv("CELLFORGE_PRECISION", "lots")
    assert call("show", "--graph", "A:6")[0] == 2
    monkeypatch.setenv("CELLFORGE_PRECISION", "20")
    assert call("show", "--graph", "A:6")[0] == 2


def test_suite_subset():
    code, out, _ = call("suite", "--only", "3,6")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2 and all(" PASS " in line for line in lines)


def test_formatting_helpers():
    assert fmt(0.1) == "0.1"
    assert fmt_complex(complex(1.5, -2.0)) == "1.5-2.0i"
    assert fmt_complex(2.0, signed=True) == "+2.0"
    e8 = construct_cells("E8star")
    assert cell_name(e8.graph, e8.graph.triangle(2, 2, 2)) == "W_222"
    e1 = construct_cells("E1_12", variant="plus")
    assert any(cell_name(e1.graph, t).startswith("W(") for t in e1.triangles)


@pytest.mark.skipif(shutil.which("cellforge") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["cellforge", "verify", "--graph", "A:6"], capture_output=True, text=True)
    assert proc.returncode == 0


def test_solve_classify_names_the_variants():
    code, out, _ = call("solve", "--graph", "Astar:8", "--classify", "10", "--seed", "1", "--format", "json")
    assert code == 0
    assert {c["matches"] for c in json.loads(out)} == {"plus", "minus"}
