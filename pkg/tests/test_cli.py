from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from soliton.cli import run
from soliton.diffpoly import DiffPoly
from soliton.recursion import mkdv_flow


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def test_flows_text():
    status, out, _ = call("flows", "--algebra", "sl2", "--flow", "3")
    assert status == 0
    assert out.strip() == "∂_3 u = −3/8 u^2 u' + 1/4 u'''"


def test_flows_latex_rank2():
    status, out, _ = call("flows", "--algebra", "sl3", "--flow", "1", "--format", "latex")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines == ["\\partial_{1} u_{1} = u_{1}^{(1)}", "\\partial_{1} u_{2} = u_{2}^{(1)}"]


def test_flows_json_round_trip():
    status, out, _ = call("flows", "--algebra", "sl3", "--flow", "2", "--format", "json")
    assert status == 0
    obj = json.loads(out)
    images = [DiffPoly.from_json_obj(x, 2) for x in obj["images"]]
    assert tuple(images) == mkdv_flow(3, 2).images


def test_flow_not_in_hierarchy():
    status, out, err = call("flows", "--algebra", "sl2", "--flow", "2")
    assert status == 2
    assert "2 ∉ I for A_1^(1)" in err
    assert out == ""


def test_unsupported_algebra():
    status, _, err = call("flows", "--algebra", "E8", "--flow", "1")
    assert status == 3
    assert "E8" in err


def test_bad_arguments():
    assert call("flows", "--algebra", "sl2")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("flows", "--algebra", "Q9", "--flow", "1")[0] == 2
    assert call("flows", "--algebra", "sl2", "--flow", "3", "--cutoff", "-1")[0] == 2
    assert call("poisson", "--algebra", "sl2", "--left", "{", "--right", "[]")[0] == 2


def test_table():
    status, out, _ = call("table", "--algebra", "E8")
    assert status == 0
    assert "h=30" in out and "[1, 7, 11, 13, 17, 19, 23, 29]" in out
    status, out, _ = call("table", "--format", "json")
    rows = json.loads(out)
    assert len(rows) > 14
    assert rows[0] == {"type": "A1", "h": 2, "exponents": [1], "labels": [1, 1], "cartan": [[2]]}


def test_miura_and_kdv():
    assert call("miura", "--algebra", "sl2")[1].strip() == "s = 1/4 u^2 + 1/2 u'"
    assert call("kdv", "--algebra", "sl2", "--flow", "3")[1].strip() == \
        "∂_3 s = −3/2 s s' + 1/4 s'''"


def test_conserved():
    status, out, _ = call("conserved", "--algebra", "sl2", "--degree", "3")
    assert status == 0
    assert out.splitlines()[:2] == ["H_3 = 1/4 u^4 + (u')^2", "xi(H_3) = −16 ∂_3"]
    status, out, _ = call("conserved", "--algebra", "sl2", "--degree", "1", "--format", "json")
    obj = json.loads(out)
    assert obj["scale"] == "4/1"
    assert DiffPoly.from_json_obj(obj["density"], 1) == DiffPoly.var(1, 0, 1) ** 2


def test_poisson():
    u = DiffPoly.var(1, 0, 1)
    h1 = (u * u).to_json()
    h3 = (u ** 4 / 4 + u.d_z() ** 2).to_json()
    status, out, _ = call("poisson", "--algebra", "sl2", "--left", h1, "--right", h3,
                          "--format", "json")
    assert status == 0
    assert json.loads(out)["bracket"] == []
    status, out, _ = call("poisson", "--algebra", "sl2", "--left", h1,
                          "--right", (u ** 3).to_json())
    assert status == 0 and "dz" in out


def test_verify():
    status, out, _ = call("verify", "--algebra", "sl2")
    assert status == 0
    assert all(line.startswith("PASS") for line in out.strip().splitlines())


def test_deterministic_output():
    first = call("flows", "--algebra", "sl3", "--flow", "4", "--format", "json")[1]
    second = call("flows", "--algebra", "sl3", "--flow", "4", "--format", "json")[1]
    assert first == second


def test_cutoff_env(monkeypatch):
    monkeypatch.setenv("SOLITON_CUTOFF", "3")
    status, out, _ = call("flows", "--algebra", "sl2", "--flow", "3")
    assert status == 0 and "3/8" in out
    monkeypatch.setenv("SOLITON_CUTOFF", "x")
    assert call("flows", "--algebra", "sl2", "--flow", "3")[0] == 2


@pytest.mark.parametrize("args", [["-m", "soliton", "table", "--algebra", "G2"]])
def test_module_entry_point(args):
    proc = subprocess.run([sys.executable, *args], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "G2: h=6" in proc.stdout
