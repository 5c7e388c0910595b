import io
import json
import subprocess
import sys

import pytest

from symcone.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_lattice_xtilde():
    code, out, _ = call("lattice", "xtilde-g1")
    assert code == 0
    assert json.loads(out)["lattice"]["gram"] == [["1/2", "1/2", "0"], ["1/2", "0", "0"], ["0", "0", "-1/2"]]


def test_pair_sym2():
    assert call("pair", "sym2", "--genus", "1", "delta+", "delta-") == (0, "4\n", "")
    assert call("pair", "xtilde-g1", "E", "E")[1] == "-1/2\n"
    assert call("pair", "xtilde-g1", "Gamma6", "D2")[1] == "1/2\n"
    assert call("pair", "z", "R7", "delta-")[1] == "15\n"


def test_cone_m6():
    code, out, _ = call("cone", "--m", "6")
    assert code == 0
    data = json.loads(out)
    assert [g["label"] for g in data["cone"]["generators"]] == ["-K", "delta-", "D0", "D1", "D2", "Gamma6"]
    assert all(f["nsd"] for f in data["certificate"]["facets"])
    assert data["certificate"]["verdict"] == "contains_light_cone"


def test_cone_infinity():
    code, out, _ = call("cone", "--m", "infinity", "--N", "20")
    assert code == 0
    assert json.loads(out)["certificate"]["polyhedral"] == "non-polyhedral (certified ladder to 20)"


def test_dn():
    data = json.loads(call("dn", "--n", "3")[1])
    assert data["D_n^2"] == "-1/2" and data["R_n^2"] == "-1" and data["R_n.delta-"] == "7"


def test_zgraph():
    code, out, _ = call("zgraph")
    assert code == 0 and out.startswith("graph Z {")
    data = json.loads(call("zgraph", "--format", "json")[1])
    assert len(data["gram"]) == 10


def test_wps():
    code, out, _ = call("wps", "--verify-curves")
    assert code == 0
    assert all(json.loads(out)["curve_checks"].values())
    code, out, _ = call("wps", "--genus", "2", "--params", "0,1,-1,2,1/2,infinity")
    assert code == 0 and len(json.loads(out)["singular_points"]) == 15


def test_plane():
    code, out, _ = call("plane", "--n", "1", "--kernel")
    data = json.loads(out)
    assert code == 0
    assert (data["rows"], data["cols"], data["rank"], data["corank"]) == (14, 15, 14, 1)
    assert data["multiplicities"] == [1, 1, 1, 1, 2, 2, 2, 1, 0]
    assert len(data["kernel"]) == 1
    code, out, _ = call("plane", "--n", "1", "--t-values", "1/2,-3,5/7,4,-2/3")
    assert code == 0 and json.loads(out)["corank"] == 1


@pytest.mark.parametrize("argv", [
    ["nope"],
    [],
    ["cone"],
    ["cone", "--m", "1"],
    ["cone", "--m", "6", "--bogus"],
    ["pair", "z", "E", "nonsense"],
    ["wps", "--params", "0,0.5,1,2"],
    ["wps", "--params", "0,1,1,2"],
    ["plane", "--n", "0"],
    ["plane", "--n", "1", "--t-values", "0,1,2"],
    ["lattice", "xtilde-span", "--genus", "1"],
    ["verify", "--perturb-z", "3", "3"],
])
def test_usage_errors(argv, capsys):
    code, out, _ = call(*argv)
    assert code == 2
    assert out == ""


def test_no_floats_in_output():
    for argv in (["lattice", "z"], ["cone", "--m", "7"], ["dn", "--n", "5"], ["wps"]):
        out = call(*argv)[1]
        assert "e-" not in out and ".0" not in out


def test_deterministic():
    for argv in (["cone", "--m", "9"], ["wps", "--genus", "1"], ["lattice", "x", "--genus", "4"]):
        assert call(*argv) == call(*argv)


def test_verify_perturbed_exits_1():
    code, out, _ = call("verify", "--json", "--perturb-z", "0", "1")
    assert code == 1
    data = json.loads(out)
    assert data["passed"] is False
    failing = {c["criterion"] for c in data["criteria"] if not c["passed"]}
    assert 2 in failing


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symcone", "pair", "x", "--genus", "3", "C+", "C-"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "8\n"
