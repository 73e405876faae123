import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

import gen
import oracles
from threelie import catalog, io
from threelie.cli import main
from threelie.cohomology import Bivector
from threelie.deform import DeformationFamily, EquivalencePair
from threelie.errors import ParseError, ShapeMismatch, UnresolvedReference
from threelie.exactla import Mat
from threelie.induce import TraceMap
from threelie.nslie import NSLieAlgebra, from_nijenhuis_ns
from threelie.twistop import nijenhuis_package

FIX = Path(__file__).parent / "fixtures"
A4_FILES = [str(FIX / "a4_adjoint.json"), str(FIX / "a4_opbad.json")]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def add_op(ws, prefix, op):
    ws.add(f"{prefix}_alg", "3lie", op.g)
    ws.add(f"{prefix}_rep", "rep3", op.rho, {"algebra": f"{prefix}_alg"})
    ws.add(f"{prefix}_cocycle", "cocycle3", op.theta, {"algebra": f"{prefix}_alg", "rep": f"{prefix}_rep"})
    ws.add(prefix, "twisted_op", op, {"algebra": f"{prefix}_alg", "rep": f"{prefix}_rep", "cocycle": f"{prefix}_cocycle"})


def full_workspace():
    """One object of every kind."""
    ws = io.Workspace()
    op = nijenhuis_package(catalog.a3(), catalog.nijenhuis_matrix(2, 3, 5)).op
    add_op(ws, "op", op)
    ws.add("N", "linmap", catalog.nijenhuis_matrix(2, 3, 5))
    bop = gen.l3_binary_fixture()
    ws.add("L3", "lie", bop.g)
    ws.add("adL3", "rep_lie", bop.rho, {"algebra": "L3"})
    ws.add("zeroL3", "cocycle_lie", bop.theta, {"algebra": "L3", "rep": "adL3"})
    ws.add("P", "twisted_op_lie", bop, {"algebra": "L3", "rep": "adL3", "cocycle": "zeroL3"})
    ws.add("tau", "trace", TraceMap((0, 0, 1)), {"algebra": "L3"})
    ws.add("ns3", "3ns", from_nijenhuis_ns(catalog.a3(), catalog.nijenhuis_matrix(2, 3, 5)))
    ws.add("ns2", "ns", NSLieAlgebra(2, {(1, 0): (0, 1)}, {(0, 1): ("1/2", 0)}))
    ws.add("fam", "deformation_family", DeformationFamily(op, (Mat.identity(3), Mat.zeros(3, 3))), {"operator": "op"})
    pair = EquivalencePair(Bivector(3, {(0, 2): "-3/4"}), (Mat.identity(3),), ())
    ws.add("pair", "equivalence_pair", pair, {"operator": "op"})
    return ws


def test_round_trip_every_kind():
    ws = full_workspace()
    assert set(e.kind for e in ws.entries.values()) == set(io.KINDS)
    again = io.loads(ws.dumps())
    assert again.semantically_equal(ws)
    assert again.dumps() == ws.dumps()


@pytest.mark.parametrize("name", ["a3.json", "l3_binary.json"])
def test_round_trip_fixture_files(name):
    ws = io.parse_workspace([FIX / name])
    assert io.loads(ws.dumps()).semantically_equal(ws)


def test_order_independent_and_multi_file():
    ws = io.parse_workspace(A4_FILES)
    assert ws.names() == ["A4", "adA4", "zeroA4", "OPbad"]
    assert ws.get("A4") == catalog.a4()


def test_empty_inputs():
    assert len(io.parse_workspace([])) == 0
    assert len(io.loads('{"format_version": 1, "objects": []}')) == 0


def test_parse_errors():
    with pytest.raises(ParseError):
        io.parse_workspace([FIX / "malformed_args.json"])
    with pytest.raises(UnresolvedReference):
        io.parse_workspace([FIX / "unresolved.json"])
    with pytest.raises(ShapeMismatch):
        io.parse_workspace([FIX / "shape.json"])
    with pytest.raises(ParseError, match="line 1"):
        io.loads('{"format_version": 1, "objects": [}')
    with pytest.raises(ParseError):
        io.loads('{"format_version": 2, "objects": []}')
    dup = '{"format_version": 1, "objects": [{"kind": "3lie", "name": "A", "dim": 1}, {"kind": "3lie", "name": "A", "dim": 1}]}'
    with pytest.raises(ParseError):
        io.loads(dup)
    flt = '{"format_version": 1, "objects": [{"kind": "linmap", "name": "M", "rows": 1, "cols": 1, "matrix": [[0.5]]}]}'
    with pytest.raises(ParseError):
        io.loads(flt)


def test_rationals_accepted():
    ws = io.loads('{"format_version": 1, "objects": [{"kind": "linmap", "name": "M", "rows": 1, "cols": 2, "matrix": [["-3/6", 2]]}]}')
    assert ws.get("M").row(0) == (Mat.from_rows([["-1/2", 2]]).row(0))


def test_cli_pass_and_fail(capsys):
    code, out, _ = run(["verify", "3lie", "A3", "-f", str(FIX / "a3.json")], capsys)
    assert code == 0 and "PASS" in out
    code, out, err = run(["verify", "twisted", "OPbad", "--json", *sum((["-f", f] for f in A4_FILES), [])], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["outcome"] == "fail"
    assert rep["details"][0] == {"identity": "twisted", "indices": [0, 1, 2], "residual": ["0", "0", "0", "-2"]}
    assert "FAIL" in err


def test_cli_exit_codes(capsys):
    assert run(["verify", "3lie", "B", "-f", str(FIX / "malformed_args.json")], capsys)[0] == 2
    assert run(["verify", "rep3", "rho", "-f", str(FIX / "unresolved.json")], capsys)[0] == 3
    assert run(["verify", "3lie", "missing"], capsys)[0] == 3
    assert run(["verify", "3lie", "M", "-f", str(FIX / "shape.json")], capsys)[0] == 4
    assert run(["verify", "bogus", "A3"], capsys)[0] == 2
    assert run(["verify", "3lie", "N", "-f", str(FIX / "a3.json")], capsys)[0] == 2
    # a map that is not Nijenhuis is a domain failure, not an input error
    code, _, _ = run(["verify", "nijenhuis", "N", "--algebra", "A3", "-f", str(FIX / "a3.json")], capsys)
    assert code == 0


def test_cli_nijenhuis_construction_and_cohomology(tmp_path, capsys):
    out_file = tmp_path / "pkg.json"
    code, _, _ = run(["construct", "nijenhuis", "--algebra", "A3", "--map", "N", "-f", str(FIX / "a3.json"), "--out", str(out_file)], capsys)
    assert code == 0
    ws = io.parse_workspace([out_file])
    op = ws.get("A3_N_op")
    assert op == nijenhuis_package(catalog.a3(), catalog.nijenhuis_matrix(2, 3, 5)).op
    for n in range(3):
        code, out, _ = run(["cohomology", "--op", "A3_N_op", "--degree", str(n), "--json", "-f", str(out_file)], capsys)
        assert code == 0
        rep = json.loads(out)["extra"]
        assert (rep["dim_Z"], rep["dim_B"], rep["dim_H"]) == oracles.brute_force_cohomology(op, n)


def test_cli_cohomology_cap(tmp_path, capsys):
    out_file = tmp_path / "pkg.json"
    run(["construct", "nijenhuis", "--algebra", "A3", "--map", "N", "-f", str(FIX / "a3.json"), "--out", str(out_file)], capsys)
    assert run(["cohomology", "--op", "A3_N_op", "--degree", "1", "--cap", "3", "-f", str(out_file)], capsys)[0] == 1


def test_cli_binary_and_diagram(capsys):
    f = ["-f", str(FIX / "l3_binary.json")]
    assert run(["verify", "twisted_lie", "P", *f], capsys)[0] == 0
    assert run(["verify", "trace", "tau", *f], capsys)[0] == 0
    assert run(["verify", "trace", "tau_bad", *f], capsys)[0] == 1
    code, out, _ = run(["induce", "--what", "diagram", "--op", "P", "--trace", "tau", "--json", *f], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["extra"]["route1"]["curly"] == rep["extra"]["route2"]["curly"] != []
    code, _, _ = run(["induce", "--what", "3lie", "--trace", "tau_bad", *f], capsys)
    assert code == 1


def test_cli_induce_out_round_trip(tmp_path, capsys):
    out_file = tmp_path / "ind.json"
    f = ["-f", str(FIX / "l3_binary.json")]
    assert run(["construct", "induce", "--what", "twisted", "--op", "P", "--trace", "tau", "--out", str(out_file), *f], capsys)[0] == 0
    assert run(["verify", "twisted", "P_3", "-f", str(out_file)], capsys)[0] == 0
    ws = io.parse_workspace([out_file])
    assert ws.get("P_3_alg") == catalog.a3()


def test_cli_deformation_commands(tmp_path, capsys):
    name, op, X = gen.equivalence_instances()[1]
    T1, T1p = gen.equivalent_pair(op, X, random.Random(0))
    ws = io.Workspace()
    add_op(ws, "op", op)
    ws.add("fam", "deformation_family", DeformationFamily(op, (T1,)), {"operator": "op"})
    ws.add("fam2", "deformation_family", DeformationFamily(op, (T1p,)), {"operator": "op"})
    ws.add("pair", "equivalence_pair", EquivalencePair(X), {"operator": "op"})
    ws.add("pair0", "equivalence_pair", EquivalencePair(Bivector(3, {})), {"operator": "op"})
    path = tmp_path / "def.json"
    path.write_text(ws.dumps())
    f = ["-f", str(path)]
    equiv = ["deform", "equiv", "--family", "fam", "--family2", "fam2"]
    assert run([*equiv, "--pair", "pair", "--infinitesimal", *f], capsys)[0] == 0
    assert run([*equiv, "--pair", "pair", *f], capsys)[0] == 0
    assert run([*equiv, "--pair", "pair0", *f], capsys)[0] == 1
    assert run([*equiv, "--pair", "pair0", "--truncation", "0", *f], capsys)[0] == 0
    code, out, _ = run(["deform", "check", "--family", "fam", "--printed", "--json", *f], capsys)
    assert "printed_conditions" in json.loads(out)["extra"]


def test_cli_gauge_and_derive(tmp_path, capsys):
    out_file = tmp_path / "pkg.json"
    run(["construct", "nijenhuis", "--algebra", "A3", "--map", "N", "-f", str(FIX / "a3.json"), "--out", str(out_file)], capsys)
    f = ["-f", str(out_file)]
    code, out, _ = run(["derive-ns", "--op", "A3_N_op", "--json", *f], capsys)
    assert code == 0
    sub = json.loads(out)["extra"]["subadjacent"]["brackets"]
    assert sub == [{"args": [0, 1, 2], "value": ["0", "6", "0"]}]
    assert run(["derive-ns", "--op", "A3_N_op", "--mode", "compatible", *f], capsys)[0] == 0
    # theta1 of the wrong shape
    assert run(["construct", "gauge", "--op", "A3_N_op", "--theta1", "A3_N_op", *f], capsys)[0] == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "threelie", "verify", "3lie", "A4"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0
    assert "PASS" in res.stdout
