import json

import numpy as np
import pytest

from fusionkit import classify, is_complete, is_exact, is_f_basis, is_minimal, riesz_analyze
from fusionkit import generators as gen
from fusionkit.cli import main, run_command
from fusionkit.core import operator_norm, projector
from fusionkit.errors import MalformedFile, NonpositiveWeight
from fusionkit.io import parse_operator, parse_system, serialize_operator, serialize_system
from fusionkit.report import analyze

from conftest import lines


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def doc(subspaces, n, field="real"):
    return json.dumps({"schema_version": 1, "field": field, "ambient_dim": n, "subspaces": subspaces})


@pytest.mark.parametrize("sys", [gen.example_2_2(3), gen.random_riesz(4, [1, 3], seed=3), gen.example_3_2i(2)])
def test_round_trip(sys):
    back = parse_system(serialize_system(sys))
    assert back.dims == sys.dims and back.weights == sys.weights
    for s, t in zip(sys.subspaces, back.subspaces):
        assert operator_norm(projector(s) - projector(t)) <= 1e-12


def test_serialize_picks_field():
    assert json.loads(serialize_system(gen.example_2_3(1)))["field"] == "real"
    assert json.loads(serialize_system(gen.random_orthonormal(2, [1, 1])))["field"] == "complex"


def test_non_orthonormal_input_is_orthonormalized():
    sys = parse_system(doc([{"weight": 1, "basis": [[2, 0, 0], [1, 1, 0]]}], 3))
    assert sys.dims == (2,)
    np.testing.assert_allclose(projector(sys.subspaces[0]), np.diag([1, 1, 0]), atol=1e-14)


def test_complex_scalars():
    sys = parse_system(doc([{"weight": 1, "basis": [[[0, 1], [0, 0]]]}], 2, field="complex"))
    assert sys.subspaces[0].basis[0, 0] == pytest.approx(1j)


@pytest.mark.parametrize("text, locus", [
    ("{", "line 1"),
    (json.dumps({"schema_version": 2}), "schema_version"),
    (doc([{"weight": 1, "basis": [[1, 0]]}], 3), "subspaces[0].basis[0]"),
    (doc([{"basis": [[1, 0]]}], 2), "subspaces[0]"),
    (doc([{"weight": 1, "basis": [[1, "x"]]}], 2), "subspaces[0].basis[0][1]"),
    (doc([], 2), "subspaces"),
])
def test_malformed_loci(text, locus):
    with pytest.raises(MalformedFile) as info:
        parse_system(text)
    assert locus in str(info.value)


def test_zero_weight_rejected():
    with pytest.raises(NonpositiveWeight):
        parse_system(doc([{"weight": 0, "basis": [[1, 0]]}], 2))


def test_operator_round_trip():
    a = np.array([[1.0, 2.0], [0.0, 1j]])
    np.testing.assert_allclose(parse_operator(serialize_operator(a)), a)
    with pytest.raises(MalformedFile):
        parse_operator(json.dumps({"schema_version": 1, "field": "real", "matrix": [[1, 2]]}))


def test_analyze_report_fields():
    rep = analyze(gen.exact_not_riesz())
    assert rep["flags"]["exact"] is True and rep["flags"]["f_basis"] is False
    assert rep["constants"]["A"]["value"] is None and "note" in rep["constants"]["A"]
    assert rep["constants"]["C"]["value"] == pytest.approx(1.0)
    assert rep["constants"]["D"]["value"] == pytest.approx(2.0)


def test_analyze_f_basis_report():
    rep = analyze(gen.example_2_2(3))
    assert rep["flags"]["f_basis"] and rep["flags"]["riesz"]
    assert rep["constants"]["A"]["value"] == pytest.approx(0.5)
    assert rep["constants"]["B"]["value"] == pytest.approx(2.0)
    assert rep["residuals"]["f_dual"]["sum_identity"] <= 1e-12


@pytest.fixture
def files(tmp_path):
    return {
        "enr": write(tmp_path, "enr.json", serialize_system(gen.exact_not_riesz())),
        "ex22": write(tmp_path, "ex22.json", serialize_system(gen.example_2_2(3))),
        "lines": write(tmp_path, "lines.json", serialize_system(lines([1, 0], [0, 1]))),
        "bad": write(tmp_path, "bad.json", "{not json"),
        "op": write(tmp_path, "op.json", serialize_operator(np.array([[2.0, 0, 0], [0, 1, 0], [1, 0, 1]]))),
        "tmp": tmp_path,
    }


@pytest.mark.parametrize("prop, key, code", [
    ("riesz", "enr", 1),
    ("exact", "enr", 0),
    ("f-basis", "ex22", 0),
    ("complete", "ex22", 0),
    ("minimal", "enr", 1),
    ("orthonormal", "lines", 0),
    ("orthonormal-basis", "lines", 0),
    ("frame", "enr", 0),
])
def test_cli_check(files, prop, key, code):
    got, out = run_command(["check", prop, files[key]])
    assert got == code
    assert out.decode().startswith(prop)


def test_cli_exit_codes(files):
    assert run_command(["check", "riesz", files["bad"]])[0] == 3
    assert run_command(["check", "riesz", str(files["tmp"] / "missing.json")])[0] == 2
    assert run_command(["nonsense"])[0] == 2
    assert run_command(["dual", files["enr"]])[0] == 1
    assert run_command(["generate", "no_such_kind"])[0] == 2


def test_cli_analyze_json_deterministic(files):
    a = run_command(["analyze", files["ex22"], "--json"])
    b = run_command(["analyze", files["ex22"], "--json"])
    assert a == b and a[0] == 0
    rep = json.loads(a[1])
    assert rep["flags"]["f_basis"] is True


def test_cli_analyze_text(files):
    code, out = run_command(["analyze", files["enr"]])
    assert code == 0 and b"exact" in out


def test_cli_perturb_theta(files):
    code, out = run_command(["perturb", files["lines"], "--theta", "0.1"])
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["lambda_global"] == pytest.approx(0.0998, abs=1e-4)
    assert rep["verdict"] is True


def test_cli_perturb_usage(files):
    assert run_command(["perturb", files["lines"]])[0] == 2
    assert run_command(["perturb", files["lines"], files["lines"], "--theta", "0.1"])[0] == 2
    code, out = run_command(["perturb", files["lines"], files["lines"], "--subsetwise"])
    assert code == 0 and json.loads(out)["report"]["method"] == "subset_exhaustive"


def test_cli_dual_and_transform(files):
    code, out = run_command(["dual", files["ex22"]])
    assert code == 0 and parse_system(out).dims == (1, 1, 1)
    code, out = run_command(["transform", files["ex22"], "--operator", files["op"]])
    assert code == 0 and parse_system(out).ambient_dim == 3


@pytest.mark.parametrize("argv", [
    ["generate", "example_2_2", "4"],
    ["generate", "random_riesz", "n=5", "dims=2,3", "cond=3", "--seed", "7"],
    ["generate", "random_system", "4", "1,2"],
])
def test_cli_generate_deterministic(argv):
    a, b = run_command(argv), run_command(argv)
    assert a == b and a[0] == 0
    meta = json.loads(a[1])["metadata"]
    assert meta["rng"] == "numpy.random.PCG64" and meta["generator"] == argv[1]


def test_cli_generate_bad_params():
    assert run_command(["generate", "random_riesz", "n=5", "dims=2,2"])[0] == 2
    assert run_command(["generate", "example_2_2", "x"])[0] == 2


def test_cli_generate_rotate(files):
    code, out = run_command(["generate", "rotate", files["lines"], "0.2", "--mode", "independent"])
    assert code == 0 and parse_system(out).dims == (1, 1)


def test_main_writes_stdout(files, capsysbinary):
    assert main(["check", "f-basis", files["ex22"]]) == 0
    assert capsysbinary.readouterr().out == b"f-basis: true\n"


def test_cli_analyze_orthonormal_fixture(tmp_path):
    path = write(tmp_path, "ex23.json", serialize_system(gen.example_2_3(2)))
    code, out = run_command(["analyze", path, "--json"])
    rep = json.loads(out)
    assert code == 0
    for flag in ("complete", "minimal", "exact", "f_basis", "orthonormal_basis", "riesz"):
        assert rep["flags"][flag] is True
    for key in "CDABM":
        assert rep["constants"][key]["value"] == pytest.approx(1.0, abs=1e-12)
    assert rep["constants"]["lambda"]["value"] is None


@pytest.mark.parametrize("seed", range(6))
def test_report_flags_match_predicates(seed):
    sys = gen.random_system(4, [1, 2, 1, 2][: 2 + seed % 3], seed=seed)
    rep = analyze(sys)
    flags = rep["flags"]
    assert flags["complete"] == is_complete(sys)
    assert flags["minimal"] == is_minimal(sys).minimal
    assert flags["f_basis"] == is_f_basis(sys).verdict == flags["riesz"] == riesz_analyze(sys).is_riesz
    assert flags["frame"] == classify(sys).frame
    if flags["frame"]:
        assert flags["exact"] == is_exact(sys)
    else:
        assert flags["exact"] is None
