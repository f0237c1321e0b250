import json

import pytest

from pgo import cli
from pgo.catalog import GradedDescriptor


def _run(capsys, *args):
    code = cli.run(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_fixture(capsys, fixture_dir):
    code, out, _ = _run(capsys, "classify", "--diagram", str(fixture_dir / "table1_row6.json"))
    assert code == 0
    data = json.loads(out)
    assert data["descriptor"]["case_id"] == "6" and data["dim_vplus"] == 10
    assert GradedDescriptor.from_json(data["descriptor"]).to_json() == data["descriptor"]


def test_qform_classify_anisotropic_quaternary(capsys):
    code, out, _ = _run(capsys, "qform", "classify", "--coeffs", "1,-u,-pi,upi")
    data = json.loads(out)
    assert code == 0 and data["isotropic"] is False and data["witt_index"] == 0


def test_qform_table_output(capsys):
    code, out, _ = _run(capsys, "qform", "classify", "--coeffs", "1,1,1,1,1", "--table")
    assert code == 0 and any(line.startswith("witt_index") and line.split()[-1] == "2"
                             for line in out.splitlines())


def test_prime_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PGO_PRIME", "13")
    code, out, _ = _run(capsys, "qform", "classify", "--coeffs", "1,u")
    assert code == 0 and json.loads(out)["prime"] == 13


def test_even_prime_is_a_domain_error(capsys):
    code, _, err = _run(capsys, "qform", "classify", "--coeffs", "1", "--prime", "2")
    assert code == 1 and "error" in err


def test_orbit_classify_and_enumerate(capsys, fixture_dir):
    code, out, _ = _run(capsys, "orbit", "classify", "--matrix", str(fixture_dir / "matrix_sp3.json"))
    assert code == 0 and json.loads(out)["invariant"]["rank"] == 3
    code, out, _ = _run(capsys, "orbit", "enumerate", "--tag", "sp", "--n", "2")
    assert code == 0 and json.loads(out)["nonzero_classes"] == 5
    code, out, _ = _run(capsys, "orbit", "enumerate", "--tag", "type3", "--n", "1")
    assert code == 0 and json.loads(out)["nonzero_classes"] == 7


def test_invariants_commands(capsys, fixture_dir):
    path = str(fixture_dir / "matrix_type3_k1.json")
    code, out, _ = _run(capsys, "invariants", "eval", "--matrix", path)
    assert code == 0 and set(json.loads(out)["values"]) == {"Delta_0", "Delta_1"}
    code, out, _ = _run(capsys, "invariants", "psi-check", "--matrix", str(fixture_dir / "matrix_sp3.json"))
    assert code == 0 and json.loads(out)["ok"] is True


def test_psi_check_on_singular_matrix_fails(capsys, tmp_path):
    path = tmp_path / "singular.json"
    path.write_text(json.dumps({"tag": "sp", "entries": [["1", "0"], ["0", "0"]]}))
    code, _, err = _run(capsys, "invariants", "psi-check", "--matrix", str(path))
    assert code == 1 and "error" in err


def test_enumerate_lists_p_orbits(capsys):
    code, out, _ = _run(capsys, "enumerate", "--tag", "unitary", "--n", "2")
    data = json.loads(out)
    assert code == 0 and len(data["orbits"]) == 3 and len(data["p_orbit_classes"]) == 2


@pytest.mark.parametrize("args", [["enumerate", "--tag", "sp"], ["orbit", "enumerate", "--tag", "so", "--n", "2"],
                                  ["nosuch"], ["selftest", "--only", "99"]])
def test_usage_errors(capsys, args):
    assert _run(capsys, *args)[0] == 2


def test_bad_json_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert _run(capsys, "classify", "--diagram", str(bad))[0] == 1


def test_selftest_single_criterion(capsys):
    code, out, _ = _run(capsys, "selftest", "--only", "2")
    assert code == 0 and out.startswith("criterion  2 PASS")
