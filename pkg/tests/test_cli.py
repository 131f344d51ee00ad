"""End-to-end tests of the command-line front end."""

import json

import pytest

from courantkit.cli import main
from courantkit.fileio import load_spec, save_spec


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def so3_file(tmp_path, so3):
    path = tmp_path / "so3.json"
    save_spec(so3, str(path))
    return str(path)


@pytest.fixture()
def std2_file(tmp_path, std2):
    path = tmp_path / "std2.json"
    save_spec(std2, str(path))
    return str(path)


@pytest.fixture()
def ctwist_file(tmp_path, ctwist4):
    path = tmp_path / "ct4.json"
    save_spec(ctwist4, str(path))
    return str(path)


class TestVerify:
    def test_pass_exit_zero(self, capsys, so3_file):
        code, out, _ = run(capsys, "verify", so3_file, "--suite", "courant")
        doc = json.loads(out)
        assert code == 0 and doc["passed"] and doc["schema"] == 1

    def test_axiom_failure_exit_one(self, capsys, ctwist_file):
        code, out, _ = run(capsys, "verify", ctwist_file, "--suite", "courant")
        doc = json.loads(out)
        failing = [c["axiom"] for c in doc["checks"] if c["status"] == "fail"]
        assert code == 1 and failing == ["jacobi"]
        jac = next(c for c in doc["checks"] if c["axiom"] == "jacobi")
        assert jac["witness"]["defect"]

    def test_parse_error_exit_two(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{]")
        code, out, err = run(capsys, "verify", str(path), "--suite", "courant")
        assert code == 2 and "error" in err

    def test_invariant_error_exit_two(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "ring": {"type": "polynomial", "vars": 1}, "rank": 1,
            "gram": [["x1"]], "bracket": {}, "kind": "courant"}))
        code, out, err = run(capsys, "verify", str(path), "--suite", "courant")
        assert code == 2 and "determinant" in err

    def test_determinism(self, capsys, ctwist_file):
        _, out1, _ = run(capsys, "verify", ctwist_file, "--suite", "courant",
                         "--seed", "11")
        _, out2, _ = run(capsys, "verify", ctwist_file, "--suite", "courant",
                         "--seed", "11")
        assert out1 == out2

    def test_text_mode(self, capsys, so3_file):
        code, out, _ = run(capsys, "--text", "verify", so3_file,
                           "--suite", "courant")
        assert code == 0 and "passed: True" in out


class TestMake:
    def test_standard_round_trips(self, capsys, tmp_path, std2):
        out_path = tmp_path / "made.json"
        code, _, _ = run(capsys, "make", "standard", "--n", "2",
                         "-o", str(out_path))
        assert code == 0
        assert load_spec(str(out_path)) == std2

    def test_ctwist_then_verify(self, capsys, tmp_path, ctwist4):
        out_path = tmp_path / "ct.json"
        code, _, _ = run(capsys, "make", "ctwist", "--n", "4",
                         "--c", "x1*dx2^dx3^dx4", "-o", str(out_path))
        assert code == 0
        assert load_spec(str(out_path)) == ctwist4
        code, out, _ = run(capsys, "verify", str(out_path),
                           "--suite", "h-twisted")
        assert code == 0

    def test_twist_point_file(self, capsys, tmp_path, split4):
        base = tmp_path / "split4.json"
        save_spec(split4, str(base))
        out_path = tmp_path / "tw.json"
        code, _, _ = run(capsys, "make", "twist", "--base", str(base),
                         "--b", "e1^e2^e3", "-o", str(out_path))
        assert code == 0
        spec = load_spec(str(out_path))
        assert spec.table_bracket(0, 1).coeffs[2] == spec.gram.entries[0][0]
        code, _, _ = run(capsys, "verify", str(out_path), "--suite", "h-twisted")
        assert code == 0

    def test_make_to_stdout(self, capsys):
        code, out, _ = run(capsys, "make", "standard", "--n", "1")
        assert code == 0 and json.loads(out)["rank"] == 2


class TestCohomology:
    def test_so3(self, capsys, so3_file):
        code, out, _ = run(capsys, "cohomology", so3_file, "--max-degree", "3")
        doc = json.loads(out)
        assert code == 0
        assert doc["betti"] == [1, 0, 0, 1]
        assert doc["d_squared_zero"] is True

    def test_polynomial_needs_truncation(self, capsys, std2_file):
        code, out, err = run(capsys, "cohomology", std2_file,
                             "--max-degree", "2")
        assert code == 2 and "truncation" in err

    def test_polynomial_truncated(self, capsys, std2_file):
        code, out, _ = run(capsys, "cohomology", std2_file, "--max-degree", "2",
                           "--truncate", "1")
        doc = json.loads(out)
        assert code == 0 and doc["betti"] is None


class TestDirac:
    def test_subspace_inline_pass(self, capsys, std2_file):
        code, out, _ = run(capsys, "dirac", std2_file,
                           "--subspace", "e1 + x1*dx2; e2 - x1*dx1")
        doc = json.loads(out)
        assert code == 0
        assert doc["report"]["passed"] and doc["induced"]["kind"] == "h-twisted-lie"

    def test_subspace_failure_exit_one(self, capsys, tmp_path):
        code, _, _ = run(capsys, "make", "standard", "--n", "3",
                         "-o", str(tmp_path / "s3.json"))
        code, out, _ = run(capsys, "dirac", str(tmp_path / "s3.json"),
                           "--subspace", "e1 + x3*dx2; e2 - x3*dx1; e3")
        doc = json.loads(out)
        assert code == 1
        checks = {c["axiom"]: c["status"] for c in doc["report"]["checks"]}
        assert checks["integrable"] == "fail"

    def test_search(self, capsys, std2_file):
        code, out, _ = run(capsys, "dirac", std2_file, "--search")
        doc = json.loads(out)
        assert code == 0 and len(doc["search"]) == 4

    def test_subspace_file(self, capsys, tmp_path, std2_file):
        sub = tmp_path / "sub.json"
        sub.write_text(json.dumps({"generators": ["dx1", "dx2"]}))
        code, out, _ = run(capsys, "dirac", std2_file, "--subspace", str(sub))
        assert code == 0 and json.loads(out)["report"]["passed"]


class TestLinfty:
    def test_twisted_default(self, capsys, ctwist_file):
        code, out, _ = run(capsys, "linfty", ctwist_file)
        doc = json.loads(out)
        assert code == 0 and doc["packaging"] == "twisted" and doc["passed"]

    def test_classical_on_untwisted(self, capsys, std2_file):
        code, out, _ = run(capsys, "linfty", std2_file)
        doc = json.loads(out)
        assert code == 0 and doc["packaging"] == "classical" and doc["passed"]

    def test_force_classical_rejects_twisted(self, capsys, ctwist_file):
        code, out, err = run(capsys, "linfty", ctwist_file, "--classical")
        assert code == 2 and "untwisted" in err
