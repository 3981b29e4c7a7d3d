import json

from skewgin.cli import main

from docs import (MCKAY, MINIMAL, NEGATION_NONINVARIANT,
                  THREE_LOOPS_COMMUTATOR, TRIVIAL_GROUP_PIPELINE, doc)


def run_cli(capsys, tmp_path, document_text, *argv_tail, name="doc.json"):
    path = tmp_path / name
    path.write_text(document_text, encoding="utf-8")
    code = main([argv_tail[0], str(path), *argv_tail[1:]])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate_minimal(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(MINIMAL), "validate")
    assert code == 0
    assert report["ok"] is True
    assert report["version"]


def test_validate_bad_field_exit_2(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(MINIMAL, field={"p": 6}), "validate")
    assert code == 2
    assert report["ok"] is False
    assert report["errors"][0]["location"] == "/field"


def test_validate_unknown_arrow_exit_2(capsys, tmp_path):
    bad = doc(THREE_LOOPS_COMMUTATOR,
              potential=[{"coeff": "1", "cycle": ["q"]}])
    code, report = run_cli(capsys, tmp_path, bad, "validate")
    assert code == 2
    assert any(e["location"] == "/potential/0/cycle/0" for e in report["errors"])


def test_ginzburg_check_passes(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(THREE_LOOPS_COMMUTATOR),
                           "ginzburg", "--check")
    assert code == 0
    names = {g["name"] for g in report["generators"]}
    assert names == {"x", "y", "z", "x*", "y*", "z*", "c_1"}
    degs = {g["name"]: g["deg"] for g in report["generators"]}
    assert degs["x*"] == -1 and degs["c_1"] == -2


def test_ginzburg_corrupted_differential_exit_1(capsys, tmp_path):
    bad = doc(THREE_LOOPS_COMMUTATOR,
              differential_override={"x*": [{"coeff": "1", "path": ["y", "z"]}]})
    code, report = run_cli(capsys, tmp_path, bad, "ginzburg", "--check")
    assert code == 1
    square = next(c for c in report["checks"]
                  if c["check"].startswith("differential squares"))
    assert square["ok"] is False
    assert any(v["generator"] == "c_1" for v in square["violations"])


def test_ginzburg_determinism(capsys, tmp_path):
    text = doc(MCKAY)
    code1, r1 = run_cli(capsys, tmp_path, text, "ginzburg", "--check", name="a.json")
    code2, r2 = run_cli(capsys, tmp_path, text, "ginzburg", "--check", name="b.json")
    assert code1 == code2 == 0
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_invariance_pass(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(MCKAY), "invariance")
    assert code == 0


def test_invariance_failure_exit_1(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(NEGATION_NONINVARIANT), "invariance")
    assert code == 1
    check = next(c for c in report["checks"] if "fixed" in c["check"])
    assert check["ok"] is False
    assert any(not e["invariant"] and e["g"] == "g" for e in check["elements"])


def test_reduce_trivial_group(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(TRIVIAL_GROUP_PIPELINE), "reduce")
    assert code == 0
    rq = report["reduced_quiver"]
    assert len(rq["vertices"]) == 1
    assert len(rq["arrows"]) == 3
    assert report["choices"]["orbit_representatives"] == ["1"]


def test_reduce_mckay(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(MCKAY), "reduce")
    assert code == 0
    rq = report["reduced_quiver"]
    assert len(rq["vertices"]) == 3
    assert len(rq["arrows"]) == 9


def test_transport_mckay(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(MCKAY), "transport")
    assert code == 0
    assert len(report["reduced_potential"]) == 6


def test_verify_mckay(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(MCKAY), "verify", "--max-len", "3")
    assert code == 0
    table = next(c for c in report["checks"] if "corner dimensions" in c["check"])
    assert [row["corner"] for row in table["table"]] == [3, 9, 18, 30]


def test_verify_perturbed_reduced_potential_exit_1(capsys, tmp_path):
    base_code, base_report = run_cli(capsys, tmp_path, doc(MCKAY), "transport")
    assert base_code == 0
    terms = base_report["reduced_potential"]
    # corrupt one coefficient
    terms[0] = dict(terms[0])
    terms[0]["coeff"] = "3" if terms[0]["coeff"] != "3" else "5"
    bad = doc(MCKAY, reduced_potential=terms)
    code, report = run_cli(capsys, tmp_path, bad, "verify", "--max-len", "2")
    assert code == 1
    check = next(c for c in report["checks"] if "represents the original" in c["check"])
    assert check["ok"] is False


def test_verify_noninvariant_exit_1(capsys, tmp_path):
    code, report = run_cli(capsys, tmp_path, doc(NEGATION_NONINVARIANT), "verify")
    assert code == 1
    assert "failure" in report


def test_verify_signed_s3_with_supplied_idempotents(capsys, tmp_path):
    from docs import SIGNED_S3
    code, report = run_cli(capsys, tmp_path, doc(SIGNED_S3), "verify", "--max-len", "3")
    assert code == 0
    rq_code, rq_report = run_cli(capsys, tmp_path, doc(SIGNED_S3), "reduce",
                                 name="s3r.json")
    assert rq_code == 0
    assert len(rq_report["reduced_quiver"]["vertices"]) == 3
    assert len(rq_report["reduced_quiver"]["arrows"]) == 8
    assert rq_report["choices"]["irreducible_dims"]["v"] == [1, 1, 2]
    table = next(c for c in report["checks"] if "corner dimensions" in c["check"])
    assert [row["corner"] for row in table["table"]] == [3, 8, 16, 27]


def test_weyl_command(capsys, tmp_path):
    matrices = tmp_path / "mats.json"
    matrices.write_text(json.dumps({"matrices": [
        [["-1", "0"], ["0", "-1"]],
        [["2", "0"], ["0", "1/2"]],
    ]}), encoding="utf-8")
    code = main(["weyl", "--n", "1", "--filtration", "2",
                 "--matrices", str(matrices)])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["resolution"]["augmentation_cokernel"] == 6


def test_weyl_nonsymplectic_exit_1(capsys, tmp_path):
    matrices = tmp_path / "mats.json"
    matrices.write_text(json.dumps({"matrices": [[["2", "0"], ["0", "1"]]]}),
                        encoding="utf-8")
    code = main(["weyl", "--n", "1", "--filtration", "1",
                 "--matrices", str(matrices)])
    report = json.loads(capsys.readouterr().out)
    assert code == 1
    assert report["matrix_index"] == 0


def test_ginzburg_degree_mismatch_exit_2(capsys, tmp_path):
    # a length-one degree-zero potential cannot be homogeneous of degree -1
    bad = doc(THREE_LOOPS_COMMUTATOR,
              potential=[{"coeff": "1", "cycle": ["x"]}], d=4)
    code, report = run_cli(capsys, tmp_path, bad, "ginzburg", "--check")
    assert code == 2
    assert report["ok"] is False


def test_weyl_input_errors_exit_2(capsys, tmp_path):
    assert main(["weyl", "--n", "1", "--field", "banana"]) == 2
    capsys.readouterr()
    assert main(["weyl", "--n", "0"]) == 2
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{nope", encoding="utf-8")
    assert main(["weyl", "--n", "1", "--matrices", str(bad)]) == 2
    capsys.readouterr()
    shape = tmp_path / "shape.json"
    shape.write_text(json.dumps({"matrices": [[["1", "0"]]]}), encoding="utf-8")
    assert main(["weyl", "--n", "1", "--matrices", str(shape)]) == 2
    capsys.readouterr()


def test_missing_file_exit_2(capsys):
    code = main(["validate", "/nonexistent/file.json"])
    report = json.loads(capsys.readouterr().out)
    assert code == 2
    assert report["ok"] is False
