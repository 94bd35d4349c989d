"""Report schema, suite dispatch, CLI exit codes and determinism."""

import copy
import json

import jsonschema
import pytest

from suq2kit.cli import main
from suq2kit.qarith import HalfInt
from suq2kit.report import Check, VerificationReport, emit_report, load_schema
from suq2kit.suites import SuiteConfig, UsageError, list_suites, run_suite


def _strip_volatile(report_dict):
    out = copy.deepcopy(report_dict)
    out.pop("wall_time_ms")
    return out


def test_check_semantics():
    assert Check("x", "a", 1e-12, 1e-10).passed
    assert not Check("x", "a", 1e-8, 1e-10).passed
    assert Check("x", "a", 5.0, 1.0, mode="min").passed
    assert Check("x", "a", 123.0, None, mode="info").passed
    with pytest.raises(ValueError):
        Check("x", "a", 1.0, None, mode="max")
    with pytest.raises(ValueError):
        Check("x", "a", 1.0, 1.0, mode="bogus")


def test_empty_report_refused(tmp_path):
    rep = VerificationReport(suite="x", parameters={})
    with pytest.raises(ValueError):
        rep.overall
    with pytest.raises(ValueError):
        emit_report(rep, out_path=tmp_path / "r.json")


def test_suite_catalog():
    catalog = list_suites()
    names = {entry["suite"] for entry in catalog}
    assert {"relations", "podles", "lemma1", "lemma2", "lemma3", "fredholm",
            "rotation", "degenerate", "koszul", "fusion", "foq", "all"} <= names
    assert len(catalog) >= 11
    by_name = {e["suite"]: e for e in catalog}
    assert "endpoint matching of the coefficient homotopy" in by_name["lemma3"]["anchors"]
    assert "length-one resolution of the trivial module" in by_name["koszul"]["anchors"]


def test_every_check_anchor_is_catalogued():
    catalog = {a for e in list_suites() for a in e["anchors"]}
    for suite, q in (("relations", 0.5), ("lemma1", -0.7), ("lemma2", 0.5),
                     ("lemma3", -0.5), ("podles", 0.5), ("fredholm", 0.5),
                     ("rotation", -0.5), ("koszul", None), ("fusion", None),
                     ("foq", None), ("degenerate", -0.5)):
        rep = run_suite(SuiteConfig(suite=suite, q=q, lmax=HalfInt(24), t_grid=3))
        for check in rep.checks:
            assert check.anchor in catalog, (suite, check.name, check.anchor)


def test_run_suite_usage_errors():
    with pytest.raises(UsageError):
        run_suite(SuiteConfig(suite="nope", q=0.5))
    with pytest.raises(UsageError):
        run_suite(SuiteConfig(suite="rotation", q=0.5, lmax=HalfInt(20)))
    with pytest.raises(UsageError):
        run_suite(SuiteConfig(suite="relations", q=None))
    with pytest.raises(UsageError):
        run_suite(SuiteConfig(suite="relations", q=1.5))
    with pytest.raises(UsageError):
        SuiteConfig(suite="relations", q=0.5, t_grid=1)


def test_report_schema_and_determinism(tmp_path):
    cfg = dict(suite="lemma3", q=-0.7, lmax=HalfInt(16))
    rep1 = run_suite(SuiteConfig(**cfg))
    rep2 = run_suite(SuiteConfig(**cfg))
    schema = load_schema()
    jsonschema.validate(rep1.as_dict(), schema)
    assert _strip_volatile(rep1.as_dict()) == _strip_volatile(rep2.as_dict())
    # byte identity apart from the wall time line
    j1 = "\n".join(l for l in rep1.to_json().splitlines() if "wall_time_ms" not in l)
    j2 = "\n".join(l for l in rep2.to_json().splitlines() if "wall_time_ms" not in l)
    assert j1 == j2


def test_lemma2_csv_shape(tmp_path):
    rep = run_suite(SuiteConfig(suite="lemma2", q=-0.5, lmax=HalfInt(40), t_grid=3))
    paths = emit_report(rep, out_path=tmp_path / "r.json", csv_dir=tmp_path)
    csv_path = [p for p in paths if p.suffix == ".csv"][0]
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "l,family,sup_residual"
    # one row per (l, family): 4 spins x (8 gated + 8 measured) families
    assert len(lines) - 1 == 4 * 16
    labels = {line.split(",")[0] for line in lines[1:]}
    assert labels == {"10", "20", "30", "40"}


def test_cli_end_to_end(tmp_path):
    out = tmp_path / "rep.json"
    code = main(["run", "--suite", "koszul", "--n", "4", "--D", "8",
                 "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    jsonschema.validate(data, load_schema())
    assert data["overall"] is True
    assert data["suite"] == "koszul"


def test_cli_exit_codes(tmp_path):
    assert main(["run", "--suite", "rotation", "--q", "0.5"]) == 2
    assert main(["run", "--suite", "unknown", "--q", "0.5"]) == 2
    assert main(["run", "--suite", "relations"]) == 2          # missing q
    assert main(["run", "--suite", "relations", "--q", "0"]) == 2
    assert main(["run", "--suite", "relations", "--lmax", "x/3", "--q", "0.5"]) == 2
    assert main(["bogus"]) == 2
    assert main(["suites"]) == 0


def test_cli_halfint_lmax(tmp_path):
    out = tmp_path / "rep.json"
    code = main(["run", "--suite", "lemma1", "--q", "-0.7", "--lmax", "21/2",
                 "--t-grid", "3", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["parameters"]["lmax"] == "21/2"


def test_cli_foq_accepts_json_matrix(tmp_path):
    # the external wire format: rows of [re, im] pairs
    mat = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]  # antidiagonal, q = -1
    path = tmp_path / "qmat.json"
    path.write_text(json.dumps(mat))
    out = tmp_path / "rep.json"
    code = main(["run", "--suite", "foq", "--qmatrix", str(path), "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["parameters"]["qmatrix_solved_q"] == pytest.approx(-1.0, abs=1e-12)
    assert data["parameters"]["qmatrix_sign"] == 1

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]))
    assert main(["run", "--suite", "foq", "--qmatrix", str(bad)]) == 2
    assert main(["run", "--suite", "foq", "--qmatrix", str(tmp_path / "none.json")]) == 2


def test_cli_verification_failure_exit_code(tmp_path, monkeypatch):
    # flipping the diagonal sign factor must break the lemma3 suite for q < 0
    import suq2kit.homotopy as ho
    monkeypatch.setattr(ho, "_endpoint_sign", lambda q: 1.0)
    code = main(["run", "--suite", "lemma3", "--q", "-0.5",
                 "--out", str(tmp_path / "rep.json")])
    assert code == 1
