import json
import math
from pathlib import Path

import pytest

from fracineq.bounds import TheoremParams
from fracineq.cli import main
from fracineq.expr import FuncSpec
from fracineq.fracint import FracParams
from fracineq.harness import (ROW_FIELDS, ConfigError, SweepConfig, contradictions, expected_row_count,
                              format_report, run_sweep, verify_theorem, write_report)

ROOT = Path(__file__).resolve().parents[1]
DEFAULT_CONFIG = ROOT / "configs" / "default_sweep.json"


def small_config(**over):
    data = dict(functions=["exp(x/2)", "x^2"], a_values=[0.0], b_values=[1.0], alpha_values=[0.5, 1.0, 2.0],
                s_values=[1.0], mu_values=[0.5], theorems=["t5"], variants=["printed", "corrected"],
                points_per_axis=9, random_pairs=50)
    data.update(over)
    return SweepConfig.from_dict(data)


# ---------------------------------------------------------------- verify

def test_verify_t5_reference():
    f = FuncSpec.from_text("exp(x/2)", 0, 1)
    rec = verify_theorem(f, FracParams(0, 1, 1), TheoremParams.make(1.0, 0.5), "t5")
    assert rec.lhs == pytest.approx(0.0269, abs=1e-4)
    assert rec.rhs == pytest.approx(0.1907, abs=1e-4)
    assert rec.margin == pytest.approx(0.1638, abs=1e-4)
    assert rec.margin == rec.rhs - rec.lhs
    assert rec.flags == {"slog_second": True, "unit_range": True, "psi_le_one": True}
    assert rec.hypotheses_hold


def test_verify_t2_square():
    f = FuncSpec.from_text("x^2", 0, 1)
    rec = verify_theorem(f, FracParams(0, 1, 1), None, "t2")
    assert rec.lhs == pytest.approx(1 / 6, abs=1e-10)
    assert rec.rhs == pytest.approx(0.25, abs=1e-12)
    assert rec.margin == pytest.approx(1 / 12, abs=1e-10)
    assert rec.flags == {"convex_abs_deriv": True}


def test_verify_unit_range_false_still_reports_margin():
    f = FuncSpec.from_text("exp(x)", 0, 1)
    rec = verify_theorem(f, FracParams(0, 1, 1), TheoremParams.make(1.0, 0.5), "t5")
    assert rec.flags["unit_range"] is False
    assert not rec.hypotheses_hold
    assert math.isfinite(rec.margin) and rec.error is None


def test_verify_t7_checks_power():
    f = FuncSpec.from_text("exp(x/2)", 0, 1)
    rec = verify_theorem(f, FracParams(0, 1, 0.5), TheoremParams.make(1.0, 0.5, q=2.0), "t7")
    assert rec.flags == {"slog_second": True, "unit_range": True, "psi_le_one": True, "alpha_le_one": True}
    rec = verify_theorem(f, FracParams(0, 1, 1.5), TheoremParams.make(1.0, 0.5, q=2.0), "t7")
    assert rec.flags["alpha_le_one"] is False


def test_verify_failure_becomes_record():
    # f' = 1/(2 sqrt(x)) is not finite at a = 0
    f = FuncSpec.from_text("sqrt(x)", 0, 1)
    rec = verify_theorem(f, FracParams(0, 1, 0.5), TheoremParams.make(1.0, 0.5), "t5")
    assert rec.error
    assert math.isnan(rec.margin)
    assert not rec.hypotheses_hold


def test_verify_parameter_checks():
    f = FuncSpec.from_text("x", 0, 1)
    with pytest.raises(ConfigError):
        verify_theorem(f, FracParams(0, 1, 1), TheoremParams.make(), "t6")
    with pytest.raises(ConfigError):
        verify_theorem(f, FracParams(0, 1, 1), TheoremParams.make(), "t7")
    with pytest.raises(ConfigError):
        verify_theorem(f, FracParams(0, 1, 1), TheoremParams.make(), "t9")


# ---------------------------------------------------------------- config

def test_row_count_example():
    cfg = small_config()
    rows = run_sweep(cfg)
    assert len(rows) == 12 == expected_row_count(cfg)


def test_empty_theorems():
    with pytest.raises(ConfigError, match="no theorems selected"):
        small_config(theorems=[])


def test_t6_without_p_values():
    with pytest.raises(ConfigError, match="p_values"):
        small_config(theorems=["t6"])


@pytest.mark.parametrize("over, field", [
    (dict(a_values=[1.0]), "a_values"), (dict(alpha_values=[0.0]), "alpha_values"),
    (dict(s_values=[1.5]), "s_values"), (dict(mu_values=[1.0]), "mu_values"),
    (dict(theorems=["t7"]), "q_values"), (dict(format="xml"), "format"),
    (dict(functions=["tan(x)"]), "functions"), (dict(variants=["verbatim"]), "variants"),
    (dict(colour="blue"), "colour"),
])
def test_config_validation_names_field(over, field):
    with pytest.raises(ConfigError, match=field):
        small_config(**over)


def test_config_bad_tolerance():
    with pytest.raises(ValueError):
        small_config(abs_tol=0.0)


@pytest.mark.parametrize("theorems", [["t2"], ["t5"], ["t6"], ["t7"], ["remark1"], ["t2", "t5", "t6", "t7", "remark1"]])
def test_row_counts(theorems):
    cfg = small_config(theorems=theorems, s_values=[0.5, 1.0], mu_values=[0.3, 0.6], p_values=[2.0, 3.0],
                       q_values=[1.0, 2.0, 4.0], a_values=[0.0, 0.5], b_values=[1.0, 1.5])
    assert len(run_sweep(cfg)) == expected_row_count(cfg)


def test_row_order_is_lexicographic():
    cfg = small_config(theorems=["t2", "t6"], p_values=[2.0, 3.0])
    rows = run_sweep(cfg)
    keys = [(r.function, r.theorem, r.alpha, r.p, r.variant) for r in rows]
    assert keys[:4] == [("exp(x/2)", "t2", 0.5, None, "printed"), ("exp(x/2)", "t2", 0.5, None, "corrected"),
                        ("exp(x/2)", "t2", 1.0, None, "printed"), ("exp(x/2)", "t2", 1.0, None, "corrected")]
    assert [k for k in keys if k[1] == "t6"][:3] == [("exp(x/2)", "t6", 0.5, 2.0, "printed"),
                                                    ("exp(x/2)", "t6", 0.5, 2.0, "corrected"),
                                                    ("exp(x/2)", "t6", 0.5, 3.0, "printed")]


def test_bad_function_row_fails_alone():
    cfg = small_config(functions=["ln(x)", "exp(x/2)"])
    rows = run_sweep(cfg)
    assert all(r.error for r in rows[:6])
    assert not any(r.error for r in rows[6:])


# ---------------------------------------------------------------- reports

def test_csv_and_json_shapes(tmp_path):
    rows = run_sweep(small_config())
    write_report(rows, "csv", tmp_path / "r.csv")
    raw = (tmp_path / "r.csv").read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 13
    assert lines[0] == ",".join(ROW_FIELDS)
    write_report(rows, "json", tmp_path / "r.json")
    data = json.loads((tmp_path / "r.json").read_text())
    assert len(data) == 12
    assert list(data[0]) == list(ROW_FIELDS)


def test_csv_cells():
    rows = run_sweep(small_config(alpha_values=[1.0], functions=["x^2"], theorems=["t2"]))
    header, first = format_report(rows, "csv").splitlines()[:2]
    cells = dict(zip(header.split(","), first.split(",")))
    assert cells["s"] == "" and cells["mu"] == ""
    assert cells["convex_abs_deriv"] == "true"
    assert cells["rhs"] == format(0.25, ".17g")
    assert float(cells["lhs"]) == rows[0].lhs


def test_write_report_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        write_report([], "csv", tmp_path / "x.csv")


def test_json_nan_is_null():
    rows = run_sweep(small_config(functions=["ln(x)"]))
    data = json.loads(format_report(rows, "json"))
    assert data[0]["margin"] is None and data[0]["error"]


def test_determinism(tmp_path):
    cfg = small_config(theorems=["t2", "t5", "t6", "t7", "remark1"], p_values=[2.0], q_values=[2.0])
    a, b = run_sweep(cfg), run_sweep(cfg)
    assert a == b
    assert format_report(a, "csv") == format_report(b, "csv")


def test_flag_soundness_small():
    cfg = small_config(theorems=["t2", "t5", "t6", "t7"], p_values=[2.0], q_values=[2.0],
                       functions=["exp(x/2)", "exp(-x)", "x^2+x+1"])
    rows = run_sweep(cfg)
    assert not contradictions(rows)
    for r in rows:
        if r.variant == "corrected" and r.margin < -1e-9:
            assert not r.hypotheses_hold


# ---------------------------------------------------------------- CLI

def test_cli_eval(capsys):
    assert main(["eval", "--f", "x^2", "--a", "0", "--b", "1", "--alpha", "0.5", "--op", "jplus", "--x", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.6018022, abs=1e-7)


def test_cli_identity(capsys):
    assert main(["identity", "--f", "x^2", "--a", "0", "--b", "1", "--alpha", "0.5"]) == 0
    out = capsys.readouterr().out.split()
    assert out[0] == "lhs" and float(out[1]) == pytest.approx(2 / 15, abs=1e-10)
    assert abs(float(out[5])) <= 1e-8


def test_cli_classify(capsys):
    assert main(["classify", "--f=-x^2", "--lo", "0", "--hi", "1", "--kind", "convex"]) == 0
    assert "violated at (0.0, 1.0, 0.5)" in capsys.readouterr().out
    assert main(["classify", "--f", "exp(x/2)", "--lo", "0", "--hi", "1", "--kind", "slog2",
                 "--of", "abs-derivative"]) == 0
    assert "no violation found" in capsys.readouterr().out


def test_cli_verify(capsys):
    assert main(["verify", "--theorem", "t6", "--f", "exp(x/2)", "--a", "0", "--b", "1", "--p", "2"]) == 0
    out = capsys.readouterr().out
    assert "rhs      0.1892" in out
    assert "hypotheses hold" in out


def test_cli_exit_codes(tmp_path, capsys):
    assert main([]) == 1
    assert main(["eval", "--f", "x^", "--a", "0", "--b", "1", "--alpha", "1", "--op", "jplus", "--x", "1"]) == 1
    assert main(["eval", "--f", "x", "--a", "1", "--b", "0", "--alpha", "1", "--op", "jplus", "--x", "1"]) == 1
    assert main(["verify", "--theorem", "t5", "--f", "sqrt(x)", "--a", "0", "--b", "1"]) == 2
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"functions": ["x"], "a_values": [0], "b_values": [1], "alpha_values": [1],
                               "theorems": []}))
    assert main(["sweep", "--config", str(bad)]) == 1
    assert "no theorems selected" in capsys.readouterr().err


def test_cli_sweep_contradiction_exit(tmp_path, monkeypatch):
    import fracineq.cli as cli
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"functions": ["exp(x/2)"], "a_values": [0], "b_values": [1], "alpha_values": [1],
                               "theorems": ["t5"], "points_per_axis": 5, "random_pairs": 10}))
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3
    monkeypatch.setattr(cli, "contradictions", lambda rows: rows[:1])
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 3


def test_shipped_config_loads():
    cfg = SweepConfig.from_json(DEFAULT_CONFIG)
    assert cfg.functions == ["exp(x/2)", "exp(-x)", "x^2+x+1", "0.9^x*2"]
    assert expected_row_count(cfg) == 8640
