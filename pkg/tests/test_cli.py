import csv
import io
import json

import pytest

from kashaev_cables.cli import main, parse_angle, parse_N
from kashaev_cables.jones import knot_to_json, trefoil
from kashaev_cables.suite import (
    GROWTH_COLUMNS,
    RunConfig,
    emit_report,
    growth_sweep,
    run_verification_suite,
)

QUICK = ("exact.brace_sum_identity", "knot.kashaev_values", "parity.classification")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_N("7") == [7]
    assert parse_N("3:9:3") == [3, 6, 9]
    assert abs(float(parse_angle("pi/6")) - 0.5235987755982988) < 1e-15
    assert abs(float(parse_angle("5*pi/6")) - 2.6179938779914944) < 1e-15
    assert float(parse_angle("-pi")) < 0 and float(parse_angle("0.25")) == 0.25


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(prec_initial=32)
    with pytest.raises(ValueError):
        RunConfig(alpha=0.5)
    with pytest.raises(ValueError):
        RunConfig(parity="prime")


def test_suite_only_and_report_shape():
    report = run_verification_suite(RunConfig(only=QUICK))
    assert [c.name for c in report.checks] == list(QUICK)
    obj = json.loads(emit_report(report, "json"))
    assert set(obj) == {"checks", "totals", "config"}
    assert obj["totals"] == {"pass": 3, "fail": 0, "unresolved": 0, "total": 3}
    assert all(c["paper_anchor"] for c in obj["checks"])
    assert report.exit_code == 0
    with pytest.raises(ValueError):
        run_verification_suite(RunConfig(only=("no.such.check",)))


def test_empty_m_list_skips_cable_checks():
    report = run_verification_suite(RunConfig(m_list=(), lemma_N_max=8, block_N_max=8))
    names = [c.name for c in report.checks]
    assert not any(n.startswith("cable.") for n in names)
    assert "asymptotics.convergence" not in names
    assert {"exact.A_congruence", "exact.brace_sum_identity", "exact.w_congruence"} <= set(names)
    assert report.exit_code == 0


def test_low_precision_vanishing_is_unresolved():
    cfg = RunConfig(prec_initial=64, prec_cap_multiplier=1, vanishing_N_max=60,
                    only=("cable.vanishing_m0_even_N",))
    report = run_verification_suite(cfg)
    (check,) = report.checks
    assert check.status == "unresolved" and check.candidates
    assert report.exit_code == 2


def test_growth_m4_auto_is_empty_with_note():
    (d,) = growth_sweep(RunConfig(m_list=(4,), N_range=(3, 41, 1)))
    assert d.rows == [] and "empty" in d.notes[0]


def test_growth_csv_columns_and_zero_flags():
    datasets = growth_sweep(RunConfig(m_list=(0,), N_range=(6, 12, 1), parity="even"))
    text = emit_report(datasets, "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == GROWTH_COLUMNS
    assert [r[0] for r in rows[1:]] == ["6", "8", "10", "12"]
    assert all(r[3] == "-inf" and r[8] == "false" for r in rows[1:])
    obj = json.loads(emit_report(datasets, "json"))
    assert all(r["is_zero"] and r["assertion"] == "none" for r in obj[0]["rows"])


def test_growth_is_deterministic():
    cfg = RunConfig(m_list=(1,), N_range=(5, 25, 5))
    assert emit_report(growth_sweep(cfg), "csv") == emit_report(growth_sweep(cfg), "csv")


def test_cli_kashaev_and_cable(capsys):
    code, out, _ = run(capsys, "kashaev", "-N", "1:3")
    assert code == 0 and [r["re"] for r in json.loads(out)] == ["1.0", "5.0", "13.0"]
    code, out, _ = run(capsys, "cable", "-m", "0", "-N", "4:5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["is_zero"] == "true" and rows[1]["is_zero"] == "false"


def test_cli_cable_methods_agree(capsys):
    vals = {}
    for method in ("paired", "oracle", "closed-form"):
        code, out, _ = run(capsys, "cable", "-m", "4", "-N", "6", "--method", method)
        assert code == 0
        vals[method] = complex(float(json.loads(out)[0]["re"]), float(json.loads(out)[0]["im"]))
    assert abs(vals["paired"] - vals["oracle"]) < 1e-12
    assert abs(vals["paired"] - vals["closed-form"]) < 1e-12


def test_cli_unresolved_exit_code(capsys):
    code, out, _ = run(capsys, "cable", "-m", "0", "-N", "60", "--prec", "64", "--cap", "1")
    assert code == 2 and json.loads(out)[0]["status"] == "unresolved"


def test_cli_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("KASHAEV_CABLES_PREC", "256")
    code, out, _ = run(capsys, "cable", "-m", "1", "-N", "5")
    assert code == 0 and json.loads(out)[0]["prec_used"] == 512


def test_cli_predict_lobachevsky_show_knot(capsys, tmp_path):
    code, out, _ = run(capsys, "predict", "-m", "1", "-N", "101")
    assert code == 0 and json.loads(out)[0]["l_star"] == 84
    code, out, _ = run(capsys, "lobachevsky", "pi/6", "--format", "csv")
    assert code == 0 and out.splitlines()[1].split(",")[1].startswith("0.50747080320482")
    path = tmp_path / "t.json"
    path.write_text(json.dumps(knot_to_json(trefoil(), 4)), encoding="utf-8")
    code, out, _ = run(capsys, "show-knot", "--knot", str(path), "--count", "4")
    assert code == 0 and json.loads(out)["name"] == "trefoil"


def test_cli_verify(capsys):
    code, out, err = run(capsys, "verify", "--only", "parity.classification", "--only", "knot.kashaev_values")
    assert code == 0 and json.loads(out)["totals"]["pass"] == 2 and "2 passed" in err
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and "cable.oracle_lhopital" in out.split()


def test_cli_errors(capsys):
    code, _, err = run(capsys, "show-knot", "--knot", "no-such-knot.json")
    assert code == 1 and "error" in err
    with pytest.raises(SystemExit) as info:
        main(["cable", "-m", "x", "-N", "3"])
    assert info.value.code == 1
