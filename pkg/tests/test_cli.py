import json

import pytest

from patchalg.cli import ConfigError, RunConfig, main, run


def strip_timing(report: dict) -> dict:
    clean = json.loads(json.dumps(report))
    for rec in clean["records"]:
        rec.pop("elapsed_ms", None)
    return clean


def test_certificate_suite_exit_zero():
    report, code = run(RunConfig(suites=["certificate"]))
    assert code == 0
    assert report["summary"]["fail"] == 0
    assert report["schema_version"] == 1
    records = {r["case"]: r for r in report["records"]}
    assert records["division-algebra"]["status"] == "pass"
    cert = records["division-algebra"]["details"]
    assert cert["verdict"] == "certified"
    assert cert["valuation_table"]["v_r(b)"]["computed"] == 1


def test_tampered_certificate_exit_one():
    report, code = run(RunConfig(suites=["certificate"], tamper_b=True))
    assert code == 1
    records = {r["case"]: r for r in report["records"]}
    assert records["division-algebra"]["status"] == "fail"
    assert records["division-algebra"]["details"]["verdict"] == "refuted"


def test_duplicate_centers_rejected():
    rc = RunConfig(centers=["0", "1", "1"], suites=["certificate"])
    with pytest.raises(ConfigError, match="centers must be distinct"):
        run(rc)


def test_unknown_suite_rejected():
    with pytest.raises(ConfigError, match="unknown suite"):
        run(RunConfig(suites=["nope"]))


def test_bad_precision_rejected():
    with pytest.raises(ConfigError):
        run(RunConfig(precision=2, suites=["certificate"]))


def test_bad_scenario_rejected():
    with pytest.raises(ConfigError):
        run(RunConfig(scenario={"i": 1, "j": 1}, suites=["certificate"]))
    with pytest.raises(ConfigError):
        run(RunConfig(scenario={"i": 7}, suites=["certificate"]))


def test_unknown_config_key_rejected():
    with pytest.raises(ConfigError, match="unknown config keys"):
        RunConfig.from_dict({"bogus": 1})


def test_determinism_modulo_timing():
    r1, _ = run(RunConfig(suites=["certificate"], seed=7))
    r2, _ = run(RunConfig(suites=["certificate"], seed=7))
    assert strip_timing(r1) == strip_timing(r2)


def test_main_with_config_file(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    out_path = tmp_path / "report.json"
    cfg_path.write_text(json.dumps({
        "centers": ["0", "1", "2"],
        "precision": 16,
        "suites": ["certificate"],
        "seed": 5,
    }))
    code = main(["--config", str(cfg_path), "--output", str(out_path)])
    assert code == 0
    report = json.loads(out_path.read_text())
    assert report["summary"]["fail"] == 0
    assert report["config"]["seed"] == 5


def test_main_duplicate_centers_exit_2(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"centers": ["1", "1"]}))
    code = main(["--config", str(cfg_path)])
    assert code == 2
    err = capsys.readouterr().err
    assert "centers must be distinct" in err


def test_main_tamper_flag_exit_1(tmp_path):
    out_path = tmp_path / "report.json"
    code = main(["--suite", "certificate", "--tamper-b", "--output", str(out_path)])
    assert code == 1
    report = json.loads(out_path.read_text())
    assert report["summary"]["fail"] >= 1


def test_cli_overrides():
    rc = RunConfig.from_dict({"seed": 1})
    assert rc.scenario["k"] == 3
    assert rc.suites == ["all"]
    cfg, names = rc.resolve()
    assert cfg.precision == 16
    assert len(names) == 6


def test_default_config_all_suites_pass():
    # the full default run: every suite green, exit code 0
    report, code = run(RunConfig())
    assert code == 0
    assert report["summary"]["fail"] == 0
    assert report["summary"]["skip"] == 0
    suites_seen = {r["suite"] for r in report["records"]}
    assert suites_seen == {"rings", "split", "intersect", "cartan", "kummer", "certificate"}
