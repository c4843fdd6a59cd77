import csv
import json

import numpy as np
import pytest

from ssh_dispersive.cli import RunConfig, load_config, main


def _write_config(tmp_path, name="config.json", **overrides):
    cfg = {"params": {"gamma1": 1.0, "gamma2": [2.0, 0.0]}}
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def _read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_missing_config_is_exit_2(capsys):
    assert main(["spectrum", "--config", "/nonexistent.json"]) == 2


def test_invalid_schema_is_exit_2(tmp_path):
    path = _write_config(tmp_path, params={"gamma1": -1.0,
                                           "gamma2": [1.0, 0.0]})
    assert main(["spectrum", "--config", path]) == 2
    path = _write_config(tmp_path, method="telepathy")
    assert main(["spectrum", "--config", path]) == 2
    path = _write_config(tmp_path, quadrature={"bogus_knob": 1})
    assert main(["spectrum", "--config", path]) == 2


def test_spectrum_topological(tmp_path, capsys):
    path = _write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["spectrum", "--config", path, "--out", str(out)]) == 0
    report = json.loads((out / "spectrum.json").read_text())
    assert report["bands"] == [[-3.0, -1.0], [1.0, 3.0]]
    assert report["phase"] == "nontrivial"
    assert report["winding_number"] == 1
    text = capsys.readouterr().out
    assert "nontrivial" in text


def test_spectrum_trivial_and_gapless(tmp_path, capsys):
    path = _write_config(tmp_path, params={"gamma1": 2.0, "gamma2": [1.0, 0]})
    assert main(["spectrum", "--config", path]) == 0
    assert "trivial" in capsys.readouterr().out
    path = _write_config(tmp_path, params={"gamma1": 1.0, "gamma2": [1.0, 0]})
    assert main(["spectrum", "--config", path]) == 0
    text = capsys.readouterr().out
    assert "analytic propagator unavailable" in text


def test_evolve_t0_reproduces_input(tmp_path):
    path = _write_config(
        tmp_path,
        initial={"kind": "explicit",
                 "cells": [[0.25, -0.5, 1.0, 0.75], [0.0, 0.0, -1.0, 0.5]]},
        times={"start": 0.0, "stop": 0.0, "points": 1},
        cells={"min": 0, "max": 3}, method="oracle")
    out = tmp_path / "out"
    assert main(["evolve", "--config", path, "--out", str(out)]) == 0
    rows = _read_csv(out / "evolution.csv")
    assert len(rows) == 4
    assert float(rows[0]["reA"]) == 0.25
    assert float(rows[0]["imB"]) == 0.75
    assert float(rows[1]["reB"]) == -1.0
    assert float(rows[2]["reA"]) == 0.0


def test_evolve_both_emits_diff_column(tmp_path, capsys):
    path = _write_config(
        tmp_path, params={"gamma1": 1.0, "gamma2": [0.5, 0.0]},
        times={"start": 1.0, "stop": 2.0, "points": 2},
        cells={"min": 0, "max": 8}, method="both")
    out = tmp_path / "out"
    assert main(["evolve", "--config", path, "--out", str(out)]) == 0
    rows = _read_csv(out / "evolution.csv")
    assert "absDiff" in rows[0]
    assert max(float(r["absDiff"]) for r in rows) < 1e-6
    assert "maxDiff" in capsys.readouterr().out


def test_evolve_edge_overlap_is_constant(tmp_path):
    path = _write_config(
        tmp_path,
        times={"start": 0.0, "stop": 6.0, "points": 4},
        cells={"min": 0, "max": 10}, method="oracle")
    out = tmp_path / "out"
    assert main(["evolve", "--config", path, "--out", str(out)]) == 0
    rows = _read_csv(out / "evolution.csv")
    overlaps = {r["absEdgeOverlap"] for r in rows}
    vals = sorted(float(v) for v in overlaps)
    assert vals[-1] - vals[0] < 1e-10
    assert vals[0] > 0.8  # delta at the edge has large bound-state content


def test_evolve_csv_17_digit_format(tmp_path):
    path = _write_config(tmp_path,
                         times={"start": 0.0, "stop": 0.0, "points": 1},
                         cells={"min": 0, "max": 1})
    out = tmp_path / "out"
    main(["evolve", "--config", path, "--out", str(out)])
    body = (out / "evolution.csv").read_text().splitlines()[1]
    assert "1.0000000000000000e+00" in body


def test_resolved_config_roundtrips(tmp_path):
    path = _write_config(tmp_path,
                         times={"start": 0.0, "stop": 1.0, "points": 2},
                         cells={"min": 0, "max": 4})
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["evolve", "--config", path, "--out", str(out1)]) == 0
    assert main(["evolve", "--config", str(out1 / "resolved-config.json"),
                 "--out", str(out2)]) == 0
    assert (out1 / "evolution.csv").read_text() == \
        (out2 / "evolution.csv").read_text()


def test_decay_scan_standard(tmp_path, capsys):
    path = _write_config(
        tmp_path, params={"gamma1": 1.0, "gamma2": [0.5, 0.0]},
        times={"start": 100.0, "stop": 1000.0, "points": 10,
               "spacing": "geometric"},
        cells={"min": 0, "max": 0}, method="oracle")
    out = tmp_path / "out"
    assert main(["decay-scan", "--config", path, "--out", str(out)]) == 0
    rows = _read_csv(out / "decay.csv")
    assert len(rows) == 10
    assert all(float(r["supNorm"]) <= float(r["envSup"]) * (1 + 1e-9)
               for r in rows)
    assert (out / "decay.svg").read_text().startswith("<svg")
    report = json.loads((out / "decay.json").read_text())
    assert report["slope_ok"] and report["envelope_ok"]


def test_decay_scan_replay(tmp_path, capsys):
    t = np.geomspace(1, 1e3, 20)
    path = _write_config(
        tmp_path, trace={"times": list(t), "supNorm": list(3.7 * t ** -0.5)})
    out = tmp_path / "out"
    assert main(["decay-scan", "--config", path, "--out", str(out)]) == 0
    fit = json.loads((out / "fit.json").read_text())
    assert abs(fit["exponent"] + 0.5) < 1e-9
    assert abs(fit["constant"] - 3.7) < 1e-3


def test_decay_scan_parameter_grid(tmp_path):
    path = _write_config(
        tmp_path,
        times={"start": 20.0, "stop": 120.0, "points": 8,
               "spacing": "geometric"},
        grid=[{"gamma2": [0.5, 0.0]}, {"gamma2": [0.8, 0.0]}],
        method="oracle")
    out = tmp_path / "out"
    assert main(["decay-scan", "--config", path, "--out", str(out)]) == 0
    rows = _read_csv(out / "constants.csv")
    assert len(rows) == 2
    assert all(float(r["ratio"]) > 0 for r in rows)


def test_threads_env_validation(tmp_path, monkeypatch):
    monkeypatch.setenv("SSH_DISPERSIVE_THREADS", "zebra")
    path = _write_config(
        tmp_path,
        times={"start": 20.0, "stop": 40.0, "points": 8,
               "spacing": "geometric"},
        grid=[{"gamma2": [0.5, 0.0]}], method="oracle")
    assert main(["decay-scan", "--config", path]) == 2


def test_verify_gapless_skips_analytic(tmp_path, capsys):
    path = _write_config(tmp_path,
                         params={"gamma1": 1.0, "gamma2": [1.0, 0.0]})
    out = tmp_path / "out"
    code = main(["verify", "--config", path, "--out", str(out),
                 "--tier", "quick"])
    report = json.loads((out / "verify.json").read_text())
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["propagator_oracle"]["skipped"]
    assert "γ₋ = 0" in by_name["propagator_oracle"]["detail"]
    assert not by_name["symmetries"]["skipped"]
    assert code == 0


def test_verify_tampered_tolerance_fails_propagator_check(tmp_path):
    path = _write_config(tmp_path, quadrature={"rel_tol": 1e-2})
    out = tmp_path / "out"
    code = main(["verify", "--config", path, "--out", str(out),
                 "--tier", "quick"])
    assert code == 3
    report = json.loads((out / "verify.json").read_text())
    by_name = {c["name"]: c for c in report["checks"]}
    assert not by_name["propagator_oracle"]["passed"]


def test_runconfig_rejects_bad_times(tmp_path):
    with pytest.raises(Exception):
        RunConfig.from_dict({"params": {"gamma1": 1, "gamma2": [2, 0]},
                             "times": {"start": 5.0, "stop": 1.0,
                                       "points": 3}})
