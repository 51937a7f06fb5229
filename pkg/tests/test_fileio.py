import json
import math

import pytest

from habsim import (REFERENCE_POINTS, DEFAULT_CALIBRATION, Scenario,
                    StepRecord, default_controller, identify_regions,
                    run_closed_loop, run_open_loop_step)
from habsim import fileio


def test_calibration_points_round_trip(tmp_path):
    path = tmp_path / "points.csv"
    fileio.write_calibration_points(path, REFERENCE_POINTS)
    text = path.read_text()
    assert text.splitlines()[0] == "T,V"
    assert fileio.read_calibration_points(path) == list(REFERENCE_POINTS)


def test_calibration_points_header_enforced(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("temp,volts\n23.0,-3.5\n")
    with pytest.raises(ValueError, match="header"):
        fileio.read_calibration_points(path)


def test_poly_json_round_trip(tmp_path):
    path = tmp_path / "poly.json"
    fileio.write_poly(path, DEFAULT_CALIBRATION)
    doc = json.loads(path.read_text())
    assert set(doc) == {"c3", "c2", "c1", "c0"}
    assert fileio.read_poly(path) == DEFAULT_CALIBRATION


def test_step_record_round_trip(tmp_path):
    rec = run_open_loop_step(0.0, 1.0, duration=10.0, ts=0.1)
    path = tmp_path / "step.csv"
    fileio.write_step_record(path, rec)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,u,T"
    back = fileio.read_step_record(path)
    assert back == rec


def test_step_record_input_column_switches_at_step(tmp_path):
    rec = StepRecord(ts=0.5, t_step=1.0, u0=0.5, u1=1.5,
                     samples=(30.0, 30.0, 30.0, 34.0, 36.0))
    path = tmp_path / "step.csv"
    fileio.write_step_record(path, rec)
    drives = [float(line.split(",")[1])
              for line in path.read_text().splitlines()[1:]]
    assert drives == [0.5, 0.5, 1.5, 1.5, 1.5]  # u1 applies from t_step on
    back = fileio.read_step_record(path)
    assert back.t_step == pytest.approx(1.0)
    assert back.u0 == 0.5 and back.u1 == 1.5


def test_step_record_rejects_jitter_and_double_steps(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,u,T\n0.0,0,30\n0.1,0,30\n0.21,1,31\n")
    with pytest.raises(ValueError, match="non-uniform"):
        fileio.read_step_record(path)
    path.write_text("t,u,T\n0.0,0,30\n0.1,1,30\n0.2,2,31\n")
    with pytest.raises(ValueError, match="more than once"):
        fileio.read_step_record(path)
    path.write_text("t,u,T\n0.0,0,30\n")
    with pytest.raises(ValueError, match="two samples"):
        fileio.read_step_record(path)


def test_flat_record_round_trips_as_zero_step(tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text("t,u,T\n0.0,1.0,39.1\n0.1,1.0,39.1\n0.2,1.0,39.1\n")
    rec = fileio.read_step_record(path)
    assert rec.u0 == rec.u1 == 1.0
    assert rec.t_step == 0.0


def test_scenario_json_round_trip(tmp_path):
    sc = Scenario(duration=30.0, setpoints=((0.0, 35.0), (10.0, 45.0)),
                  throttle=((5.0, 1.2),), controller=default_controller(0.1),
                  seed=3)
    path = tmp_path / "scenario.json"
    fileio.write_scenario(path, sc)
    assert fileio.read_scenario(path) == sc


def test_simlog_written_verbatim(tmp_path):
    log = run_closed_loop(Scenario(duration=1.0, setpoints=((0.0, 32.0),)))
    path = tmp_path / "log.csv"
    fileio.write_simlog(path, log)
    assert path.read_text() == log.to_csv()


def test_regional_model_json_round_trip(tmp_path):
    records = [run_open_loop_step(0.0, 1.0, duration=10.0),
               run_open_loop_step(1.0, 2.0, duration=10.0)]
    model = identify_regions(records)
    path = tmp_path / "model.json"
    fileio.write_regional_model(path, model)
    doc = json.loads(path.read_text())
    assert doc["regions"][-1]["u_high"] is None
    back = fileio.read_regional_model(path)
    assert back == model
    assert math.isinf(back.regions[-1].u_high)


def test_controller_json_round_trip(tmp_path):
    ctrl = default_controller(0.1)
    path = tmp_path / "controller.json"
    fileio.write_controller(path, ctrl)
    assert fileio.read_controller(path) == ctrl


def test_default_out_dir_uses_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HABS_LOG_DIR", str(tmp_path))
    assert fileio.default_out_dir() == tmp_path
    monkeypatch.delenv("HABS_LOG_DIR")
    assert str(fileio.default_out_dir()) == "."
