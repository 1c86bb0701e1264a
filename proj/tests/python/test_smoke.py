"""Smoke tests for the _samkit extension through the samkit package."""

import math

import pytest

import samkit


def test_version_and_constants():
    assert samkit.__version__
    assert samkit.MIN_MANEUVER_DURATION == 0.5
    assert samkit.BASELINE_COORD_POINT_COUNT == 20
    assert samkit.BASELINE_COORD_SCALAR_COUNT == 40


def test_modified_sam_known_values():
    p = samkit.SamParams(w=3.75, d=3.0, v0=0.0, dvx=0.0, vx0=30.0)
    assert samkit.modified_sam_lateral(p, 0.0).y == pytest.approx(0.0, abs=1e-12)
    assert samkit.modified_sam_lateral(p, 3.0).y == pytest.approx(3.75 / math.pi, abs=1e-9)

    drifting = samkit.SamParams(w=3.75, d=3.0, v0=0.5, dvx=0.0, vx0=30.0)
    assert samkit.modified_sam_lateral(drifting, 3.0).y == pytest.approx(
        1.5 + 0.75 / math.pi, abs=1e-9
    )

    with pytest.raises(ValueError):
        samkit.SamParams(w=3.75, d=0.3, v0=0.0, dvx=0.0, vx0=30.0)


def test_classical_sam_endpoints():
    p = samkit.ClassicalSamParams(y0=0.0, w=3.75, d=4.0, t_start=0.0)
    assert samkit.classical_sam_lateral(p, 4.0).y == pytest.approx(3.75, abs=1e-9)
    assert samkit.classical_sam_lateral(p, 2.0).y == pytest.approx(1.875, abs=1e-12)
    with pytest.raises(ValueError):
        samkit.classical_sam_lateral(p, 5.0)


def test_longitudinal_profile():
    p = samkit.SamParams(w=0.0, d=4.0, v0=0.0, dvx=2.0, vx0=30.0)
    state = samkit.longitudinal_profile(p, 4.0)
    assert state.vx == pytest.approx(32.0)
    assert state.x == pytest.approx(124.0)


def test_fit_round_trip():
    truth = samkit.SamParams(w=3.75, d=4.2, v0=0.4, dvx=1.5, vx0=30.0)
    traj = samkit.sample_trajectory(truth, 4.2, 0.04)
    fit = samkit.fit_sam(traj, 30.0)
    assert fit.converged
    assert fit.params.w == pytest.approx(3.75, rel=1e-6)
    assert fit.params.v0 == pytest.approx(0.4, rel=1e-6)
    assert fit.params.dvx == pytest.approx(1.5, rel=1e-6)
    assert fit.params.d == pytest.approx(4.2, abs=1e-4)


def test_codec_round_trip_and_errors():
    out = samkit.ModelOutput.make(
        "context noted",
        samkit.Intention.LEFT_LANE_CHANGE,
        samkit.HybridTrajectory.params(samkit.SamPayload(w=3.75, d=4.0, v0=0.5, dvx=1.2)),
    )
    text = samkit.serialize_output(out)
    assert "trajectory=sam[W=3.750,D=4.000,v0=0.500,dvx=1.200]" in text
    back = samkit.parse_output(text)
    assert back.intention == samkit.Intention.LEFT_LANE_CHANGE
    assert back.trajectory.sam_params().w == 3.75
    assert samkit.payload_size(back.trajectory) == 4

    bad = samkit.try_parse_output("Final Answer: intention=0; trajectory=sam[W=1.000,D=4.000,v0=0.000,dvx=0.000]")
    assert not bad.ok()
    assert bad.error.kind == samkit.ParseErrorKind.VARIANT_MISMATCH

    with pytest.raises(ValueError):
        samkit.parse_output("no answer here")


def test_pipeline_in_memory(tmp_path):
    cfg = samkit.SynthConfig()
    result = samkit.synth_generate(30, 7, cfg)
    scenarios = result.scenarios
    assert len(scenarios) == 30

    labels = [s.label for s in scenarios]
    assert labels.count(samkit.Intention.KEEP_LANE) == 20

    preds = {}
    for s in scenarios:
        preds[s.id] = samkit.baseline_predict_text(s)
    report = samkit.score_predictions(preds, scenarios)
    assert report.parse_failure_count == 0
    assert report.overall_accuracy_pct == 100.0

    table = samkit.render_report_table(report)
    assert "Overall intention accuracy" in table

    # Persistence round trip.
    path = tmp_path / "scenarios.jsonl"
    samkit.save_scenarios(path, scenarios)
    loaded = samkit.load_scenarios(path)
    assert len(loaded) == len(scenarios)
    assert loaded[0].id == scenarios[0].id

    # Corpus targets parse.
    lane_change = next(s for s in scenarios if s.label != samkit.Intention.KEEP_LANE)
    fit = samkit.fit_sam(lane_change.future, lane_change.insertion.vx)
    record = samkit.build_target(lane_change, fit)
    assert samkit.try_parse_output(record.target).ok()
    assert "Final Answer: intention=" in record.prompt


def test_track_csv_round_trip(tmp_path):
    result = samkit.synth_generate(6, 11, samkit.SynthConfig())
    path = tmp_path / "tracks.csv"
    samkit.export_tracks(path, result.tracks)
    loaded = samkit.load_tracks(path)
    assert len(loaded) == 6
    assert loaded[0][0].frame == result.tracks[0][0].frame
    assert loaded[0][-1].x == result.tracks[0][-1].x
