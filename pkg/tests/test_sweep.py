import csv
import io
import json
import math

import numpy as np
import pytest

from nonideal_fidelity.errors import ConfigInvalid
from nonideal_fidelity.sweep import (
    AGREEMENT_TOL,
    COLUMNS,
    INCREASE_QUADRANTS,
    QUADRANTS,
    SweepConfig,
    quadrant_masks,
    run_sweep,
)


@pytest.fixture(scope="module")
def default_sweep():
    return run_sweep(SweepConfig(1e-3))


def test_row_count_and_header(default_sweep):
    lines = default_sweep.to_csv().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 1 + 101 * 101


def test_csv_is_deterministic(default_sweep):
    assert default_sweep.to_csv() == run_sweep(SweepConfig(1e-3)).to_csv()


def test_csv_round_trips_floats(default_sweep):
    rows = list(csv.reader(io.StringIO(default_sweep.to_csv())))[1:]
    got = np.array([float(r[-1]) for r in rows]).reshape(default_sweep.shape)
    np.testing.assert_array_equal(got, default_sweep.delta_f_sq)


def test_zero_error_gives_zero_surface():
    r = run_sweep(SweepConfig(0.0, 21, 21))
    assert np.all(r.delta_f_sq == 0.0)
    assert r.negative_cells == {"count": 0, "bounds": None}


def test_regions(default_sweep):
    for name in QUADRANTS:
        expected = 1.0 if name in INCREASE_QUADRANTS else 0.0
        assert default_sweep.regions[name] == expected


def test_interior_signs(default_sweep):
    masks = quadrant_masks(default_sweep.alpha_sq, default_sweep.theta)
    d = default_sweep.delta_f_sq
    for name, mask in masks.items():
        if name in INCREASE_QUADRANTS:
            assert np.all(d[mask] < 0)
        else:
            assert np.all(d[mask] > 0)


def test_interior_masks_leave_one_step_margin():
    masks = quadrant_masks(np.linspace(0, 1, 11), np.linspace(0, math.pi, 11))
    # 0.1..0.4 and 0.6..0.9 on each axis.
    assert all(int(m.sum()) == 16 for m in masks.values())


def test_negative_cell_summary(default_sweep):
    assert default_sweep.negative_cells["count"] == int(default_sweep.negative_mask().sum()) == 4900
    bounds = default_sweep.negative_cells["bounds"]
    assert bounds["alpha_sq"] == [0.01, 0.99]


def test_extremum(default_sweep):
    hi = default_sweep.extremum_max
    assert hi.alpha_sq == pytest.approx(0.15)
    assert hi.theta == pytest.approx(math.pi)
    assert hi.value / 1e-3 == pytest.approx(0.35373, abs=1e-4)
    lo = default_sweep.extremum_min
    assert lo.value < 0
    assert abs(lo.value) / 1e-3 == pytest.approx(0.3532, abs=1e-3)


def test_json_document():
    doc = json.loads(run_sweep(SweepConfig(0.01, 5, 7)).to_json())
    assert doc["config"] == {"eps": 0.01, "n_alpha": 5, "n_theta": 7, "mode": "analytic"}
    assert len(doc["rows"]) == 35
    assert set(doc["rows"][0]) == set(COLUMNS)
    assert set(doc["extrema"]) == {"max", "min"}
    assert set(doc["regions"]) == set(QUADRANTS)
    assert "max_divergence" not in doc


def test_simulated_mode_matches_analytic():
    a = run_sweep(SweepConfig(0.05, 9, 9))
    s = run_sweep(SweepConfig(0.05, 9, 9, "simulated"))
    assert np.max(np.abs(a.delta_f_sq - s.delta_f_sq)) <= AGREEMENT_TOL
    np.testing.assert_array_equal(a.negative_mask(), s.negative_mask())


def test_both_mode_records_divergence():
    r = run_sweep(SweepConfig(0.1, 11, 11, "both"))
    assert r.max_divergence is not None
    assert r.max_divergence <= AGREEMENT_TOL
    assert "max_divergence" in json.loads(r.to_json())


def test_parallel_workers_give_identical_rows():
    cfg = SweepConfig(0.02, 4, 5, "simulated")
    assert run_sweep(cfg, workers=2).to_csv() == run_sweep(cfg).to_csv()


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eps": 0.1, "n_alpha": 1},
        {"eps": 0.1, "n_theta": 0},
        {"eps": 0.1, "n_alpha": 2.5},
        {"eps": 1.0},
        {"eps": -0.1},
        {"eps": float("nan")},
        {"eps": 0.1, "mode": "exact"},
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ConfigInvalid):
        SweepConfig(**kwargs)
