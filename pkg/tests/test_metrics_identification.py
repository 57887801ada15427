import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermopipe import MEASUREMENT_PARAMS, BoundaryConditions, MeasurementSet, Signal, identify, max_error, rms_error
from thermopipe.identification import apply_fit
from thermopipe.metrics import aligned_difference, error_pair
from thermopipe.models import run_model

from conftest import SCENARIOS


def test_hand_examples():
    ref = Signal([0, 1, 2], [1, 2, 3])
    assert rms_error(ref, Signal([0, 1, 2], [1, 2, 5])) == pytest.approx(1.15470053837925, rel=1e-14)
    assert max_error(Signal([0, 1], [1, 2]), Signal([0, 1], [0, 0])) == 2.0
    assert error_pair(ref, ref) == (0.0, 0.0)


def test_candidate_is_resampled_onto_reference_grid():
    ref = Signal([0, 1, 2, 3], [0, 0, 0, 0])
    cand = Signal([0.5, 2.5], [1, 3])
    t, diff = aligned_difference(ref, cand)
    assert np.array_equal(t, [1, 2]) and np.allclose(diff, [1.5, 2.5])
    with pytest.raises(ValueError):
        rms_error(ref, Signal([5, 6], [0, 0]))


@settings(max_examples=50)
@given(st.lists(st.floats(-100, 100), min_size=2, max_size=30), st.floats(-50, 50))
def test_constant_offset(values, c):
    t = np.arange(len(values), dtype=float)
    a = Signal(t, values)
    b = Signal(t, np.asarray(values) + c)
    assert rms_error(a, b) == pytest.approx(abs(c), abs=1e-12)
    assert max_error(a, b) == pytest.approx(abs(c), abs=1e-12)


@settings(max_examples=50)
@given(st.lists(st.floats(-100, 100), min_size=2, max_size=30))
def test_resampling_onto_own_grid(values):
    t = np.cumsum(np.linspace(0.5, 1.5, len(values)))
    s = Signal(t, values)
    assert np.array_equal(s.resample(t).y, s.y)
    assert rms_error(s, s) == 0.0


def test_measurement_csv_with_blanks(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(
        "t,Tin,Tout,Tw_out,Tm_probe,v,Tamb\n"
        "0,20,20,20,20,0.1,18\n"
        "1,21,20.1,,20.5,0.1,\n"
        "2,22,20.3,20.2,,0.12,\n"
    )
    m = MeasurementSet.from_csv(path, probe_position=0.54)
    assert np.array_equal(m.T_w.t, [0, 2]) and np.array_equal(m.T_probe.t, [0, 1])
    assert m.T_amb(1.5) == 18.0
    m.to_csv(tmp_path / "back.csv")
    again = MeasurementSet.from_csv(tmp_path / "back.csv", probe_position=0.54)
    assert np.allclose(again.T_out.y, m.T_out.y)


def test_measurement_csv_errors(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("t,Tin,Tout,v\n0,20,20,0.1\n1,20,,0.1\n")
    with pytest.raises(ValueError, match="Tamb"):
        MeasurementSet.from_csv(path)
    with pytest.raises(ValueError, match="every row"):
        MeasurementSet.from_csv(path, ambient=20.0)
    with pytest.raises(FileNotFoundError, match="nope.csv"):
        MeasurementSet.from_csv(tmp_path / "nope.csv")


def test_shipped_fixture_loads():
    m = MeasurementSet.from_csv(SCENARIOS / "synthetic_measurement.csv", probe_position=0.54)
    assert m.t.size == 601 and m.T_w is not None and m.T_probe is not None


@pytest.fixture(scope="module")
def synthetic():
    truth = MEASUREMENT_PARAMS
    bc = BoundaryConditions(Signal([0, 100, 200, 300], [0.1, 0.25, 0.15, 0.2], positive=True),
                            Signal([0, 30, 120, 200, 300], [25, 70, 70, 40, 55]), 21.0)
    out = run_model("pde20", truth, bc, 300.0, output_dt=1.0, initial=25.0)
    return MeasurementSet.from_output(out, bc)


def test_loss_never_increases(synthetic):
    start = MEASUREMENT_PARAMS.with_heat(alpha_mw=2000.0, alpha_wa=70.0)
    res = identify(synthetic, "pde20", params=start, fit_wall=True, maxiter=40)
    assert res.loss <= res.initial_loss
    assert res.fitted == ("alpha_mw", "alpha_wa") and res.iterations <= 40
    assert "alpha_mw = " in res.to_report()


def test_bounds_excluding_truth_pin_the_result(synthetic):
    start = MEASUREMENT_PARAMS.with_heat(alpha_mw=1500.0)
    res = identify(synthetic, "pde20", params=start, bounds={"alpha_mw": (100.0, 2000.0)}, fit_wall=True, maxiter=80)
    assert res.alpha_mw == pytest.approx(2000.0, rel=1e-6)
    assert "alpha_mw" in res.at_bound
    assert res.residual > 1e-3


def test_guess_outside_bounds_is_rejected(synthetic):
    with pytest.raises(ValueError, match="outside its bounds"):
        identify(synthetic, "pde20", params=MEASUREMENT_PARAMS, bounds={"alpha_wa": (100.0, 200.0)})
    with pytest.raises(ValueError):
        identify(synthetic, "ode", params=MEASUREMENT_PARAMS)


def test_apply_fit_substitutes_only_fitted(synthetic):
    res = identify(synthetic, "adapted_dde", params=MEASUREMENT_PARAMS.with_heat(epsilon=0.8), maxiter=5)
    p = apply_fit(MEASUREMENT_PARAMS, res)
    assert p.heat.epsilon == res.epsilon and p.heat.alpha_mw == MEASUREMENT_PARAMS.heat.alpha_mw
