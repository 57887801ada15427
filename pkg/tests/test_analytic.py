import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from thermopipe import SIMULATION_PARAMS, Signal, bessel_i1, build_kernel, convolve_constant_flow, impulse_response, kernel_mass
from thermopipe.analytic import dirac_weight, impulse_response_series, steady_outlet, steady_wall

P = SIMULATION_PARAMS
D = P.derived


def test_bessel_oracle_values():
    assert bessel_i1(0.0) == 0.0
    # tests/oracles.py, 40-digit reference
    assert bessel_i1(1.0) == pytest.approx(0.565159103992485, rel=1e-14)
    assert bessel_i1(2.0) == pytest.approx(1.59063685463733, rel=1e-14)
    with pytest.raises(ValueError):
        bessel_i1(-1.0)


@settings(max_examples=100)
@given(st.floats(0.0, 60.0))
def test_bessel_matches_scipy(x):
    assert bessel_i1(x) == pytest.approx(float(special.i1(x)), rel=1e-13, abs=1e-300)


def test_without_coupling_response_is_pure_delay():
    g, w = impulse_response(5.0, np.linspace(0, 50, 11), 0.0, D.h2, 0.5)
    assert w == 1.0 and np.all(g == 0.0)
    k = build_kernel(5.0, 0.0, D.h2, 0.5, 0.1)
    assert k.mass == 1.0


def test_small_time_limit():
    g0, w = impulse_response(5.0, 0.0, D.h1, D.h2, 0.5)
    assert w == pytest.approx(0.558182400631406, rel=1e-13)
    assert g0 == pytest.approx(0.0220472084650104, rel=1e-13)
    g_small, _ = impulse_response(5.0, 1e-9, D.h1, D.h2, 0.5)
    assert g_small == pytest.approx(g0, rel=1e-7)


def test_series_matches_bessel_form():
    rng = np.random.default_rng(7)
    for z, t in zip(rng.uniform(0.1, 5.0, 50), rng.uniform(1e-3, 400.0, 50)):
        g, _ = impulse_response(z, t, D.h1, D.h2, 0.5)
        assert impulse_response_series(z, t, D.h1, D.h2, 0.5) == pytest.approx(g, rel=1e-10)


def test_kernel_mass_simulation_pipe():
    assert kernel_mass(5.0, D.h1, D.h2, 0.5) == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=25)
@given(st.floats(1e-3, 0.5), st.floats(1e-3, 0.5), st.floats(0.1, 20.0), st.floats(0.05, 3.0))
def test_kernel_mass_is_one(h1, h2, z, v):
    assert kernel_mass(z, h1, h2, v) == pytest.approx(1.0, abs=1e-6)


def test_sampled_kernel_mass_and_nonnegativity():
    k = build_kernel(5.0, D.h1, D.h2, 0.5, 0.1)
    assert np.all(k.g >= 0)
    assert k.dirac_weight == dirac_weight(5.0, D.h1, 0.5)
    assert k.mass == pytest.approx(1.0, abs=1e-5)
    assert k.dt <= 0.1


def test_convolution_dc_gain():
    iso = P.insulated()
    t = np.linspace(0, 200, 401)
    # trapezoid error on the kernel is O(dt^2): about 2e-5 of the level at dt = 0.5
    coarse = convolve_constant_flow(Signal.constant(37.0), iso, 0.5, 5.0, t)
    fine = convolve_constant_flow(Signal.constant(37.0), iso, 0.5, 5.0, t, dt=0.05)
    assert np.allclose(coarse.Tm_out, 37.0, atol=37.0 * 5e-5)
    assert np.allclose(fine.Tm_out, 37.0, atol=37.0 * 5e-7)


def test_convolution_rejects_unsupported_cases():
    t = np.linspace(0, 10, 11)
    with pytest.raises(ValueError, match="insulated"):
        convolve_constant_flow(Signal.constant(20.0), P, 0.5, 5.0, t)
    with pytest.raises(ValueError, match="constant velocity"):
        convolve_constant_flow(Signal.constant(20.0), P.insulated(), Signal([0, 10], [0.5, 0.6]), 5.0, t)


def test_narrow_pulse():
    iso = P.insulated()
    t = np.arange(0.0, 100.0, 0.01)
    pulse = Signal([0, 1.0, 1.01, 1.02, 1.03], [0, 0, 100.0, 0, 0])
    out = convolve_constant_flow(pulse, iso, 0.5, 5.0, t, dt=0.01)
    k = int(np.argmax(out.Tm_out))
    # the delayed Dirac part dominates: peak sits at inlet pulse time plus l / v
    assert out.t[k] == pytest.approx(11.01, abs=0.011)
    assert out.Tm_out[k] == pytest.approx(100.0 * dirac_weight(5.0, D.h1, 0.5), rel=0.01)
    # the filtered remainder lags behind and carries the rest of the pulse area
    tail = out.Tm_out[out.t > 11.1]
    assert tail.max() > 0 and tail.max() < 0.1 * out.Tm_out[k]


def test_steady_outlet_values_and_limits():
    assert steady_outlet(P, 0.5, 60.0, 20.0) == pytest.approx(57.6165567490208, rel=1e-13)
    assert steady_outlet(P, 0.5, 60.0, 20.0) == pytest.approx(57.6, abs=0.05)
    assert steady_outlet(P.insulated(), 0.5, 60.0, 20.0) == 60.0
    assert steady_outlet(P.with_length(1e5), 0.5, 60.0, 20.0) == pytest.approx(20.0, abs=1e-9)
    assert steady_wall(P, 0.5, 20.0, 20.0) == pytest.approx(20.0, rel=1e-15)


def test_convolution_tracks_step_response():
    iso = P.insulated()
    t = np.linspace(0, 200, 2001)
    out = convolve_constant_flow(Signal.step(0.0, 20.0, 60.0), iso, 0.5, 5.0, t)
    w = dirac_weight(5.0, D.h1, 0.5)
    # just after the transit time the outlet has jumped by the Dirac weight only
    k = np.searchsorted(t, 10.1)
    assert out.Tm_out[k] == pytest.approx(20.0 + 40.0 * w, abs=0.1)
    assert np.all(np.diff(out.Tm_out) >= -1e-9)
    assert out.Tm_out[-1] == pytest.approx(60.0, abs=0.05)
    assert math.isclose(out.metadata["dirac_weight"], w)


@settings(max_examples=100)
@given(st.floats(0.0, 700.0))
def test_scaled_bessel_matches_scipy(x):
    from thermopipe.analytic import _i1_scaled

    assert _i1_scaled(x) == pytest.approx(float(special.i1e(x)), rel=1e-13, abs=1e-300)


def test_response_far_past_peak_is_finite():
    # strong coupling and slow flow push the Bessel argument past the float range
    g, _ = impulse_response(6.0, np.array([1e3, 1e5]), 0.5, 0.5, 0.0625)
    assert np.all(np.isfinite(g)) and np.all(g >= 0)
