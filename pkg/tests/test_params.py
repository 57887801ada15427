import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from thermopipe import (
    MEASUREMENT_PARAMS,
    SIMULATION_PARAMS,
    HeatTransferSpec,
    MaterialProperties,
    PipeGeometry,
    PipeParameters,
    alpha_ma,
    h_parameters,
    load_parameters,
    mean_radii,
    overall_coefficients,
)
from thermopipe.params import parse_key_values, save_parameters

# tests/oracles.py, 40-digit mpmath with quadrature-averaged radial profile
ORACLE = dict(
    rbar_m=0.00138277165673051,
    rbar_w=0.00111464298064712,
    bar_alpha_mw=935.332440577447,
    bar_alpha_wa=79.6448974962458,
    alpha_ma=73.3951917548089,
    h1=0.0583069487163404,
    h2=0.0677418658698332,
    h3=0.00797825654968219,
    h4=0.00632820893234253,
)

GEOM = SIMULATION_PARAMS.geometry
MAT = SIMULATION_PARAMS.material
HEAT = SIMULATION_PARAMS.heat


def test_derived_coefficients_match_oracle():
    d = SIMULATION_PARAMS.derived
    for key, expected in ORACLE.items():
        assert getattr(d, key) == pytest.approx(expected, rel=1e-12), key


def test_mean_radii_rounded_examples():
    rbar_m, rbar_w = mean_radii(GEOM)
    # the quoted examples are loosely rounded; the oracle gives 1.38277e-3,
    # 1.11464e-3 and a sum of 2.49741e-3
    assert rbar_m == pytest.approx(1.380e-3, rel=3e-3)
    assert rbar_w == pytest.approx(1.116e-3, rel=3e-3)
    assert rbar_m + rbar_w == pytest.approx(2.496e-3, rel=1e-3)


def test_mean_radii_reject_degenerate():
    with pytest.raises(ValueError):
        PipeGeometry(1.0, 0.01, 0.01)
    with pytest.raises(ValueError):
        PipeGeometry(1.0, 0.02, 0.01)


def test_overall_coefficient_examples():
    bar_mw, bar_wa = overall_coefficients(GEOM, MAT, HEAT)
    assert bar_mw == pytest.approx(935.4, abs=0.15)
    assert bar_wa == pytest.approx(79.64, abs=0.01)
    stiff = MaterialProperties(MAT.rho_m, MAT.cp_m, MAT.rho_w, MAT.cp_w, 1e300)
    assert overall_coefficients(GEOM, stiff, HEAT)[0] == pytest.approx(HEAT.alpha_mw, rel=1e-12)


def test_alpha_ma_table_values():
    assert alpha_ma(GEOM, MAT, HEAT) == pytest.approx(73.39, abs=0.01)
    m = MEASUREMENT_PARAMS
    assert alpha_ma(m.geometry, m.material, m.heat) == pytest.approx(46.0, abs=0.01)


def test_alpha_ma_zero_resistance_limit():
    stiff = MaterialProperties(MAT.rho_m, MAT.cp_m, MAT.rho_w, MAT.cp_w, 1e30)
    assert alpha_ma(GEOM, stiff, HeatTransferSpec(1e30, 1e30)) > 1e20


def test_h_parameter_examples():
    h1, h2, h3, h4 = h_parameters(GEOM, MAT, HEAT)
    assert (round(h1, 4), round(h2, 4), round(h3, 5), round(h4, 5)) == (0.0583, 0.0677, 0.00798, 0.00633)


def test_affine_mode_degenerate_and_missing():
    affine = HeatTransferSpec(alpha_mw=1.0, alpha_wa=80.0, alpha_mw0=1000.0, alpha_mw1=0.0)
    assert h_parameters(GEOM, MAT, affine, v=0.7) == pytest.approx(h_parameters(GEOM, MAT, HEAT), rel=1e-14)
    with pytest.raises(ValueError):
        h_parameters(GEOM, MAT, HEAT, v=0.5)


def test_affine_mode_grows_with_velocity():
    p = SIMULATION_PARAMS.with_heat(alpha_mw0=800.0, alpha_mw1=400.0)
    slow, fast = p.h_at(0.2), p.h_at(1.0)
    assert fast[0] > slow[0] and fast[1] > slow[1] and fast[2] == slow[2]


def test_doubling_medium_capacity():
    heavy = MaterialProperties(2 * MAT.rho_m, MAT.cp_m, MAT.rho_w, MAT.cp_w, MAT.lambda_w)
    a, b = h_parameters(GEOM, MAT, HEAT), h_parameters(GEOM, heavy, HEAT)
    assert b[0] == pytest.approx(a[0] / 2) and b[3] == pytest.approx(a[3] / 2)
    assert b[1] == a[1] and b[2] == a[2]


def test_invariant_violations_rejected():
    with pytest.raises(ValueError):
        MaterialProperties(0, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        HeatTransferSpec(alpha_mw=0, alpha_wa=1)
    with pytest.raises(ValueError):
        HeatTransferSpec(alpha_mw=1, alpha_wa=1, epsilon=0)
    with pytest.raises(ValueError):
        HeatTransferSpec(alpha_mw=1, alpha_wa=1, alpha_mw0=1.0)


def test_insulated_pipe_has_no_ambient_coupling():
    d = SIMULATION_PARAMS.insulated().derived
    assert d.h3 == 0 and d.h4 == 0 and d.h1 == SIMULATION_PARAMS.derived.h1


radii = st.tuples(st.floats(1e-3, 0.5), st.floats(1.001, 5.0)).map(lambda p: (p[0], p[0] * p[1]))
positive = st.floats(1.0, 1e5)


@given(radii)
def test_mean_radii_sum_identity(r):
    rm, rw = r
    rbar_m, rbar_w = mean_radii(PipeGeometry(1.0, rm, rw))
    assert rbar_m > 0 and rbar_w > 0
    assert rbar_m + rbar_w == pytest.approx(rm * math.log(rw / rm), rel=1e-9)


@given(radii, positive, positive, st.floats(0.1, 500))
def test_alpha_ma_literal_formula(r, a_mw, a_wa, lam):
    geom = PipeGeometry(1.0, *r)
    mat = MaterialProperties(1000, 4000, 8000, 500, lam)
    inv = 1 / alpha_ma(geom, mat, HeatTransferSpec(a_mw, a_wa))
    expected = 1 / a_mw + 1 / a_wa + r[0] / lam * math.log(r[1] / r[0])
    assert abs(inv - expected) <= 1e-12 * inv


@given(radii, positive, positive, st.floats(0.1, 500), st.sampled_from(["a_mw", "a_wa", "lam"]))
def test_alpha_ma_monotone(r, a_mw, a_wa, lam, which):
    geom = PipeGeometry(1.0, *r)
    base = dict(a_mw=a_mw, a_wa=a_wa, lam=lam)
    bumped = {**base, which: base[which] * 1.5}

    def value(p):
        return alpha_ma(geom, MaterialProperties(1000, 4000, 8000, 500, p["lam"]), HeatTransferSpec(p["a_mw"], p["a_wa"]))

    assert value(bumped) > value(base)


@given(radii, positive, positive, st.floats(0.5, 100))
def test_derived_invariants(r, a_mw, a_wa, lam):
    p = PipeParameters(PipeGeometry(1.0, *r), MaterialProperties(1000, 4000, 8000, 500, lam), HeatTransferSpec(a_mw, a_wa))
    d = p.derived
    assert d.bar_alpha_mw < a_mw and d.bar_alpha_wa < a_wa
    assert d.alpha_ma < min(a_mw, a_wa)
    assert min(d.h1, d.h2, d.h3, d.h4) > 0


def _radial_flux(geom, lam, a_mw, a_wa, T_m, T_amb):
    """Integrate the stationary radial conduction ODE (shooting on the inner wall temperature).

    The outer film coefficient is taken per unit inner surface, the convention
    under which the mean-radius formulas are exact.
    """
    rm, rw = geom.inner_radius, geom.outer_radius

    def shoot(Tw_in):
        q = a_mw * (T_m - Tw_in)  # flux per inner area
        # (r T')' = 0 -> state (T, r T')
        sol = solve_ivp(lambda r, y: [y[1] / r, 0.0], (rm, rw), [Tw_in, -q * rm / lam],
                        rtol=1e-13, atol=1e-14, dense_output=True)
        return q, sol

    # linear in Tw_in: two shots determine the root of the outer boundary condition
    def mismatch(Tw_in):
        q, sol = shoot(Tw_in)
        return q - a_wa * (sol.y[0, -1] - T_amb), sol

    f0, _ = mismatch(T_m)
    f1, _ = mismatch(T_amb)
    root = T_m + f0 * (T_amb - T_m) / (f0 - f1)
    q, sol = shoot(root)
    r = np.linspace(rm, rw, 20001)
    T = sol.sol(r)[0]
    mean = np.trapezoid(T * r, r) * 2 / (rw**2 - rm**2)
    return q, mean


def test_stationary_consistency_with_radial_solution():
    geom, lam = GEOM, MAT.lambda_w
    q, mean = _radial_flux(geom, lam, HEAT.alpha_mw, HEAT.alpha_wa, 60.0, 20.0)
    bar_mw, bar_wa = overall_coefficients(geom, MAT, HEAT)
    assert bar_mw * (60.0 - mean) == pytest.approx(q, rel=1e-7)
    assert bar_wa * (mean - 20.0) == pytest.approx(q, rel=1e-7)


def test_stationary_consistency_exact_average():
    # closed-form average of the logarithmic profile instead of a sampled one
    rm, rw, lam = GEOM.inner_radius, GEOM.outer_radius, MAT.lambda_w
    a_mw, a_wa, T_m, T_amb = HEAT.alpha_mw, HEAT.alpha_wa, 60.0, 20.0
    resist = 1 / a_mw + rm / lam * math.log(rw / rm) + 1 / a_wa
    q = (T_m - T_amb) / resist
    T_in = T_m - q / a_mw
    c = q * rm / lam
    mean = T_in - c * (rw**2 * math.log(rw / rm) / (rw**2 - rm**2) - 0.5)
    bar_mw, bar_wa = overall_coefficients(GEOM, MAT, HEAT)
    assert abs(bar_mw * (T_m - mean) / q - 1) <= 1e-10
    assert abs(bar_wa * (mean - T_amb) / q - 1) <= 1e-10


def test_parameter_file_round_trip(tmp_path):
    p = SIMULATION_PARAMS.with_heat(alpha_mw0=900.0, alpha_mw1=120.0)
    save_parameters(p, tmp_path / "pipe.txt")
    q = load_parameters(tmp_path / "pipe.txt")
    assert q == p


def test_parameter_file_units_and_errors(tmp_path):
    text = (
        "# rig\nlength_m = 1.62\ninner_radius_mm = 7.7\nouter_radius_mm = 10.65\n"
        "rho_m = 997.04\ncp_m = 4179\nrho_w = 7856\ncp_w = 500\nlambda_w = 20\n"
        "alpha_mw = 3052.87\nalpha_wa = 46.98\nepsilon = 0.91\n"
    )
    (tmp_path / "rig.txt").write_text(text)
    p = load_parameters(tmp_path / "rig.txt")
    assert p.geometry.inner_radius == pytest.approx(7.7e-3)
    assert p.derived.alpha_ma == pytest.approx(MEASUREMENT_PARAMS.derived.alpha_ma, rel=1e-12)
    with pytest.raises(KeyError):
        PipeParameters.from_dict({"length": 1})
    with pytest.raises(ValueError):
        parse_key_values("no equals sign")
    with pytest.raises(ValueError):
        PipeParameters.from_dict({"length_m": 1})
