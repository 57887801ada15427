"""Lumped outlet-temperature models: first-order lag, with and without input delay.

All three share one explicit Euler integrator::

    eps * dT/dt = v(t)/L * (T_in(t - d(t)) - T) + h4 * (T_amb(t) - T)

with ``d = 0`` for the ODE, ``d = tau(L, t)`` for the DDE and ``eps`` the
wall-capacity correction of the adapted DDE. Evaluating at an interior
point ``z0 < l`` replaces ``L`` by ``z0`` (``h4`` is length independent).
"""

from __future__ import annotations

import numpy as np

from .output import ModelOutput
from .signals import solve_delay
from .validation import check_time_grid


def _h4_series(params, v):
    if not params.heat.has_affine:
        return np.full_like(v, params.derived.h4)
    return np.array([params.h_at(vk)[3] for vk in v])


def _integrate(params, bc, dt, t_end, delayed, epsilon, position, initial, output_dt, t_start, name):
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    length = params.length if position is None else float(position)
    if not 0 < length <= params.length:
        raise ValueError(f"position must lie in (0, {params.length}]")
    steps, every = check_time_grid(dt, t_end, output_dt)
    times = t_start + dt * np.arange(steps + 1)
    v = bc.velocity(times)
    if delayed:
        tau = solve_delay(bc.velocity, times, length)
        T_in = bc.inlet(times - tau)
    else:
        T_in = bc.inlet(times)
    T_amb = bc.ambient(times)
    h4 = _h4_series(params, v)

    T = np.empty(steps + 1)
    T[0] = float(bc.inlet.y[0]) if initial is None else float(initial)
    for k in range(steps):
        rate = v[k] / length * (T_in[k] - T[k]) + h4[k] * (T_amb[k] - T[k])
        T[k + 1] = T[k] + dt * rate / epsilon

    meta = {"model": name, "dt": dt, "position": length, "epsilon": epsilon}
    if delayed:
        meta["prehistory_hold"] = bool(np.any(times - tau < bc.inlet.t[0]))
    columns = {"Tin_delayed": T_in} if delayed else {}
    return ModelOutput(times[::every], T[::every], None, columns={k: c[::every] for k, c in columns.items()}, metadata=meta)


def simulate_ode(params, bc, dt=0.05, t_end=200.0, position=None, initial=None, output_dt=None, t_start=0.0):
    """Undelayed first-order lag of the inlet temperature."""
    return _integrate(params, bc, dt, t_end, False, 1.0, position, initial, output_dt, t_start, "ode")


def simulate_dde(params, bc, dt=0.05, t_end=200.0, position=None, initial=None, output_dt=None, t_start=0.0):
    """First-order lag driven by the transport-delayed inlet temperature."""
    return _integrate(params, bc, dt, t_end, True, 1.0, position, initial, output_dt, t_start, "dde")


def simulate_adapted_dde(
    params, bc, dt=0.05, t_end=200.0, position=None, initial=None, output_dt=None, t_start=0.0, epsilon=None
):
    """Delayed lag with the derivative scaled by ``epsilon`` (defaults to ``params.heat.epsilon``)."""
    eps = params.heat.epsilon if epsilon is None else epsilon
    return _integrate(params, bc, dt, t_end, True, eps, position, initial, output_dt, t_start, "adapted_dde")


def lumped_steady_state(params, v, T_in, T_amb, position=None):
    """Fixed point shared by the ODE, DDE and adapted DDE for constant inputs."""
    length = params.length if position is None else position
    h4 = params.h_at(v)[3]
    a = v / length
    return (a * T_in + h4 * T_amb) / (a + h4)
