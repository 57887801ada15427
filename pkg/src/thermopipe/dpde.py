"""Delay-PDE pipe model: transport delay in series with a filter PDE.

The medium temperature is tracked along the characteristics that reach the
outlet, ``Td(z, t) = Tm(z, phi(z, t))``. In these coordinates the wall
temperature can be eliminated and only a first-order-in-time filter remains.
Backward differences on ``n`` intervals give, per node ``i = 1..n``::

    d/dt (Td_i - k3_i Td_{i-1}) = k1_i (Td_{i-1} - Td_i) + k2_i (Ta_i - Td_i)

with ``Td_0(t) = Tin(t - tau(l, t))`` and ``Ta_i`` the ambient temperature
on the same characteristic. The left-hand side is integrated directly
through the transformed states ``S_i = Td_i - k3_i Td_{i-1}``, so the inlet
signal is never differentiated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .output import ModelOutput, probe_column
from .signals import characteristic_time
from .validation import check_time_grid


@dataclass(frozen=True)
class Dpde1Constants:
    k1: float
    k2: float
    k3: float


def dpde_constants(h1, h2, h3, v, dz):
    """Constant-flow filter coefficients for spatial step ``dz``."""
    if not (h1 > 0 and h2 > 0 and h3 >= 0 and v > 0 and dz > 0):
        raise ValueError("dpde_constants needs positive h1, h2, v, dz and non-negative h3")
    denom = v + h1 * dz
    return Dpde1Constants(k1=(h2 + h3) * v / denom, k2=h1 * h3 * dz / denom, k3=v / denom)


@dataclass
class DelayedField:
    """Delayed medium temperature on the characteristic grid, one row per time step."""

    t: np.ndarray
    grid: np.ndarray
    Td: np.ndarray
    v_del: np.ndarray
    phi: np.ndarray
    h1: np.ndarray

    @property
    def n(self):
        return self.grid.size - 1


@dataclass
class _Coefficients:
    times: np.ndarray
    phi: np.ndarray
    v_del: np.ndarray
    T_in_del: np.ndarray
    T_amb_del: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    dk3: np.ndarray
    h1: np.ndarray
    prehistory_hold: bool


def _coefficients(params, bc, n, dt, steps, t_start):
    """Node coefficients on the time grid ``t_start + k dt``, ``k = 0..steps``.

    The time derivative of the delayed velocity is a centred difference of
    ``v(phi(z_i, t))`` over ``t +- dt``.
    """
    length = params.length
    dz = length / n
    grid = np.linspace(0.0, length, n + 1)
    ext = t_start + dt * np.arange(-1, steps + 2)
    phi_ext = characteristic_time(bc.velocity, grid[None, :], ext[:, None], length)
    vdel_ext = bc.velocity(phi_ext)
    v_del = vdel_ext[1:-1]
    dv_del = (vdel_ext[2:] - vdel_ext[:-2]) / (2.0 * dt)
    phi = phi_ext[1:-1]
    times = ext[1:-1]
    v = bc.velocity(times)[:, None]

    if params.heat.has_affine:
        # frozen-coefficient approximation: rates follow the velocity the parcel had
        hs = np.vectorize(lambda u: params.h_at(u)[:3], otypes=[float, float, float])(v_del)
        h1, h2, h3 = hs
    else:
        d = params.derived
        h1 = np.full_like(v_del, d.h1)
        h2, h3 = d.h2, d.h3

    denom = v_del + h1 * dz
    k1 = (dv_del + (h2 + h3) * v) / denom
    k2 = h1 * h3 * dz * (v / v_del) / denom
    k3 = v_del / denom
    dk3 = h1 * dz * dv_del / denom**2
    return _Coefficients(
        times=times,
        phi=phi,
        v_del=v_del,
        T_in_del=bc.inlet(phi[:, 0]),
        T_amb_del=bc.ambient(phi),
        k1=k1,
        k2=k2,
        k3=k3,
        dk3=dk3,
        h1=h1,
        prehistory_hold=bool(phi[0, 0] < bc.velocity.t[0] or phi[0, 0] < bc.inlet.t[0]),
    )


def _initial_delayed(initial, bc, n):
    if initial is None:
        initial = float(bc.inlet.y[0])
    if np.ndim(initial) == 0:
        return np.full(n + 1, float(initial))
    Td = np.array(initial, dtype=float)
    if Td.shape != (n + 1,):
        raise ValueError(f"initial delayed profile must have {n + 1} entries")
    return Td


def reconstruct_wall(field, params=None):
    """Wall temperature on the characteristic grid from the delayed medium field.

    Uses ``Tw = v_del / h1 * dTd/dz + Td`` with backward differences; node 0
    takes the slope of the first interval. Returns an array shaped like
    ``field.Td``.
    """
    if field.n < 1:
        raise ValueError("wall reconstruction needs at least one spatial interval")
    dz = field.grid[1] - field.grid[0]
    slope = np.diff(field.Td, axis=1) / dz
    slope = np.concatenate([slope[:, :1], slope], axis=1)
    return field.v_del / field.h1 * slope + field.Td


def _physical_probes(field, probes, out_t):
    """Resample node histories from characteristic time back onto physical time."""
    columns, nodes = {}, {}
    for z in probes:
        node = int(np.argmin(np.abs(field.grid - float(z))))
        phys_t = field.phi[:, node]
        values = np.interp(out_t, phys_t, field.Td[:, node], left=np.nan, right=np.nan)
        columns[probe_column(float(z))] = values
        nodes[probe_column(float(z))] = node
    return columns, nodes


def simulate_dpde(
    params, bc, n=5, dt=0.05, t_end=200.0, initial=None, probes=(), output_dt=None, t_start=0.0,
    include_delayed_input=False,
):
    """Delay-PDE model discretised on ``n`` intervals.

    The outlet medium temperature equals the delayed field at ``z = l``; the
    wall temperature there is reconstructed from the field gradient. Interior
    probes are reported in physical time and are missing (NaN) where the
    characteristic through the probe has not yet reached the outlet.
    """
    if n < 1:
        raise ValueError("need at least one spatial interval (n >= 1)")
    steps, every = check_time_grid(dt, t_end, output_dt)
    c = _coefficients(params, bc, n, dt, steps, t_start)

    Td = _initial_delayed(initial, bc, n)
    Td[0] = c.T_in_del[0]
    S = Td[1:] - c.k3[0, 1:] * Td[:-1]
    history = np.empty((steps + 1, n + 1))

    for k in range(steps + 1):
        k3 = c.k3[k]
        Td[0] = c.T_in_del[k]
        for i in range(1, n + 1):
            Td[i] = S[i - 1] + k3[i] * Td[i - 1]
        history[k] = Td
        if k == steps:
            break
        dS = c.k1[k, 1:] * (Td[:-1] - Td[1:]) + c.k2[k, 1:] * (c.T_amb_del[k, 1:] - Td[1:])
        # the -dk3 * T term is stepped with the actual increment of k3, which keeps
        # uniform states and affine temperature maps exact in discrete time
        S = S + dt * dS - (c.k3[k + 1, 1:] - k3[1:]) * Td[:-1]

    grid = np.linspace(0.0, params.length, n + 1)
    field = DelayedField(c.times, grid, history, c.v_del, c.phi, c.h1)
    wall = reconstruct_wall(field)
    out_t = c.times[::every]
    columns, nodes = _physical_probes(field, probes, out_t)
    if include_delayed_input:
        columns["Tin_delayed"] = c.T_in_del[::every]
    meta = {
        "model": f"dpde{n}",
        "n": n,
        "dt": dt,
        "probe_nodes": nodes,
        "prehistory_hold": c.prehistory_hold,
        "ambient_sampling": "linear interpolation along characteristics",
    }
    return ModelOutput(out_t, history[::every, -1], wall[::every, -1], columns=columns, metadata=meta, field=field)


def simulate_dpde1(params, bc, dt=0.05, t_end=200.0, initial=None, output_dt=None, t_start=0.0,
                   include_delayed_input=False):
    """Single-interval reduction: one delay-differential equation with feedthrough.

    The state ``S = T - k3 * Tin(t - tau)`` removes the derivative of the
    delayed inlet temperature; the outlet is ``S + k3 * Tin(t - tau)``.
    """
    steps, every = check_time_grid(dt, t_end, output_dt)
    c = _coefficients(params, bc, 1, dt, steps, t_start)
    k1, k2, k3 = c.k1[:, 1], c.k2[:, 1], c.k3[:, 1]
    u, T_amb = c.T_in_del, c.T_amb_del[:, 1]

    T0 = float(bc.inlet.y[0]) if initial is None else float(initial)
    S = T0 - k3[0] * u[0]
    T = np.empty(steps + 1)
    for k in range(steps + 1):
        T[k] = S + k3[k] * u[k]
        if k == steps:
            break
        S = S + dt * (k1[k] * (u[k] - T[k]) + k2[k] * (T_amb[k] - T[k])) - (k3[k + 1] - k3[k]) * u[k]

    grid = np.array([0.0, params.length])
    history = np.column_stack([u, T])
    field = DelayedField(c.times, grid, history, c.v_del, c.phi, c.h1)
    wall = reconstruct_wall(field)
    columns = {"Tin_delayed": u[::every]} if include_delayed_input else {}
    meta = {"model": "dpde1", "n": 1, "dt": dt, "prehistory_hold": c.prehistory_hold}
    return ModelOutput(c.times[::every], T[::every], wall[::every, -1], columns=columns, metadata=meta, field=field)


def dpde_steady_state(params, v, T_in, T_amb, n):
    """Discrete fixed point of the ``n``-interval model for constant inputs."""
    d = params.derived
    k = dpde_constants(d.h1, d.h2, d.h3, v, params.length / n)
    T = T_in
    for _ in range(n):
        T = (k.k1 * T + k.k2 * T_amb) / (k.k1 + k.k2)
    return T

