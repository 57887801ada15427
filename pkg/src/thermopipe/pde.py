"""Upwind finite-difference solver for the medium/wall pipe PDE.

The spatial derivative is replaced by first-order backward differences on a
uniform grid, time is advanced with explicit Euler. The inflow node is
overwritten with the inlet temperature after every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .output import ModelOutput, probe_column
from .validation import check_time_grid, initial_profile, snap_probes


@dataclass
class FieldState:
    grid: np.ndarray
    Tm: np.ndarray
    Tw: np.ndarray
    t: float


class SpatialOperator:
    """Right-hand side of the semi-discretised system on ``n + 1`` nodes.

    ``wall=False`` gives the single-field model where the wall is lumped
    into an overall medium-ambient coefficient (rate ``h4``).
    """

    def __init__(self, n, params, wall=True):
        if n < 1:
            raise ValueError("need at least one spatial interval (n >= 1)")
        self.n = n
        self.params = params
        self.wall = wall
        self.dz = params.length / n
        self.grid = np.linspace(0.0, params.length, n + 1)

    def rates(self, Tm, Tw, v, T_amb):
        """Return ``(dTm, dTw)``; ``dTm[0]`` is zero because node 0 is the inflow boundary."""
        h1, h2, h3, h4 = self.params.h_at(v)
        dTm = np.zeros_like(Tm)
        transport = -v * (Tm[1:] - Tm[:-1]) / self.dz
        if self.wall:
            dTm[1:] = transport + h1 * (Tw[1:] - Tm[1:])
            dTw = h2 * (Tm - Tw) - h3 * (Tw - T_amb)
        else:
            dTm[1:] = transport + h4 * (T_amb - Tm[1:])
            dTw = None
        return dTm, dTw


def semidiscretize(n, params, wall=True):
    return SpatialOperator(n, params, wall=wall)


def _run(op, bc, dt, t_end, initial, probes, output_dt, t_start, name):
    steps, record_every = check_time_grid(dt, t_end, output_dt)
    cfl = bc.max_velocity(t_start, t_start + t_end) * dt / op.dz
    if cfl > 1.0:
        raise ValueError(f"CFL condition violated: v*dt/dz = {cfl:.4g} > 1")
    Tm, Tw = initial_profile(initial, bc, op.n)
    probe_nodes = snap_probes(probes, op.grid)

    times = t_start + dt * np.arange(steps + 1)
    v = bc.velocity(times)
    T_in = bc.inlet(times)
    T_amb = bc.ambient(times)
    Tm[0] = T_in[0]

    n_out = steps // record_every + 1
    out_t = np.empty(n_out)
    out_m = np.empty(n_out)
    out_w = np.empty(n_out)
    out_p = np.empty((n_out, len(probe_nodes)))

    def record(j, k):
        out_t[j] = times[k]
        out_m[j] = Tm[-1]
        out_w[j] = Tw[-1] if op.wall else np.nan
        for c, (_, node) in enumerate(probe_nodes):
            out_p[j, c] = Tm[node]

    record(0, 0)
    for k in range(steps):
        dTm, dTw = op.rates(Tm, Tw, v[k], T_amb[k])
        Tm += dt * dTm
        if op.wall:
            Tw += dt * dTw
        Tm[0] = T_in[k + 1]
        if (k + 1) % record_every == 0:
            record((k + 1) // record_every, k + 1)

    columns = {probe_column(z): out_p[:, c] for c, (z, _) in enumerate(probe_nodes)}
    meta = {
        "model": name,
        "n": op.n,
        "dt": dt,
        "cfl": cfl,
        "probe_nodes": {probe_column(z): int(node) for z, node in probe_nodes},
    }
    final = FieldState(op.grid, Tm, Tw, float(times[-1]))
    return ModelOutput(out_t, out_m, out_w if op.wall else None, columns=columns, metadata=meta, field=final)


def default_dt(params, bc, n, t_end, t_start=0.0, cfl=0.5, output_dt=None):
    """Largest step with ``max(v) * dt / dz <= cfl`` that divides the output interval."""
    dz = params.length / n
    dt_max = cfl * dz / bc.max_velocity(t_start, t_start + t_end)
    span = t_end if output_dt is None else output_dt
    return span / math.ceil(span / dt_max * (1 - 1e-12))


def simulate_pde(params, bc, n=200, dt=None, t_end=200.0, initial=None, probes=(), output_dt=None, t_start=0.0):
    """Medium and wall temperature with heat exchange to the ambient.

    Parameters
    ----------
    params : PipeParameters
    bc : BoundaryConditions
    n : int
        Number of spatial intervals (``n + 1`` nodes).
    dt : float, optional
        Time step; defaults to a Courant number of 0.5 at the peak velocity.
    initial : float or (array, array), optional
        Uniform temperature or explicit ``(Tm, Tw)`` profiles. Defaults to the
        first inlet sample.
    probes : sequence of float
        Interior positions; each snaps to the nearest grid node.
    """
    if dt is None:
        dt = default_dt(params, bc, n, t_end, t_start, output_dt=output_dt)
    return _run(SpatialOperator(n, params, wall=True), bc, dt, t_end, initial, probes, output_dt, t_start, f"pde{n}")


def simulate_simplified_pde(params, bc, n=200, dt=None, t_end=200.0, initial=None, probes=(), output_dt=None, t_start=0.0):
    """Single-field variant without wall storage (medium-ambient coefficient)."""
    if dt is None:
        dt = default_dt(params, bc, n, t_end, t_start, output_dt=output_dt)
    return _run(
        SpatialOperator(n, params, wall=False), bc, dt, t_end, initial, probes, output_dt, t_start, f"simplified_pde{n}"
    )
