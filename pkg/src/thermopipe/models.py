"""Name-based access to every simulator, shared by the scenario runner and the fitters.

Model names: ``pde<n>`` (``pde`` alone means 200 intervals),
``simplified_pde<n>``, ``dpde<n>``, ``dpde1``, ``ode``, ``dde``,
``adapted_dde``.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .dpde import simulate_dpde, simulate_dpde1
from .lumped import simulate_adapted_dde, simulate_dde, simulate_ode
from .output import probe_column
from .pde import default_dt, simulate_pde, simulate_simplified_pde

PDE_DEFAULT_N = 200
DPDE_DEFAULT_N = 5
LUMPED = ("ode", "dde", "adapted_dde")

_NAME = re.compile(r"^(pde|simplified_pde|dpde)(\d*)$")


def parse_model_name(name):
    """Split a model name into ``(family, n)``; lumped models have ``n = None``."""
    key = name.strip().lower()
    if key in LUMPED:
        return key, None
    m = _NAME.match(key)
    if not m:
        raise ValueError(f"unknown model {name!r}; expected pde<n>, simplified_pde<n>, dpde<n>, ode, dde or adapted_dde")
    family, digits = m.groups()
    n = int(digits) if digits else (DPDE_DEFAULT_N if family == "dpde" else PDE_DEFAULT_N)
    if n < 1:
        raise ValueError(f"{name}: need at least one interval")
    return family, n


def has_wall(name):
    family, _ = parse_model_name(name)
    return family in ("pde", "dpde")


def run_model(name, params, bc, t_end, dt=None, output_dt=None, probes=(), initial=None, t_start=0.0, pde_dt=None):
    """Simulate ``name`` and return its :class:`ModelOutput`.

    ``dt`` applies to the delay and lumped models (default 0.05 s). The
    finite-difference PDEs use ``pde_dt``, by default the step at Courant
    number 0.5.
    """
    family, n = parse_model_name(name)
    step = 0.05 if dt is None else dt
    common = dict(t_end=t_end, output_dt=output_dt, t_start=t_start)
    if family in ("pde", "simplified_pde"):
        if pde_dt is None:
            pde_dt = default_dt(params, bc, n, t_end, t_start, output_dt=output_dt)
        sim = simulate_pde if family == "pde" else simulate_simplified_pde
        out = sim(params, bc, n=n, dt=pde_dt, initial=_uniform(initial), probes=probes, **common)
    elif family == "dpde":
        if n == 1 and not probes:
            out = simulate_dpde1(params, bc, dt=step, initial=_uniform(initial), **common)
        else:
            out = simulate_dpde(params, bc, n=n, dt=step, initial=_uniform(initial), probes=probes, **common)
    else:
        sim = {"ode": simulate_ode, "dde": simulate_dde, "adapted_dde": simulate_adapted_dde}[family]
        out = sim(params, bc, dt=step, initial=_uniform(initial), **common)
        for z in probes:
            inner = sim(params, bc, dt=step, position=z, initial=_uniform(initial), **common)
            out.columns[probe_column(float(z))] = inner.Tm_out
    out.metadata["model"] = name
    return out


def _uniform(initial):
    return None if initial is None else float(initial)


def simulate_at(name, params, bc, times, dt=None, initial=None, pde_dt=None):
    """Run ``name`` over ``[times[0], times[-1]]`` and return ``(output, Tm, Tw)`` sampled at ``times``.

    The step is shrunk so that it divides the span. ``Tw`` is ``None`` for
    models without a wall.
    """
    times = np.asarray(times, dtype=float)
    span = float(times[-1] - times[0])
    if not span > 0:
        raise ValueError("need at least two increasing sample times")
    step = 0.05 if dt is None else dt
    step = span / max(1, math.ceil(span / step * (1 - 1e-12)))
    out = run_model(name, params, bc, span, dt=step, t_start=float(times[0]), initial=initial, pde_dt=pde_dt)
    Tm = np.interp(times, out.t, out.Tm_out)
    Tw = None if out.Tw_out is None else np.interp(times, out.t, out.Tw_out)
    return out, Tm, Tw
