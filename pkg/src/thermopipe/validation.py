"""Input checks shared by the simulators and the estimator wrappers."""

from __future__ import annotations

import math

import numpy as np

from .signals import BoundaryConditions, Signal

BOUNDARY_COLUMNS = ("t", "v", "Tin", "Tamb")


def check_time_grid(dt, t_end, output_dt=None):
    """Number of steps and the recording stride for a fixed-step run."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    steps = int(round(t_end / dt))
    if steps < 1 or not math.isclose(steps * dt, t_end, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(f"t_end={t_end} is not a whole multiple of dt={dt}")
    if output_dt is None:
        return steps, 1
    every = int(round(output_dt / dt))
    if every < 1 or not math.isclose(every * dt, output_dt, rel_tol=1e-9) or steps % every:
        raise ValueError(f"output_dt={output_dt} must be a multiple of dt dividing t_end")
    return steps, every


def initial_profile(initial, bc, n):
    """``(Tm, Tw)`` arrays of length ``n + 1``; default is the first inlet sample."""
    if initial is None:
        initial = float(bc.inlet.y[0])
    if np.ndim(initial) == 0:
        value = float(initial)
        return np.full(n + 1, value), np.full(n + 1, value)
    Tm, Tw = (np.array(a, dtype=float) for a in initial)
    if Tm.shape != (n + 1,) or Tw.shape != (n + 1,):
        raise ValueError(f"initial profiles must have {n + 1} entries")
    return Tm, Tw


def snap_probes(probes, grid):
    """Map each requested position to ``(z, nearest node index)``."""
    out = []
    for z in probes:
        z = float(z)
        if not grid[0] <= z <= grid[-1]:
            raise ValueError(f"probe position {z} outside [0, {grid[-1]}]")
        out.append((z, int(np.argmin(np.abs(grid - z)))))
    return out


def check_boundary_array(X):
    """Validate an estimator input array with columns ``t, v, Tin, Tamb``."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(BOUNDARY_COLUMNS):
        raise ValueError(f"expected an array of shape (n_samples, 4) with columns {BOUNDARY_COLUMNS}")
    if X.shape[0] < 2:
        raise ValueError("need at least two samples")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains NaN or infinity")
    if np.any(np.diff(X[:, 0]) <= 0):
        raise ValueError("time column must be strictly increasing")
    if np.any(X[:, 1] <= 0):
        raise ValueError("velocity column must be strictly positive")
    return X


def boundary_from_array(X):
    X = check_boundary_array(X)
    t = X[:, 0]
    return BoundaryConditions(
        Signal(t, X[:, 1], name="v", positive=True),
        Signal(t, X[:, 2], name="Tin"),
        Signal(t, X[:, 3], name="Tamb"),
    )


def check_targets(y, n_samples):
    """Targets as a 2-D array ``(n_samples, 1 or 2)``: outlet medium, optional outlet wall."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if y.ndim != 2 or y.shape[0] != n_samples or y.shape[1] not in (1, 2):
        raise ValueError("y must have shape (n_samples,) or (n_samples, 2)")
    return y
