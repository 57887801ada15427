"""Sampled boundary signals and the variable transport delay.

A :class:`Signal` is piecewise linear between samples and held constant
outside them. For velocity signals the running integral of the flow is
stored as prefix sums, which makes the implicit delay equation

    integral_{t - tau}^{t} v(s) ds = distance

solvable in closed form: locate the sample interval with a binary search,
then solve the quadratic of the linear piece.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


class Signal:
    """Piecewise-linear time series with constant hold at both ends.

    Parameters
    ----------
    times, values : array_like
        Sample times (strictly increasing) and values.
    name : str
        Column name used for CSV output.
    positive : bool
        Require strictly positive samples (velocity signals).
    """

    def __init__(self, times, values, name="value", positive=False):
        times = np.atleast_1d(np.asarray(times, dtype=float))
        values = np.atleast_1d(np.asarray(values, dtype=float))
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if times.size == 0:
            raise ValueError("a signal needs at least one sample")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ValueError("signal samples must be finite")
        if np.any(np.diff(times) <= 0):
            raise ValueError("signal times must be strictly increasing")
        if positive and np.any(values <= 0):
            raise ValueError(f"{name} signal must be strictly positive at every sample")
        self.t = times
        self.y = values
        self.name = name
        self.positive = positive
        self.t.flags.writeable = False
        self.y.flags.writeable = False
        # cumulative trapezoidal integral at the samples
        self._cum = np.concatenate(([0.0], np.cumsum(0.5 * (self.y[1:] + self.y[:-1]) * np.diff(self.t))))
        self._slope = np.diff(self.y) / np.diff(self.t)

    @classmethod
    def constant(cls, value, name="value", positive=False, t0=0.0):
        return cls([t0], [value], name=name, positive=positive)

    @classmethod
    def ramp(cls, t0, t1, v0, v1, name="value", positive=False):
        if not t1 > t0:
            raise ValueError("ramp needs t1 > t0")
        return cls([t0, t1], [v0, v1], name=name, positive=positive)

    @classmethod
    def step(cls, t, v0, v1, name="value", positive=False, width=1e-9):
        """Jump from ``v0`` to ``v1`` at ``t``, realised as a ramp of ``width`` seconds."""
        return cls([t, t + width], [v0, v1], name=name, positive=positive)

    def __call__(self, t):
        out = np.interp(t, self.t, self.y)
        return float(out) if np.ndim(out) == 0 else out

    def __len__(self):
        return self.t.size

    def __repr__(self):
        return f"Signal({self.name!r}, n={self.t.size}, t=[{self.t[0]:g}, {self.t[-1]:g}])"

    @property
    def is_constant(self):
        return bool(np.all(self.y == self.y[0]))

    def renamed(self, name, positive=None):
        return Signal(self.t, self.y, name=name, positive=self.positive if positive is None else positive)

    def resample(self, times):
        return Signal(times, self(np.asarray(times, dtype=float)), name=self.name, positive=self.positive)

    def antiderivative(self, t):
        """Integral of the signal from the first sample time to ``t`` (negative before it)."""
        t = np.asarray(t, dtype=float)
        t0, tn = self.t[0], self.t[-1]
        k = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, max(self.t.size - 2, 0))
        if self.t.size == 1:
            out = self.y[0] * (t - t0)
        else:
            s = t - self.t[k]
            inner = self._cum[k] + self.y[k] * s + 0.5 * self._slope[k] * s * s
            out = np.where(t < t0, self.y[0] * (t - t0), np.where(t > tn, self._cum[-1] + self.y[-1] * (t - tn), inner))
        return float(out) if out.ndim == 0 else out

    def piece(self, t):
        """Index of the linear piece containing ``t``; -1 before and ``len - 1`` after the samples."""
        return np.searchsorted(self.t, np.asarray(t, dtype=float), side="right") - 1

    def slope_at(self, t):
        """Slope of the piece containing ``t`` (zero in the hold regions)."""
        k = self.piece(t)
        if self.t.size == 1:
            return np.zeros_like(np.asarray(t, dtype=float))
        inside = (k >= 0) & (k < self.t.size - 1)
        return np.where(inside, self._slope[np.clip(k, 0, self.t.size - 2)], 0.0)

    def inverse_antiderivative(self, level):
        """Time at which :meth:`antiderivative` reaches ``level`` (positive signals only)."""
        if not self.positive and np.any(self.y <= 0):
            raise ValueError("inverse integral needs a strictly positive signal")
        level = np.asarray(level, dtype=float)
        t0, tn = self.t[0], self.t[-1]
        total = self._cum[-1]
        before = t0 + level / self.y[0]
        after = tn + (level - total) / self.y[-1]
        if self.t.size == 1:
            out = np.where(level < 0, before, after)
        else:
            k = np.clip(np.searchsorted(self._cum, level, side="right") - 1, 0, self.t.size - 2)
            r = np.maximum(level - self._cum[k], 0.0)
            vk = self.y[k]
            # root of 0.5*a*s^2 + vk*s - r = 0 in the cancellation-free form
            disc = np.maximum(vk * vk + 2.0 * self._slope[k] * r, 0.0)
            s = 2.0 * r / (vk + np.sqrt(disc))
            inner = self.t[k] + s
            out = np.where(level < 0, before, np.where(level > total, after, inner))
        return float(out) if out.ndim == 0 else out


def as_signal(value, name="value", positive=False):
    """Accept a Signal or a scalar (turned into a constant signal)."""
    if isinstance(value, Signal):
        if positive and np.any(value.y <= 0):
            raise ValueError(f"{name} signal must be strictly positive at every sample")
        return value
    return Signal.constant(float(value), name=name, positive=positive)


def cumulative_flow(v, t0, t1):
    """Distance travelled by the medium between ``t0`` and ``t1`` (exact for piecewise-linear v)."""
    if np.any(np.asarray(t1) < np.asarray(t0)):
        raise ValueError("cumulative_flow needs t0 <= t1")
    return v.antiderivative(t1) - v.antiderivative(t0)


def solve_delay(v, t, distance):
    """Transport delay ``tau`` with ``cumulative_flow(v, t - tau, t) == distance``.

    Vectorised over ``t`` and ``distance``. Zero distance gives exactly zero.
    """
    v = as_signal(v, name="velocity", positive=True)
    distance = np.asarray(distance, dtype=float)
    if np.any(distance < 0):
        raise ValueError("distance must be non-negative")
    t = np.asarray(t, dtype=float)
    start = v.inverse_antiderivative(v.antiderivative(t) - distance)
    # when the start lies on the same linear piece as t, solve v(t) tau - a tau^2 / 2 = distance
    # directly; this avoids cancellation in F(t) - distance for short distances
    piece_t, piece_s = v.piece(t), v.piece(start)
    a = np.where(piece_t < 0, 0.0, v.slope_at(t))
    vt = v(t)
    local = 2.0 * distance / (vt + np.sqrt(np.maximum(vt * vt - 2.0 * a * distance, 0.0)))
    tau = np.where(piece_t == piece_s, local, t - start)
    tau = np.where(distance == 0, 0.0, np.maximum(tau, 0.0))
    return float(tau) if tau.ndim == 0 else tau


def characteristic_time(v, z, t, length):
    """Time at which the parcel reaching the outlet at ``t`` passed position ``z``."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(z > length):
        raise ValueError(f"position must lie in [0, {length}]")
    t = np.asarray(t, dtype=float)
    phi = t - solve_delay(v, t, length - z)
    return float(phi) if np.ndim(phi) == 0 else phi


def delayed_velocity(v, z, t, length):
    """Velocity evaluated along the characteristic through ``(length, t)``."""
    v = as_signal(v, name="velocity", positive=True)
    return v(characteristic_time(v, z, t, length))


def read_signal_csv(path, column=None, positive=False):
    """Read a ``t,<name>`` CSV; ``column`` picks one column of a wider file."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if header[0] != "t":
        raise ValueError(f"{path}: first column must be 't', got {header[0]!r}")
    if column is None:
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 't,<name>', got {','.join(header)}")
        column = header[1]
    if column not in header:
        raise ValueError(f"{path}: no column {column!r}")
    j = header.index(column)
    pairs = [(float(r[0]), float(r[j])) for r in rows if j < len(r) and r[j].strip()]
    if not pairs:
        raise ValueError(f"{path}: column {column!r} is empty")
    t, y = zip(*pairs)
    return Signal(t, y, name=column, positive=positive)


def write_signal_csv(signal, path):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", signal.name])
        for t, y in zip(signal.t, signal.y):
            writer.writerow([f"{t:.9g}", f"{y:.9g}"])


def parse_signal(spec, name="value", positive=False, base_dir=None):
    """Build a signal from ``const:v``, ``ramp:t0,t1,v0,v1``, ``step:t,v0,v1`` or ``csv:path[#column]``."""
    kind, _, body = str(spec).partition(":")
    kind = kind.strip().lower()
    if not body:
        try:
            return Signal.constant(float(kind), name=name, positive=positive)
        except ValueError:
            raise ValueError(f"cannot parse signal {spec!r}") from None
    if kind == "csv":
        target, _, column = body.partition("#")
        path = Path(target.strip())
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if not path.exists():
            raise FileNotFoundError(f"signal file not found: {path}")
        return read_signal_csv(path, column=column or None, positive=positive).renamed(name)
    try:
        numbers = [float(x) for x in body.split(",")]
    except ValueError:
        raise ValueError(f"cannot parse signal {spec!r}") from None
    expected = {"const": 1, "ramp": 4, "step": 3}
    if kind not in expected:
        raise ValueError(f"unknown signal kind {kind!r} in {spec!r}")
    if len(numbers) != expected[kind]:
        raise ValueError(f"{kind} signal takes {expected[kind]} numbers, got {len(numbers)}")
    if kind == "const":
        return Signal.constant(numbers[0], name=name, positive=positive)
    if kind == "ramp":
        return Signal.ramp(*numbers, name=name, positive=positive)
    return Signal.step(*numbers, name=name, positive=positive)


class BoundaryConditions:
    """Velocity, inlet temperature and ambient temperature driving a pipe model."""

    def __init__(self, velocity, inlet, ambient):
        self.velocity = as_signal(velocity, name="v", positive=True)
        self.inlet = as_signal(inlet, name="Tin")
        self.ambient = as_signal(ambient, name="Tamb")

    def __repr__(self):
        return f"BoundaryConditions(velocity={self.velocity!r}, inlet={self.inlet!r}, ambient={self.ambient!r})"

    @property
    def constant_flow(self):
        return self.velocity.is_constant

    def max_velocity(self, t0, t1):
        """Largest velocity on ``[t0, t1]`` (attained at a sample or an end point)."""
        v = self.velocity
        inside = v.y[(v.t > t0) & (v.t < t1)]
        return float(max(v(t0), v(t1), *inside))
