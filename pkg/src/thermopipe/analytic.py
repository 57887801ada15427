"""Closed-form results for constant flow, used as independent oracles.

For constant velocity and an insulated pipe the outlet temperature is the
inlet temperature delayed by ``z / v`` and passed through a filter whose
impulse response is a Dirac pulse of weight ``exp(-h1 z / v)`` plus a
continuous part built from the modified Bessel function ``I1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .output import ModelOutput
from .signals import as_signal

TAIL_MASS = 1e-8


def bessel_i1(x):
    """Modified Bessel function of the first kind, order one, from its power series.

    Summation stops once a term drops below ``1e-16`` of the partial sum.
    Intended for moderate arguments (``x`` up to a few hundred).
    """
    x = float(x)
    if x < 0:
        raise ValueError(f"bessel_i1 expects x >= 0, got {x}")
    if x == 0:
        return 0.0
    q = 0.25 * x * x
    term = 0.5 * x
    total = term
    n = 0
    while True:
        n += 1
        term *= q / (n * (n + 1))
        total += term
        if term <= 1e-16 * total:
            return total


def _scaled_i1_over_x(x):
    """``2 I1(x) / x`` as ``sum q^n / (n! (n+1)!)`` with ``q = x^2 / 4``; finite at 0."""
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    n = 0
    while True:
        n += 1
        term *= q / (n * (n + 1))
        total += term
        if term <= 1e-16 * total:
            return total


def _i1_scaled(x):
    """``exp(-x) I1(x)`` without overflow: power series up to ``x = 40``, large-argument expansion beyond."""
    if x <= 40.0:
        return math.exp(-x) * bessel_i1(x)
    # I1(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k prod_{j<=k} (4 - (2j - 1)^2) / (k! (8x)^k)
    term = 1.0
    total = 1.0
    k = 0
    while abs(term) > 1e-17 * abs(total):
        k += 1
        term *= -(4.0 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        total += term
    return total / math.sqrt(2.0 * math.pi * x)


def _response_value(t, kz, delay_rate, h2):
    """Continuous response at ``t > 0`` with the exponentials merged into one non-positive exponent."""
    x = 2.0 * math.sqrt(kz * t)
    if x < 1.0:
        return math.exp(-delay_rate - h2 * t) * kz * _scaled_i1_over_x(x)
    expo = -(math.sqrt(delay_rate) - math.sqrt(h2 * t)) ** 2
    return math.exp(expo) * (2.0 * kz / x) * _i1_scaled(x)


def dirac_weight(z, h1, v):
    return math.exp(-h1 * z / v)


def impulse_response(z, t, h1, h2, v):
    """Continuous part of the delay-free filter response at ``(z, t)`` and the Dirac weight.

    Returns ``(g, w)`` where the full response is ``w * delta(t) + g(t)``.
    ``t`` may be an array. The value at ``t = 0`` is the finite limit
    ``w * h1 * h2 * z / v``.
    """
    if not v > 0:
        raise ValueError("velocity must be positive")
    if not z > 0:
        raise ValueError("position must be positive")
    w = dirac_weight(z, h1, v)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("impulse response is defined for t >= 0")
    kz = h1 * h2 / v * z
    out = np.empty_like(t_arr)
    for idx, tk in np.ndenumerate(t_arr):
        if kz == 0:
            out[idx] = 0.0
        elif tk == 0:
            out[idx] = w * kz
        else:
            out[idx] = _response_value(tk, kz, h1 * z / v, h2)
    return (float(out) if out.ndim == 0 else out), w


def impulse_response_series(z, t, h1, h2, v):
    """Same continuous part evaluated as a power series in ``t`` (no Bessel substitution)."""
    kz = h1 * h2 / v * z
    w = dirac_weight(z, h1, v)
    t = float(t)
    term = kz
    total = term
    n = 0
    while term > 1e-17 * total:
        term *= kz * t / ((n + 1) * (n + 2))
        total += term
        n += 1
    return w * math.exp(-h2 * t) * total


def _continuous(z, h1, h2, v):
    kz = h1 * h2 / v * z
    w = dirac_weight(z, h1, v)

    def g(t):
        if t <= 0:
            return w * kz
        return _response_value(t, kz, h1 * z / v, h2)

    return g


def _horizon(z, h1, h2, v, tail=TAIL_MASS):
    """Time beyond which the continuous part carries less than ``tail`` mass.

    Past the peak ``t* = K z / h2^2`` the log-slope of the response is at most
    ``-(h2 - sqrt(K z / t))``, so ``g(T) / (h2 - sqrt(K z / T))`` bounds the tail.
    """
    kz = h1 * h2 / v * z
    if kz == 0:
        return 0.0
    g = _continuous(z, h1, h2, v)
    T = max(2.0 * kz / h2**2, 1.0 / h2)
    while True:
        rate = h2 - math.sqrt(kz / T)
        if rate > 0 and g(T) / rate < tail:
            return T
        T *= 1.25


def kernel_mass(z, h1, h2, v):
    """Dirac weight plus the adaptive-quadrature integral of the continuous part."""
    w = dirac_weight(z, h1, v)
    if h1 * h2 == 0:
        return w
    g = _continuous(z, h1, h2, v)
    peak = h1 * z / (v * h2)
    T = _horizon(z, h1, h2, v)
    head, _ = integrate.quad(g, 0.0, T, points=[peak] if 0 < peak < T else None, limit=200,
                             epsabs=1e-13, epsrel=1e-12)
    tail, _ = integrate.quad(g, T, math.inf, epsabs=1e-14)
    return w + head + tail


@dataclass(frozen=True)
class ImpulseKernel:
    """Sampled continuous response on a uniform grid plus the Dirac weight."""

    z: float
    h1: float
    h2: float
    v: float
    t: np.ndarray
    g: np.ndarray
    dirac_weight: float

    @property
    def dt(self):
        return float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0

    def quadrature_weights(self):
        """Trapezoid weights on the kernel grid."""
        wts = np.full(self.t.size, self.dt)
        if self.t.size:
            wts[0] = wts[-1] = 0.5 * self.dt
        return wts

    def sample_mass(self):
        return self.quadrature_weights() * self.g

    @property
    def mass(self):
        return self.dirac_weight + float(np.sum(self.sample_mass()))


def build_kernel(z, h1, h2, v, dt):
    """Sample the continuous response with step ``min(dt, 0.1 / h2)`` up to the tail horizon."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    w = dirac_weight(z, h1, v)
    if h1 * h2 == 0:
        return ImpulseKernel(z, h1, h2, v, np.zeros(1), np.zeros(1), w)
    dt_k = min(dt, 0.1 / h2)
    steps = int(math.ceil(_horizon(z, h1, h2, v) / dt_k))
    t = dt_k * np.arange(steps + 1)
    g, _ = impulse_response(z, t, h1, h2, v)
    return ImpulseKernel(z, h1, h2, v, t, g, w)


def _constant_rates(params, v):
    if params.heat.has_affine:
        h1, h2, h3, _ = params.h_at(v)
    else:
        d = params.derived
        h1, h2, h3 = d.h1, d.h2, d.h3
    return h1, h2, h3


def convolve_constant_flow(T_in, params, v, z, t_grid, dt=None, chunk=64):
    """Medium temperature at ``z`` for constant flow through an insulated pipe.

    ``T_m(z, t) = w * T_in(t - z/v) + integral g(s) T_in(t - z/v - s) ds``
    with trapezoid quadrature on the kernel grid. ``v`` must be a scalar or
    a constant signal and ``h3`` must vanish (see ``PipeParameters.insulated``).
    """
    if hasattr(v, "is_constant"):
        if not v.is_constant:
            raise ValueError("convolution oracle needs a constant velocity")
        v = float(v.y[0])
    v = float(v)
    if not v > 0:
        raise ValueError("velocity must be positive")
    h1, h2, h3 = _constant_rates(params, v)
    if h3 != 0:
        raise ValueError("convolution oracle covers the insulated pipe only (h3 = 0)")
    if not 0 < z <= params.length:
        raise ValueError(f"position must lie in (0, {params.length}]")
    T_in = as_signal(T_in, name="Tin")
    t_grid = np.asarray(t_grid, dtype=float)
    if dt is None:
        dt = float(np.min(np.diff(t_grid))) if t_grid.size > 1 else 0.1
    kernel = build_kernel(z, h1, h2, v, dt)
    mass = kernel.sample_mass()
    shifted = t_grid - z / v

    out = kernel.dirac_weight * T_in(shifted)
    for start in range(0, t_grid.size, chunk):
        block = shifted[start:start + chunk, None] - kernel.t[None, :]
        out[start:start + chunk] += T_in(block) @ mass

    meta = {
        "model": "convolution",
        "position": z,
        "kernel_dt": kernel.dt,
        "kernel_horizon": float(kernel.t[-1]),
        "dirac_weight": kernel.dirac_weight,
    }
    return ModelOutput(t_grid, out, None, metadata=meta, field=kernel)


def steady_outlet(params, v, T_in, T_amb, position=None):
    """Stationary medium temperature of the medium/wall model at ``position`` (default outlet)."""
    z = params.length if position is None else float(position)
    h1, h2, h3 = _constant_rates(params, v)
    return T_amb + (T_in - T_amb) * math.exp(-h1 * h3 * z / ((h2 + h3) * v))


def steady_outlet_simplified(params, v, T_in, T_amb, position=None):
    """Stationary outlet of the single-field model with medium-ambient sink ``h4``."""
    z = params.length if position is None else float(position)
    h4 = params.h_at(v)[3]
    return T_amb + (T_in - T_amb) * math.exp(-h4 * z / v)


def steady_wall(params, v, T_m, T_amb):
    """Wall temperature in equilibrium with the local medium temperature."""
    _, h2, h3 = _constant_rates(params, v)
    return (h2 * T_m + h3 * T_amb) / (h2 + h3)
