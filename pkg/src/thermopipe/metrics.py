"""Error measures between a reference trajectory and a model trajectory."""

from __future__ import annotations

import numpy as np

from .signals import Signal


def _as_signal(x, name):
    if isinstance(x, Signal):
        return x
    if hasattr(x, "signal"):
        return x.signal("Tm_out")
    raise TypeError(f"{name} must be a Signal or a ModelOutput")


def aligned_difference(reference, candidate):
    """Candidate minus reference on the reference samples that the candidate covers.

    The candidate is interpolated linearly; reference samples outside the
    candidate's time span are dropped.
    """
    ref = _as_signal(reference, "reference")
    cand = _as_signal(candidate, "candidate")
    inside = (ref.t >= cand.t[0]) & (ref.t <= cand.t[-1])
    if not np.any(inside):
        raise ValueError("reference and candidate do not overlap in time")
    t = ref.t[inside]
    return t, cand(t) - ref.y[inside]


def rms_error(reference, candidate):
    """Root-mean-square deviation ``e2`` in the units of the signals."""
    _, diff = aligned_difference(reference, candidate)
    return float(np.sqrt(np.mean(diff * diff)))


def max_error(reference, candidate):
    """Largest absolute deviation ``e_inf``."""
    _, diff = aligned_difference(reference, candidate)
    return float(np.max(np.abs(diff)))


def error_pair(reference, candidate):
    _, diff = aligned_difference(reference, candidate)
    return float(np.sqrt(np.mean(diff * diff))), float(np.max(np.abs(diff)))
