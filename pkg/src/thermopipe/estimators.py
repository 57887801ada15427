"""scikit-learn style wrappers: ``fit`` identifies coefficients, ``predict`` simulates the outlet.

Input arrays have one row per sample and the columns ``t, v, Tin, Tamb``.
Targets are the measured outlet medium temperature, optionally followed by
the outlet wall temperature as a second column.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .identification import MeasurementSet, identify
from .models import simulate_at
from .params import MEASUREMENT_PARAMS
from .signals import Signal
from .validation import boundary_from_array, check_boundary_array, check_targets


class _PipeEstimator(RegressorMixin, BaseEstimator):
    """Shared plumbing; subclasses define :meth:`_model_name`."""

    def _model_name(self):
        raise NotImplementedError

    def _pipe(self):
        if hasattr(self, "pipe_"):
            return self.pipe_
        return MEASUREMENT_PARAMS if self.pipe is None else self.pipe

    def _fit(self, X, y, fit_wall=False):
        X = check_boundary_array(X)
        y = check_targets(y, X.shape[0])
        t = X[:, 0]
        bc = boundary_from_array(X)
        wall = Signal(t, y[:, 1], name="Tw_out") if y.shape[1] == 2 else None
        meas = MeasurementSet(bc.inlet, Signal(t, y[:, 0], name="Tout"), bc.velocity, bc.ambient, T_w=wall)
        self.fit_result_ = identify(
            meas, self._model_name(), params=MEASUREMENT_PARAMS if self.pipe is None else self.pipe,
            bounds=self.bounds, initial_guess=self.initial_guess, fit_wall=fit_wall and wall is not None,
            dt=self.dt, maxiter=self.maxiter, initial=self.initial,
        )
        self.pipe_ = (MEASUREMENT_PARAMS if self.pipe is None else self.pipe).with_heat(
            **{name: getattr(self.fit_result_, name) for name in self.fit_result_.fitted}
        )
        self.n_features_in_ = X.shape[1]
        return self

    def _simulate(self, X):
        X = check_boundary_array(X)
        return simulate_at(self._model_name(), self._pipe(), boundary_from_array(X), X[:, 0], dt=self.dt,
                           initial=self.initial)

    def predict(self, X):
        """Outlet medium temperature at the sample times of ``X``.

        Uses the fitted coefficients after :meth:`fit`, otherwise ``pipe``.
        """
        _, Tm, _ = self._simulate(X)
        return Tm


class _WallMixin:
    def fit(self, X, y):
        """Fit ``alpha_mw`` and ``alpha_wa``; a second target column adds wall residuals."""
        return self._fit(X, y, fit_wall=self.fit_wall)

    def predict_wall(self, X):
        _, _, Tw = self._simulate(X)
        return Tw


class PDEModel(_WallMixin, _PipeEstimator):
    """Finite-difference medium/wall model on ``n`` intervals."""

    def __init__(self, n=200, pipe=None, dt=None, initial=None, fit_wall=True, bounds=None,
                 initial_guess=None, maxiter=500):
        self.n = n
        self.pipe = pipe
        self.dt = dt
        self.initial = initial
        self.fit_wall = fit_wall
        self.bounds = bounds
        self.initial_guess = initial_guess
        self.maxiter = maxiter

    def _model_name(self):
        return f"pde{self.n}"


class DPDEModel(_WallMixin, _PipeEstimator):
    """Delay-PDE model on ``n`` intervals (``n = 1`` is the single-state DDE)."""

    def __init__(self, n=5, pipe=None, dt=None, initial=None, fit_wall=True, bounds=None,
                 initial_guess=None, maxiter=500):
        self.n = n
        self.pipe = pipe
        self.dt = dt
        self.initial = initial
        self.fit_wall = fit_wall
        self.bounds = bounds
        self.initial_guess = initial_guess
        self.maxiter = maxiter

    def _model_name(self):
        return f"dpde{self.n}"


class AdaptedDDEModel(_PipeEstimator):
    """Delayed first-order lag; ``fit`` identifies the correction factor ``epsilon``."""

    def __init__(self, pipe=None, dt=None, initial=None, bounds=None, initial_guess=None, maxiter=500):
        self.pipe = pipe
        self.dt = dt
        self.initial = initial
        self.bounds = bounds
        self.initial_guess = initial_guess
        self.maxiter = maxiter

    def _model_name(self):
        return "adapted_dde"

    def fit(self, X, y):
        y = np.asarray(y, dtype=float)
        return self._fit(X, y[:, 0] if y.ndim == 2 else y)
