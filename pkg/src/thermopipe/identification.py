"""Measurement data sets and least-squares identification of heat-transfer coefficients.

The medium/wall models are fitted over ``(alpha_mw, alpha_wa)``; the adapted
DDE is fitted over ``epsilon`` alone with its sink derived from the supplied
coefficients. The search is a bounded Nelder-Mead simplex in coordinates
normalised by the initial guess.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import optimize

from .models import parse_model_name, simulate_at
from .output import FLOAT_FORMAT, probe_column
from .signals import BoundaryConditions, Signal

MEASUREMENT_COLUMNS = ("t", "Tin", "Tout", "Tw_out", "Tm_probe", "v", "Tamb")
OPTIONAL_COLUMNS = ("Tw_out", "Tm_probe")

log = logging.getLogger(__name__)

DEFAULT_BOUNDS = {
    "alpha_mw": (10.0, 1e5),
    "alpha_wa": (0.1, 1e4),
    "epsilon": (0.05, 5.0),
}


@dataclass
class MeasurementSet:
    """Aligned measured series on a common, strictly increasing time base.

    ``T_w`` (outlet wall) and ``T_probe`` (medium at ``probe_position``) are
    optional. The ambient temperature may be a single constant sample.
    """

    T_in: Signal
    T_out: Signal
    v: Signal
    T_amb: Signal
    T_w: Signal | None = None
    T_probe: Signal | None = None
    probe_position: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(self.v.y <= 0):
            raise ValueError("measured velocity must be strictly positive")
        if self.T_probe is not None and self.probe_position is None:
            raise ValueError("a probe series needs its position (probe_position)")

    @property
    def t(self):
        return self.T_out.t

    @property
    def span(self):
        return float(self.t[0]), float(self.t[-1])

    def boundary(self):
        return BoundaryConditions(self.v, self.T_in, self.T_amb)

    @classmethod
    def from_csv(cls, path, probe_position=None, ambient=None):
        """Read ``t,Tin,Tout,Tw_out,Tm_probe,v,Tamb``; blank cells mark missing values.

        ``Tw_out`` and ``Tm_probe`` may be absent or blank; ``Tm_probe`` is
        dropped unless ``probe_position`` is given. ``Tamb`` may hold a single
        value or be replaced by the ``ambient`` argument.
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"measurement file not found: {path}")
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader)]
            rows = [row for row in reader if row and any(c.strip() for c in row)]
        required = ["t", "Tin", "Tout", "v"] + ([] if ambient is not None else ["Tamb"])
        missing = [c for c in required if c not in header]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        unknown = [c for c in header if c not in MEASUREMENT_COLUMNS]
        if unknown:
            raise ValueError(f"{path}: unexpected column(s) {', '.join(unknown)}")

        def column(name):
            j = header.index(name)
            cells = [(r[0], r[j] if j < len(r) else "") for r in rows]
            pairs = [(float(t), float(x)) for t, x in cells if x.strip()]
            return pairs

        def series(name, positive=False, required=True):
            if name not in header:
                return None
            pairs = column(name)
            if not pairs:
                if required:
                    raise ValueError(f"{path}: column {name} is empty")
                return None
            t, y = zip(*pairs)
            return Signal(t, y, name=name, positive=positive)

        t_all = np.array([float(r[0]) for r in rows])
        if np.any(np.diff(t_all) <= 0):
            raise ValueError(f"{path}: time column must be strictly increasing")
        T_out = series("Tout")
        if T_out.t.size != t_all.size:
            raise ValueError(f"{path}: Tout must be present in every row")
        T_amb = Signal.constant(float(ambient), name="Tamb", t0=t_all[0]) if ambient is not None else series("Tamb")
        T_probe = series("Tm_probe", required=False)
        if T_probe is not None and probe_position is None:
            log.warning("%s: ignoring Tm_probe because no probe position was given", path)
            T_probe = None
        return cls(
            T_in=series("Tin"),
            T_out=T_out,
            v=series("v", positive=True),
            T_amb=T_amb,
            T_w=series("Tw_out", required=False),
            T_probe=T_probe,
            probe_position=probe_position,
            metadata={"source": str(path)},
        )

    def to_csv(self, path):
        t = self.t
        cols = {
            "Tin": self.T_in(t),
            "Tout": self.T_out.y,
            "Tw_out": self.T_w(t) if self.T_w is not None else None,
            "Tm_probe": self.T_probe(t) if self.T_probe is not None else None,
            "v": self.v(t),
            "Tamb": self.T_amb(t),
        }
        names = ["t"] + [k for k, c in cols.items() if c is not None]
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(names)
            for k, tk in enumerate(t):
                writer.writerow([FLOAT_FORMAT.format(tk)] + [FLOAT_FORMAT.format(cols[n][k]) for n in names[1:]])

    @classmethod
    def from_output(cls, output, bc, probe_position=None):
        """Wrap a simulated trajectory as if it had been measured."""
        t = output.t
        probe = None
        if probe_position is not None:
            probe = output.signal(probe_column(probe_position))
        return cls(
            T_in=bc.inlet.resample(t),
            T_out=Signal(t, output.Tm_out, name="Tout"),
            v=bc.velocity.resample(t),
            T_amb=bc.ambient.resample(t),
            T_w=Signal(t, output.Tw_out, name="Tw_out") if output.Tw_out is not None else None,
            T_probe=probe,
            probe_position=probe_position,
        )


@dataclass
class FitResult:
    alpha_mw: float
    alpha_wa: float
    epsilon: float
    residual: float
    iterations: int
    model: str = ""
    fitted: tuple = ()
    initial_loss: float = math.nan
    loss: float = math.nan
    evaluations: int = 0
    converged: bool = False
    at_bound: tuple = ()
    message: str = ""

    def to_report(self):
        """Key-value text, one ``key = value`` per line."""
        lines = [
            f"model = {self.model}",
            f"fitted = {','.join(self.fitted)}",
            f"alpha_mw = {self.alpha_mw:.9g}",
            f"alpha_wa = {self.alpha_wa:.9g}",
            f"epsilon = {self.epsilon:.9g}",
            f"residual_rms = {self.residual:.9g}",
            f"loss = {self.loss:.9g}",
            f"initial_loss = {self.initial_loss:.9g}",
            f"iterations = {self.iterations}",
            f"evaluations = {self.evaluations}",
            f"converged = {str(self.converged).lower()}",
            f"at_bound = {','.join(self.at_bound) or 'none'}",
            f"message = {self.message}",
        ]
        return "\n".join(lines) + "\n"


class _Loss:
    """Sum of squared residuals for one parameter vector; counts evaluations."""

    def __init__(self, meas, model, params, names, scale, fit_wall, dt, pde_dt, initial):
        self.meas = meas
        self.model = model
        self.params = params
        self.names = names
        self.scale = scale
        self.fit_wall = fit_wall
        self.bc = meas.boundary()
        self.dt = dt
        self.pde_dt = pde_dt
        self.initial = float(meas.T_out.y[0]) if initial is None else initial
        self.calls = 0

    def candidate(self, x):
        values = dict(zip(self.names, np.asarray(x) * self.scale))
        return self.params.with_heat(**values)

    def residuals(self, x):
        p = self.candidate(x)
        try:
            _, Tm, Tw = simulate_at(self.model, p, self.bc, self.meas.t, dt=self.dt,
                                    initial=self.initial, pde_dt=self.pde_dt)
        except ValueError as exc:
            values = ", ".join(f"{k}={v:.6g}" for k, v in zip(self.names, np.asarray(x) * self.scale))
            raise RuntimeError(f"simulation failed at {values}: {exc}") from exc
        parts = [Tm - self.meas.T_out.y]
        if self.fit_wall:
            tw = self.meas.T_w
            parts.append(np.interp(tw.t, self.meas.t, Tw) - tw.y)
        return np.concatenate(parts)

    def __call__(self, x):
        self.calls += 1
        r = self.residuals(x)
        return float(r @ r)


def identify(measurements, model="pde", params=None, bounds=None, initial_guess=None, fit_wall=False,
             dt=None, pde_dt=None, maxiter=500, xatol=1e-6, fatol=1e-12, initial=None):
    """Least-squares fit of heat-transfer coefficients to a measurement set.

    Parameters
    ----------
    model : str
        ``pde<n>``, ``dpde<n>`` (both fit ``alpha_mw`` and ``alpha_wa``) or
        ``adapted_dde`` (fits ``epsilon``).
    params : PipeParameters
        Geometry, material and any coefficient that is not fitted.
    bounds : dict, optional
        ``{name: (low, high)}``; defaults to :data:`DEFAULT_BOUNDS`.
    initial_guess : dict, optional
        Start values; default to the values in ``params``.
    fit_wall : bool
        Add the outlet wall residuals (needs ``T_w`` in the data set).
    dt : float, optional
        Integrator step for delay/lumped models; default 0.05 s, adjusted to
        divide the measurement span.
    """
    if params is None:
        raise ValueError("identify needs a PipeParameters bundle for geometry and material data")
    family, _ = parse_model_name(model)
    if family == "adapted_dde":
        names = ("epsilon",)
        if fit_wall:
            raise ValueError("the adapted DDE has no wall temperature to fit")
    elif family in ("pde", "dpde"):
        names = ("alpha_mw", "alpha_wa")
    else:
        raise ValueError(f"identification supports pde<n>, dpde<n> and adapted_dde, not {model!r}")
    if fit_wall and measurements.T_w is None:
        raise ValueError("fit_wall requested but the measurement set has no wall temperature")

    bounds = {**DEFAULT_BOUNDS, **(bounds or {})}
    guess = {name: getattr(params.heat, name) for name in names}
    guess.update(initial_guess or {})
    scale = np.array([float(guess[n]) for n in names])
    lo = np.array([bounds[n][0] for n in names]) / scale
    hi = np.array([bounds[n][1] for n in names]) / scale
    for n, a, b in zip(names, lo, hi):
        if not a <= 1.0 <= b:
            raise ValueError(f"initial guess for {n} ({guess[n]}) lies outside its bounds {bounds[n]}")

    loss = _Loss(measurements, model, params, names, scale, fit_wall, 0.05 if dt is None else dt, pde_dt, initial)
    x0 = np.ones(len(names))
    initial_loss = loss(x0)
    res = optimize.minimize(
        loss, x0, method="Nelder-Mead", bounds=list(zip(lo, hi)),
        options={"maxiter": maxiter, "xatol": xatol, "fatol": fatol},
    )
    x = np.clip(res.x, lo, hi)
    best = loss.candidate(x)
    r = loss.residuals(x)
    at_bound = tuple(n for n, xi, a, b in zip(names, x, lo, hi) if math.isclose(xi, a, rel_tol=1e-6) or math.isclose(xi, b, rel_tol=1e-6))
    message = str(res.message)
    if not res.success:
        message = f"stopped without convergence, best point so far: {message}"
    return FitResult(
        alpha_mw=best.heat.alpha_mw,
        alpha_wa=best.heat.alpha_wa,
        epsilon=best.heat.epsilon,
        residual=float(np.sqrt(np.mean(r * r))),
        iterations=int(res.nit),
        model=model,
        fitted=names,
        initial_loss=initial_loss,
        loss=float(r @ r),
        evaluations=loss.calls,
        converged=bool(res.success),
        at_bound=at_bound,
        message=message,
    )


def apply_fit(params, result):
    """Parameters with the fitted coefficients substituted."""
    return params.with_heat(**{name: getattr(result, name) for name in result.fitted})
