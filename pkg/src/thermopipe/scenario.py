"""Scenario files and model comparisons.

A scenario is an INI-style file whose keys carry their units::

    [pipe]
    preset = simulation            # or: file = pipe.txt, or explicit keys
    [signals]
    velocity_m_per_s = const:0.5
    inlet_degC = ramp:0,50,20,60
    ambient_degC = ramp:0,200,30,20
    [numerics]
    t_end_s = 200
    dt_s = 0.05
    output_dt_s = 0.1
    [models]
    reference = pde200
    compare = dde, adapted_dde, dpde1, dpde5
    probes_m = 2.5
    [output]
    directory = out/ramp

Relative signal and parameter paths resolve against the scenario file. The
output directory defaults to ``$THERMOPIPE_OUTPUT_DIR`` or
``thermopipe_output`` in the working directory.
"""

from __future__ import annotations

import configparser
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .metrics import error_pair
from .models import parse_model_name, run_model
from .output import probe_column
from .params import MEASUREMENT_PARAMS, PARAMETER_KEYS, SIMULATION_PARAMS, PipeParameters, load_parameters
from .signals import BoundaryConditions, parse_signal

log = logging.getLogger(__name__)

OUTPUT_ENV = "THERMOPIPE_OUTPUT_DIR"
PRESETS = {"simulation": SIMULATION_PARAMS, "measurement": MEASUREMENT_PARAMS}
_PIPE_EXTRA = ("inner_radius_mm", "outer_radius_mm")


class ScenarioError(ValueError):
    """Invalid scenario; the message names the offending section and key."""


def resolve_params(spec, base_dir=None):
    """Preset name (``simulation``/``measurement``) or a parameter file path."""
    key = str(spec).strip()
    if key.lower() in PRESETS:
        return PRESETS[key.lower()]
    path = Path(key)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    if not path.exists():
        raise FileNotFoundError(f"parameter file not found: {path}")
    return load_parameters(path)


@dataclass
class Scenario:
    params: PipeParameters
    bc: BoundaryConditions
    models: list
    reference: str
    t_end: float
    dt: float = 0.05
    output_dt: float | None = None
    pde_dt: float | None = None
    initial: float | None = None
    probes: tuple = ()
    output_dir: Path | None = None
    name: str = "scenario"

    def __post_init__(self):
        if not self.t_end > 0:
            raise ScenarioError("[numerics] t_end_s: must be positive")
        if not self.dt > 0:
            raise ScenarioError("[numerics] dt_s: must be positive")
        for m in self.models:
            parse_model_name(m)
        if len(set(self.models)) != len(self.models):
            raise ScenarioError("[models] compare: a model is listed twice")
        if self.models.count(self.reference) != 1:
            raise ScenarioError("[models] reference: must appear exactly once in the model list")

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"scenario file not found: {path}")
        cfg = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
        cfg.read(path)
        return cls.from_config(cfg, base_dir=path.parent, name=path.stem)

    @classmethod
    def from_config(cls, cfg, base_dir=None, name="scenario"):
        def get(section, key, default=None, required=False):
            if cfg.has_option(section, key):
                return cfg.get(section, key).strip()
            if required:
                raise ScenarioError(f"[{section}] {key}: missing")
            return default

        def number(section, key, default=None, required=False):
            raw = get(section, key, required=required)
            if raw is None or raw == "":
                return default
            try:
                return float(raw)
            except ValueError:
                raise ScenarioError(f"[{section}] {key}: not a number: {raw!r}") from None

        params, explicit_eps = _pipe_section(cfg, base_dir)
        signals = {}
        for key, label, positive in (("velocity_m_per_s", "v", True), ("inlet_degC", "Tin", False),
                                     ("ambient_degC", "Tamb", False)):
            raw = get("signals", key, required=True)
            try:
                signals[label] = parse_signal(raw, name=label, positive=positive, base_dir=base_dir)
            except FileNotFoundError as exc:
                raise ScenarioError(f"[signals] {key}: {exc}") from None
            except ValueError as exc:
                raise ScenarioError(f"[signals] {key}: {exc}") from None
        bc = BoundaryConditions(signals["v"], signals["Tin"], signals["Tamb"])

        reference = get("models", "reference", required=True).lower()
        listed = [m.strip().lower() for m in get("models", "compare", "").split(",") if m.strip()]
        models = listed if reference in listed else [reference] + listed
        for m in models:
            try:
                parse_model_name(m)
            except ValueError as exc:
                raise ScenarioError(f"[models] compare: {exc}") from None
        if "adapted_dde" in models and not explicit_eps:
            raise ScenarioError("[pipe] epsilon: required by adapted_dde")
        probes_raw = get("models", "probes_m", "")
        try:
            probes = tuple(float(p) for p in probes_raw.split(",") if p.strip())
        except ValueError:
            raise ScenarioError(f"[models] probes_m: not a list of numbers: {probes_raw!r}") from None
        for z in probes:
            if not 0 < z <= params.length:
                raise ScenarioError(f"[models] probes_m: {z} outside (0, {params.length}]")

        out = get("output", "directory")
        return cls(
            params=params,
            bc=bc,
            models=models,
            reference=reference,
            t_end=number("numerics", "t_end_s", required=True),
            dt=number("numerics", "dt_s", 0.05),
            output_dt=number("numerics", "output_dt_s"),
            pde_dt=number("numerics", "pde_dt_s"),
            initial=number("numerics", "initial_degC"),
            probes=probes,
            output_dir=Path(out) if out else None,
            name=name,
        )

    def resolved_output_dir(self, override=None):
        if override is not None:
            return Path(override)
        if self.output_dir is not None:
            return self.output_dir
        return Path(os.environ.get(OUTPUT_ENV, "thermopipe_output"))


def _pipe_section(cfg, base_dir):
    if not cfg.has_section("pipe"):
        raise ScenarioError("[pipe]: section missing")
    items = {k: v.strip() for k, v in cfg.items("pipe")}
    preset, file_ = items.pop("preset", None), items.pop("file", None)
    if preset and file_:
        raise ScenarioError("[pipe]: give either preset or file, not both")
    overrides = {}
    for key, raw in items.items():
        if key not in PARAMETER_KEYS and key not in _PIPE_EXTRA:
            raise ScenarioError(f"[pipe] {key}: unknown parameter")
        try:
            overrides[key] = float(raw)
        except ValueError:
            raise ScenarioError(f"[pipe] {key}: not a number: {raw!r}") from None
    try:
        if preset or file_:
            base = resolve_params(preset or file_, base_dir)
            values = {**base.to_dict(), **overrides}
            explicit_eps = True
        else:
            values = overrides
            explicit_eps = "epsilon" in overrides
        for mm, m in (("inner_radius_mm", "inner_radius_m"), ("outer_radius_mm", "outer_radius_m")):
            if mm in overrides:
                values.pop(m, None)
        return PipeParameters.from_dict(values, name=preset or file_ or "pipe"), explicit_eps
    except FileNotFoundError as exc:
        raise ScenarioError(f"[pipe] {'preset' if preset else 'file'}: {exc}") from None
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"[pipe]: {exc}") from None


@dataclass
class ModelResult:
    status: str = "ok"
    runtime: float = 0.0
    errors: dict = field(default_factory=dict)
    output: object = None


@dataclass
class ComparisonReport:
    """Errors of every model against the reference, per channel.

    Channels are ``Tm_out``, ``Tw_out`` (when both models have a wall) and
    one ``Tm_probe_<z>`` per probe. Each entry is ``(e2, e_inf)``.
    """

    reference: str
    results: dict

    def errors(self, model, channel="Tm_out"):
        return self.results[model].errors[channel]

    def to_text(self, include_runtime=False):
        """Key-value document; runtimes are left out by default so reruns compare equal."""
        lines = [f"reference = {self.reference}", f"models = {','.join(self.results)}", ""]
        for model, res in self.results.items():
            lines.append(f"[{model}]")
            lines.append(f"status = {res.status}")
            if include_runtime:
                lines.append(f"runtime_s = {res.runtime:.4f}")
            for channel, (e2, einf) in res.errors.items():
                lines.append(f"e2.{channel} = {e2:.6g}")
                lines.append(f"einf.{channel} = {einf:.6g}")
            lines.append("")
        return "\n".join(lines)


def _channels(reference, candidate, probes):
    out = {"Tm_out": error_pair(reference.signal("Tm_out"), candidate.signal("Tm_out"))}
    if reference.Tw_out is not None and candidate.Tw_out is not None:
        out["Tw_out"] = error_pair(reference.signal("Tw_out"), candidate.signal("Tw_out"))
    for z in probes:
        col = probe_column(z)
        if col in reference.columns and col in candidate.columns:
            try:
                out[col] = error_pair(reference.signal(col), candidate.signal(col))
            except ValueError:
                log.warning("probe %s: no overlap between reference and candidate", col)
    return out


def run_scenario(scenario, output_dir=None, write=True):
    """Run every model, compare against the reference and write CSVs plus ``report.txt``.

    A model that fails is reported with its error message; the others still run.
    """
    results = {}
    for name in scenario.models:
        start = time.perf_counter()
        try:
            out = run_model(name, scenario.params, scenario.bc, scenario.t_end, dt=scenario.dt,
                            output_dt=scenario.output_dt, probes=scenario.probes, initial=scenario.initial,
                            pde_dt=scenario.pde_dt)
            results[name] = ModelResult(runtime=time.perf_counter() - start, output=out)
        except (ValueError, RuntimeError, FloatingPointError) as exc:
            log.error("model %s failed: %s", name, exc)
            results[name] = ModelResult(status=f"error: {exc}", runtime=time.perf_counter() - start)

    ref = results[scenario.reference]
    if ref.output is not None:
        for name, res in results.items():
            if res.output is not None:
                res.errors = _channels(ref.output, res.output, scenario.probes)
    report = ComparisonReport(scenario.reference, results)

    if write:
        target = scenario.resolved_output_dir(output_dir)
        target.mkdir(parents=True, exist_ok=True)
        for name, res in results.items():
            if res.output is not None:
                res.output.to_csv(target / f"{name}.csv")
        (target / "report.txt").write_text(report.to_text())
        runtimes = "".join(f"{name} = {res.runtime:.4f}\n" for name, res in results.items())
        (target / "runtime.txt").write_text(runtimes)
    return report
