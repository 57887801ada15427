"""Pipe geometry, material data and the lumped heat-transfer coefficients.

All values are SI. Temperatures elsewhere in the package are in degrees
Celsius; every model equation is affine in temperature so no Kelvin offset
is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from functools import cached_property
from pathlib import Path


@dataclass(frozen=True)
class PipeGeometry:
    length: float
    inner_radius: float
    outer_radius: float

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError(
                "need 0 < inner_radius < outer_radius, got "
                f"{self.inner_radius}, {self.outer_radius}"
            )

    @property
    def perimeter_medium(self):
        return 2.0 * math.pi * self.inner_radius

    @property
    def perimeter_wall(self):
        return 2.0 * math.pi * self.outer_radius

    @property
    def area_medium(self):
        return math.pi * self.inner_radius**2

    @property
    def area_wall(self):
        return math.pi * (self.outer_radius**2 - self.inner_radius**2)


@dataclass(frozen=True)
class MaterialProperties:
    rho_m: float
    cp_m: float
    rho_w: float
    cp_w: float
    lambda_w: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ValueError(f"{f.name} must be positive, got {value}")


@dataclass(frozen=True)
class HeatTransferSpec:
    """Convective coefficients plus the lumped-model correction factor.

    ``alpha_mw0``/``alpha_mw1`` optionally describe a medium-wall
    coefficient that grows affinely with the flow velocity. ``alpha_wa = 0``
    models an insulated outer surface (``h3 = h4 = 0``).
    """

    alpha_mw: float
    alpha_wa: float
    epsilon: float = 1.0
    alpha_mw0: float | None = None
    alpha_mw1: float | None = None

    def __post_init__(self):
        if not self.alpha_mw > 0:
            raise ValueError(f"alpha_mw must be positive, got {self.alpha_mw}")
        if not self.alpha_wa >= 0:
            raise ValueError(f"alpha_wa must be non-negative, got {self.alpha_wa}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if (self.alpha_mw0 is None) != (self.alpha_mw1 is None):
            raise ValueError("alpha_mw0 and alpha_mw1 must be given together")
        if self.alpha_mw0 is not None:
            if not self.alpha_mw0 > 0:
                raise ValueError("alpha_mw0 must be positive")
            if not self.alpha_mw1 >= 0:
                raise ValueError("alpha_mw1 must be non-negative")

    @property
    def has_affine(self):
        return self.alpha_mw0 is not None

    def alpha_mw_at(self, v):
        if not self.has_affine:
            raise ValueError("velocity-dependent alpha_mw requested without alpha_mw0/alpha_mw1")
        return self.alpha_mw0 + self.alpha_mw1 * v


@dataclass(frozen=True)
class DerivedCoefficients:
    rbar_m: float
    rbar_w: float
    bar_alpha_mw: float
    bar_alpha_wa: float
    alpha_ma: float
    h1: float
    h2: float
    h3: float
    h4: float


def mean_radii(geom):
    """Effective conduction lengths of the averaged wall temperature.

    Returns ``(rbar_m, rbar_w)``; the pair is chosen so that replacing the
    boundary wall temperatures by the cross-section mean is exact for the
    stationary radial conduction profile.
    """
    rm, rw = geom.inner_radius, geom.outer_radius
    if not rw > rm:
        raise ValueError("degenerate geometry: outer_radius must exceed inner_radius")
    log_ratio = math.log(rw / rm)
    denom = rw**2 - rm**2
    rbar_m = rm * (rw**2 / denom * log_ratio - 0.5)
    rbar_w = rm * (-(rm**2) / denom * log_ratio + 0.5)
    return rbar_m, rbar_w


def _series(*resistances):
    total = sum(resistances)
    return 0.0 if math.isinf(total) else 1.0 / total


def _inv(alpha):
    return math.inf if alpha == 0 else 1.0 / alpha


def overall_coefficients(geom, mat, ht, alpha_mw=None):
    """Medium-wall and wall-ambient coefficients relative to the mean wall temperature."""
    rbar_m, rbar_w = mean_radii(geom)
    a_mw = ht.alpha_mw if alpha_mw is None else alpha_mw
    bar_mw = _series(1.0 / a_mw, rbar_m / mat.lambda_w)
    bar_wa = _series(_inv(ht.alpha_wa), rbar_w / mat.lambda_w)
    return bar_mw, bar_wa


def alpha_ma(geom, mat, ht, alpha_mw=None):
    """Overall medium-ambient coefficient through the full wall."""
    a_mw = ht.alpha_mw if alpha_mw is None else alpha_mw
    wall = geom.inner_radius / mat.lambda_w * math.log(geom.outer_radius / geom.inner_radius)
    return _series(1.0 / a_mw, _inv(ht.alpha_wa), wall)


def h_parameters(geom, mat, ht, v=None):
    """Rate constants ``(h1, h2, h3, h4)`` in 1/s.

    With ``v`` given, ``alpha_mw`` is replaced by ``alpha_mw0 + alpha_mw1 * v``
    (only h1, h2 and h4 depend on it).
    """
    if v is None:
        a_mw = ht.alpha_mw
    else:
        if not v > 0:
            raise ValueError(f"velocity must be positive, got {v}")
        a_mw = ht.alpha_mw_at(v)
    bar_mw, bar_wa = overall_coefficients(geom, mat, ht, alpha_mw=a_mw)
    cap_m = mat.rho_m * mat.cp_m
    cap_w = mat.rho_w * mat.cp_w
    h1 = geom.perimeter_medium / geom.area_medium * bar_mw / cap_m
    h2 = geom.perimeter_medium / geom.area_wall * bar_mw / cap_w
    h3 = geom.perimeter_wall / geom.area_wall * bar_wa / cap_w
    h4 = geom.perimeter_wall / geom.area_medium * alpha_ma(geom, mat, ht, alpha_mw=a_mw) / cap_m
    return h1, h2, h3, h4


# flat parameter-file keys -> (section, attribute, scale to SI)
_KEYS = {
    "length_m": ("geometry", "length", 1.0),
    "inner_radius_m": ("geometry", "inner_radius", 1.0),
    "outer_radius_m": ("geometry", "outer_radius", 1.0),
    "inner_radius_mm": ("geometry", "inner_radius", 1e-3),
    "outer_radius_mm": ("geometry", "outer_radius", 1e-3),
    "rho_m": ("material", "rho_m", 1.0),
    "cp_m": ("material", "cp_m", 1.0),
    "rho_w": ("material", "rho_w", 1.0),
    "cp_w": ("material", "cp_w", 1.0),
    "lambda_w": ("material", "lambda_w", 1.0),
    "alpha_mw": ("heat", "alpha_mw", 1.0),
    "alpha_wa": ("heat", "alpha_wa", 1.0),
    "alpha_mw0": ("heat", "alpha_mw0", 1.0),
    "alpha_mw1": ("heat", "alpha_mw1", 1.0),
    "epsilon": ("heat", "epsilon", 1.0),
}
PARAMETER_KEYS = (
    "length_m", "inner_radius_m", "outer_radius_m", "rho_m", "cp_m", "rho_w",
    "cp_w", "lambda_w", "alpha_mw", "alpha_wa", "alpha_mw0", "alpha_mw1", "epsilon",
)


@dataclass(frozen=True)
class PipeParameters:
    """Everything a pipe model needs; derived coefficients are computed once."""

    geometry: PipeGeometry
    material: MaterialProperties
    heat: HeatTransferSpec
    name: str = field(default="", compare=False)

    @cached_property
    def derived(self):
        rbar_m, rbar_w = mean_radii(self.geometry)
        bar_mw, bar_wa = overall_coefficients(self.geometry, self.material, self.heat)
        h1, h2, h3, h4 = h_parameters(self.geometry, self.material, self.heat)
        return DerivedCoefficients(
            rbar_m=rbar_m,
            rbar_w=rbar_w,
            bar_alpha_mw=bar_mw,
            bar_alpha_wa=bar_wa,
            alpha_ma=alpha_ma(self.geometry, self.material, self.heat),
            h1=h1, h2=h2, h3=h3, h4=h4,
        )

    @property
    def length(self):
        return self.geometry.length

    def h_at(self, v=None):
        """``(h1, h2, h3, h4)``, velocity dependent when affine coefficients are set."""
        if v is None or not self.heat.has_affine:
            d = self.derived
            return d.h1, d.h2, d.h3, d.h4
        return h_parameters(self.geometry, self.material, self.heat, v=v)

    def with_heat(self, **changes):
        return replace(self, heat=replace(self.heat, **changes))

    def insulated(self):
        """Copy with an adiabatic outer surface (no heat loss to the ambient)."""
        return self.with_heat(alpha_wa=0.0)

    def with_length(self, length):
        return replace(self, geometry=replace(self.geometry, length=length))

    def to_dict(self):
        g, m, h = self.geometry, self.material, self.heat
        out = {
            "length_m": g.length,
            "inner_radius_m": g.inner_radius,
            "outer_radius_m": g.outer_radius,
            "rho_m": m.rho_m,
            "cp_m": m.cp_m,
            "rho_w": m.rho_w,
            "cp_w": m.cp_w,
            "lambda_w": m.lambda_w,
            "alpha_mw": h.alpha_mw,
            "alpha_wa": h.alpha_wa,
            "epsilon": h.epsilon,
        }
        if h.has_affine:
            out["alpha_mw0"] = h.alpha_mw0
            out["alpha_mw1"] = h.alpha_mw1
        return out

    @classmethod
    def from_dict(cls, values, name=""):
        sections = {"geometry": {}, "material": {}, "heat": {}}
        for key, raw in values.items():
            if key not in _KEYS:
                raise KeyError(f"unknown parameter key {key!r}")
            section, attr, scale = _KEYS[key]
            sections[section][attr] = float(raw) * scale
        try:
            return cls(
                PipeGeometry(**sections["geometry"]),
                MaterialProperties(**sections["material"]),
                HeatTransferSpec(**sections["heat"]),
                name=name,
            )
        except TypeError as exc:
            raise ValueError(f"incomplete parameter set: {exc}") from None


def parse_key_values(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def load_parameters(path):
    path = Path(path)
    return PipeParameters.from_dict(parse_key_values(path.read_text()), name=path.stem)


def save_parameters(params, path):
    lines = [f"{key} = {value!r}" for key, value in params.to_dict().items()]
    Path(path).write_text("\n".join(lines) + "\n")


_STEEL_WATER = MaterialProperties(rho_m=997.04, cp_m=4179.0, rho_w=7856.0, cp_w=500.0, lambda_w=20.0)

#: Stainless pipe of the ramp simulation study (l = 5 m).
SIMULATION_PARAMS = PipeParameters(
    PipeGeometry(length=5.0, inner_radius=7.7e-3, outer_radius=10.65e-3),
    _STEEL_WATER,
    HeatTransferSpec(alpha_mw=1000.0, alpha_wa=80.0, epsilon=0.7),
    name="simulation",
)

#: Identified test-rig values (l = 1.62 m).
MEASUREMENT_PARAMS = PipeParameters(
    PipeGeometry(length=1.62, inner_radius=7.7e-3, outer_radius=10.65e-3),
    _STEEL_WATER,
    HeatTransferSpec(alpha_mw=3052.87, alpha_wa=46.98, epsilon=0.91),
    name="measurement",
)
