"""Model trajectories and their CSV form.

CSV columns: ``t,Tm_out[,Tw_out][,Tin_delayed][,Tm_probe_<z>...]``. Numbers
are written with 9 significant digits (``%.9g``); reading a written file
back yields exactly those rounded values, and a second write reproduces
the file byte for byte. Missing values are written as empty cells.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .signals import Signal

FLOAT_FORMAT = "{:.9g}"


def probe_column(z):
    return f"Tm_probe_{z:.6g}"


@dataclass
class ModelOutput:
    """Time series produced by one model run.

    ``columns`` maps extra column names (probes, delayed input) to arrays on
    the same time grid. ``field`` carries model-specific internal state such
    as the delayed temperature field of the DPDE model.
    """

    t: np.ndarray
    Tm_out: np.ndarray
    Tw_out: np.ndarray | None = None
    columns: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    field: object = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.Tm_out = np.asarray(self.Tm_out, dtype=float)
        if self.Tw_out is not None:
            self.Tw_out = np.asarray(self.Tw_out, dtype=float)
        for key, values in self.columns.items():
            self.columns[key] = np.asarray(values, dtype=float)
            if self.columns[key].shape != self.t.shape:
                raise ValueError(f"column {key!r} does not match the time grid")
        if self.Tm_out.shape != self.t.shape:
            raise ValueError("Tm_out does not match the time grid")

    @property
    def model(self):
        return self.metadata.get("model", "")

    def column_names(self):
        names = ["t", "Tm_out"]
        if self.Tw_out is not None:
            names.append("Tw_out")
        names.extend(self.columns)
        return names

    def column(self, name):
        if name == "t":
            return self.t
        if name == "Tm_out":
            return self.Tm_out
        if name == "Tw_out":
            if self.Tw_out is None:
                raise KeyError(f"{self.model or 'model'} has no wall output")
            return self.Tw_out
        return self.columns[name]

    def signal(self, name="Tm_out"):
        """Column as a :class:`Signal`, dropping missing samples."""
        values = self.column(name)
        keep = np.isfinite(values)
        return Signal(self.t[keep], values[keep], name=name)

    def to_csv(self, path):
        """Write to ``path`` (a filename or an open text stream)."""
        if hasattr(path, "write"):
            self._write(path)
            return
        with Path(path).open("w", newline="") as fh:
            self._write(fh)

    def _write(self, fh):
        names = self.column_names()
        data = [self.column(name) for name in names]
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*data):
            writer.writerow(["" if not math.isfinite(x) else FLOAT_FORMAT.format(x) for x in row])

    @classmethod
    def from_csv(cls, path):
        with Path(path).open(newline="") as fh:
            reader = csv.reader(fh)
            names = next(reader)
            rows = [row for row in reader if row]
        if names[:2] != ["t", "Tm_out"]:
            raise ValueError(f"{path}: header must start with 't,Tm_out'")
        arrays = {
            name: np.array([float(row[j]) if row[j] else np.nan for row in rows])
            for j, name in enumerate(names)
        }
        t = arrays.pop("t")
        tm = arrays.pop("Tm_out")
        tw = arrays.pop("Tw_out", None)
        return cls(t, tm, tw, columns=arrays, metadata={"source": str(path)})
