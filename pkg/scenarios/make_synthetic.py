"""Regenerate synthetic_measurement.csv: noise-free PDE data with the test-rig coefficients.

The wall column is only filled every fifth second and the ambient column
only in the first row, to exercise the blank-cell handling of the reader.
"""

import csv
from pathlib import Path

import numpy as np

from thermopipe import MEASUREMENT_PARAMS, BoundaryConditions, Signal
from thermopipe.models import run_model
from thermopipe.output import probe_column

HERE = Path(__file__).parent
PROBE = 0.54  # l / 3

v = Signal([0, 120, 240, 360, 480, 600], [0.12, 0.25, 0.25, 0.15, 0.3, 0.2], name="v", positive=True)
t_in = Signal([0, 20, 200, 230, 400, 410, 600], [25, 70, 70, 45, 45, 60, 60], name="Tin")
bc = BoundaryConditions(v, t_in, 22.0)
out = run_model("pde60", MEASUREMENT_PARAMS, bc, 600.0, output_dt=1.0, probes=(PROBE,))

with (HERE / "synthetic_measurement.csv").open("w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "Tin", "Tout", "Tw_out", "Tm_probe", "v", "Tamb"])
    for k, t in enumerate(out.t):
        wall = f"{out.Tw_out[k]:.9g}" if k % 5 == 0 else ""
        amb = "22" if k == 0 else ""
        w.writerow([f"{t:.9g}", f"{t_in(t):.9g}", f"{out.Tm_out[k]:.9g}", wall,
                    f"{out.columns[probe_column(PROBE)][k]:.9g}", f"{v(t):.9g}", amb])
