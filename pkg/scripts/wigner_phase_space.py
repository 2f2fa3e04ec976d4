#!/usr/bin/env python3
"""Phase-space snapshots of the spreading free Gaussian packet.

Writes (x_bar, v_bar, f_bar) grids at rescaled times 0, 2, 4, 6 for
contour plotting; the rescaled distribution shear-transports without
spreading at fixed velocity.

Usage: python scripts/wigner_phase_space.py [outdir]
"""

import math
import sys
from pathlib import Path

import numpy as np

from qfluid import wigner
from qfluid.csvio import write_csv


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
    outdir.mkdir(parents=True, exist_ok=True)
    x = np.linspace(-12, 12, 256)
    v = np.linspace(-4, 4, 256)
    for t in (0.0, 2.0, 4.0, 6.0):
        half_width = max(14.0, 8.0 * math.sqrt(1.0 + t * t))
        wfg = wigner.evolve_free_gaussian(1.0, t, half_width, n_points=1024)
        table = wigner.wigner_transform(wfg, v=v, x=x)
        X, V = np.meshgrid(x, v, indexing="ij")
        f_bar = (np.pi * table.f).T
        path = outdir / f"wigner_t{t:g}.csv"
        write_csv(path, [("x_bar", X.ravel()), ("v_bar", V.ravel()),
                         ("f_bar", f_bar.ravel())],
                  command="scripts/wigner_phase_space.py",
                  extra_comments=(f"t_bar={t!r}",))
        err = np.max(np.abs(f_bar - wigner.analytic_wigner(X, V, t)))
        print(f"wrote {path} (max deviation from closed form {err:.2e})")


if __name__ == "__main__":
    main()
