#!/usr/bin/env python3
"""Wave-frame oscillation run at quantum parameter H = 1 plus the
stability boundary, written as CSVs.

The launch state is the density-dip configuration n(0) = (2/3) n0,
p(0) = m n0 u0^2, Q(0) = phi(0) = phi'(0) = 0; for H < 2 the trajectory
oscillates boundedly around the equilibrium.

Usage: python scripts/traveling_oscillations.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from qfluid import traveling
from qfluid.csvio import write_csv
from qfluid.errors import SonicSingularityError


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
    outdir.mkdir(parents=True, exist_ok=True)

    cfg = traveling.wave_frame_config(H=1.0)
    start = traveling.reference_oscillation_state(cfg)
    traj = traveling.integrate(start, cfg, xi_max=60.0, tol=1e-10)
    path = outdir / "traveling_H1.csv"
    write_csv(path, [("xi", traj.xi), ("n", traj.n), ("u", traj.u),
                     ("p", traj.p), ("Q", traj.Q), ("phi", traj.phi),
                     ("E", traj.E)],
              command="scripts/traveling_oscillations.py")
    print(f"wrote {path}")
    print(f"n range [{traj.n.min():.4f}, {traj.n.max():.4f}], "
          f"u range [{traj.u.min():.4f}, {traj.u.max():.4f}]")

    hs = np.linspace(0.0, 3.0, 13)
    max_re = []
    for H in hs:
        try:
            eig = traveling.equilibrium_eigenvalues(traveling.wave_frame_config(float(H)))
            max_re.append(float(np.max(eig.real)))
        except SonicSingularityError:
            max_re.append(float("nan"))  # marginal point: derivative system singular
    path2 = outdir / "stability_vs_H.csv"
    write_csv(path2, [("H", hs), ("max_real_eigenvalue", np.array(max_re))],
              command="scripts/traveling_oscillations.py")
    h_crit = traveling.stability_threshold(1.0, 3.0)
    print(f"wrote {path2}; stability boundary at H = {h_crit:.6f}")


if __name__ == "__main__":
    main()
