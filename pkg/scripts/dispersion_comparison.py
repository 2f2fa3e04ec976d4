#!/usr/bin/env python3
"""Sweep all five dispersion relations side by side and write a CSV.

Usage: python scripts/dispersion_comparison.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from qfluid import dispersion
from qfluid.csvio import write_csv
from qfluid.params import nondimensional


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
    outdir.mkdir(parents=True, exist_ok=True)
    params = nondimensional(hbar=0.5, T0_par=0.1)
    ks = np.linspace(0.0, 3.0, 301)

    cols = [("k", ks),
            ("general", dispersion.general_omega_sq(ks, params)),
            ("quantum_langmuir", dispersion.quantum_langmuir_omega_sq(ks, params)),
            ("bohm_gross", dispersion.bohm_gross_omega_sq(ks, params)),
            ("adiabatic_5_3", dispersion.adiabatic_omega_sq(ks, params, 5.0 / 3.0)),
            ("temperature_closure", dispersion.temperature_closure_omega_sq(ks, params))]
    path = outdir / "dispersion_comparison.csv"
    write_csv(path, cols, command="scripts/dispersion_comparison.py",
              extra_comments=("omega^2 vs k, nondimensional, hbar=0.5, T0_par=0.1",))
    print(f"wrote {path}")
    for k_probe in (0.5, 1.0, 2.0):
        row = {name: float(arr[np.argmin(np.abs(ks - k_probe))]) for name, arr in cols}
        print(f"k={k_probe:4.1f}  " + "  ".join(f"{n}={v:.4f}" for n, v in row.items()
                                                if n != "k"))


if __name__ == "__main__":
    main()
