"""First-order pressure-dyad response to an electrostatic plane wave.

For a wave along z with potential amplitude dphi at (k, omega^2), the
linearized hierarchy gives

    dP_ij = -(e dphi k^2 / (m omega^2))
            * (P0_ij + P0_iz d_jz + P0_jz d_iz + n0 hbar^2 k^2 d_iz d_jz / (4 m))

so the wave drives the zz component three times harder than the
transverse ones even for an isotropic equilibrium, plus a quantum
contribution: a propagating wave is itself a source of pressure
anisotropy, which is why a scalar-pressure closure cannot be consistent
here.

Symmetrization convention used throughout the hierarchy: a bracketed
index group is expanded as the minimal sum over permutations of the free
indices needed to make the tensor symmetric.  For the two free indices
above this is the two-term sum written out explicitly; the three-index
analogues in the heat-flux equation expand to three cyclic terms.  That
convention is what reproduces the 1D coefficients (3 p du, 4 Q du) and
the general dispersion relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .params import PlasmaParams

__all__ = [
    "PerturbationInput",
    "delta_P",
    "delta_P_for_direction",
    "anisotropic_dyad",
    "rotation_to_z",
]

_SYM_ATOL = 1e-12


@dataclass(frozen=True)
class PerturbationInput:
    """Inputs for the pressure-dyad perturbation at one (k, omega^2) point."""

    k: float
    omega_sq: float
    delta_phi: float
    P0: np.ndarray = field(repr=False)     # 3x3 symmetric equilibrium pressure
    params: PlasmaParams = field(repr=False)

    def __post_init__(self):
        if not self.omega_sq > 0.0:
            raise ConfigError(f"linear response requires omega^2 > 0, got {self.omega_sq}")
        P0 = np.asarray(self.P0, dtype=float)
        if P0.shape != (3, 3):
            raise ConfigError(f"P0 must be 3x3, got shape {P0.shape}")
        scale = max(float(np.max(np.abs(P0))), 1.0)
        if np.max(np.abs(P0 - P0.T)) > _SYM_ATOL * scale:
            raise ConfigError("P0 must be symmetric")
        object.__setattr__(self, "P0", 0.5 * (P0 + P0.T))


def delta_P(inp: PerturbationInput) -> np.ndarray:
    """First-order pressure perturbation tensor (3x3, exactly symmetric).

    Linear in delta_phi; for diagonal P0 the output stays diagonal.
    """
    p = inp.params
    coeff = p.e * inp.delta_phi * inp.k**2 / (p.m * inp.omega_sq)
    col_z = np.outer(inp.P0[:, 2], np.array([0.0, 0.0, 1.0]))
    tensor = inp.P0 + col_z + col_z.T
    tensor[2, 2] += p.n0 * p.hbar**2 * inp.k**2 / (4.0 * p.m)
    return -coeff * tensor


def anisotropic_dyad(n: float, T_perp: float, T_par: float,
                     params: PlasmaParams) -> np.ndarray:
    """Equilibrium pressure dyad n kB diag(T_perp, T_perp, T_par)."""
    if n < 0.0 or T_perp < 0.0 or T_par < 0.0:
        raise ConfigError("density and temperatures must be non-negative")
    return n * params.kB * np.diag([T_perp, T_perp, T_par])


def rotation_to_z(khat: np.ndarray) -> np.ndarray:
    """Rotation matrix R with R @ khat = z_hat (minimal-angle rotation)."""
    khat = np.asarray(khat, dtype=float)
    norm = np.linalg.norm(khat)
    if norm == 0.0:
        raise ConfigError("propagation direction must be nonzero")
    a = khat / norm
    z = np.array([0.0, 0.0, 1.0])
    c = float(a @ z)
    if np.isclose(c, 1.0):
        return np.eye(3)
    if np.isclose(c, -1.0):
        return np.diag([1.0, -1.0, -1.0])
    v = np.cross(a, z)
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def delta_P_for_direction(k: float, omega_sq: float, delta_phi: float,
                          P0: np.ndarray, params: PlasmaParams,
                          khat: np.ndarray) -> np.ndarray:
    """Pressure perturbation for propagation along an arbitrary unit vector.

    Conjugates the along-z formula with the rotation taking khat to z:
    P0 is rotated into the wave frame, the response evaluated there, and
    the result rotated back.
    """
    R = rotation_to_z(khat)
    inp = PerturbationInput(k=k, omega_sq=omega_sq, delta_phi=delta_phi,
                            P0=R @ np.asarray(P0, dtype=float) @ R.T, params=params)
    dP = delta_P(inp)
    return R.T @ dP @ R
