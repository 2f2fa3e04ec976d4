"""Traveling-wave reduction of the 1D moment system.

In the wave frame xi = x - v t the system becomes five first-order ODEs
for (u, p, Q, phi, psi = phi').  The continuity equation integrates to
n (u - v) = n0 u0 = const, so the density is a derived quantity and the
constraint holds identically along any trajectory.  Eliminating phi'''
through phi''' = (e/eps0) n' = -(e/eps0) n u' / (u - v) leaves a linear
3x3 system for (u', p', Q'):

    [ u-v              1/(m n)      0   ] [u']   [ (e/m) psi ]
    [ 3p               u-v          1   ] [p'] = [ 0         ]
    [ 4Q - Hq/(u-v)   -3p/(m n)    u-v  ] [Q']   [ 0         ],

    Hq = e^2 hbar^2 n^2 / (4 m^2 eps0),

with determinant (u-v)^3 + 4Q/(m n) - Hq/(m n (u-v)).  At the equilibrium
u = u0 + v, p = p0, Q = 0 the determinant is u0^3 (1 - H^2/4) with
H = hbar wp / (m u0^2): the system is singular exactly at H = 2, the
equilibrium is a center (bounded oscillations) for H < 2 and a saddle
for H > 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SonicSingularityError
from .ode import OdeResult, integrate_adaptive
from .params import PlasmaParams, nondimensional

__all__ = [
    "WaveFrameConfig",
    "TravelingState",
    "wave_frame_config",
    "density",
    "traveling_rhs",
    "equilibrium_state",
    "reference_oscillation_state",
    "integrate",
    "Trajectory",
    "equilibrium_eigenvalues",
    "classify_equilibrium",
    "stability_threshold",
]

_DET_RTOL = 1e-12
_STABLE_TOL = 1e-8  # on max Re(lambda), in units of wp/|u0|


@dataclass(frozen=True)
class WaveFrameConfig:
    """Frame speed v, reference velocity u0 (nonzero), and plasma parameters."""

    v: float
    u0: float
    params: PlasmaParams

    def __post_init__(self):
        if self.u0 == 0.0:
            raise ConfigError("reference velocity u0 must be nonzero")

    @property
    def H(self) -> float:
        """Quantum parameter hbar wp / (m u0^2)."""
        p = self.params
        return p.hbar * p.omega_p / (p.m * self.u0**2)


@dataclass(frozen=True)
class TravelingState:
    """Wave-frame state (u, p, Q, phi, psi = phi') at position xi."""

    xi: float
    u: float
    p: float
    Q: float
    phi: float
    psi: float

    def vector(self) -> np.ndarray:
        return np.array([self.u, self.p, self.Q, self.phi, self.psi])


def wave_frame_config(H: float, u0: float = 1.0, v: float = 0.0,
                      n0: float = 1.0) -> WaveFrameConfig:
    """Nondimensional wave-frame setup with a single quantum knob H.

    Uses the nondimensional preset (wp = sqrt(n0)); hbar is chosen so
    that hbar wp / (m u0^2) equals H exactly.
    """
    if H < 0.0:
        raise ConfigError("quantum parameter H must be non-negative")
    base = nondimensional(n0=n0)
    return WaveFrameConfig(v=v, u0=u0,
                           params=base.with_(hbar=H * base.m * u0**2 / base.omega_p))


def density(u: float, cfg: WaveFrameConfig, eps_sonic: float = 1e-9) -> float:
    """Derived density n = n0 u0 / (u - v); the exact continuity integral."""
    w = u - cfg.v
    if abs(w) <= eps_sonic * abs(cfg.u0):
        raise SonicSingularityError(f"frame-relative velocity vanished (u - v = {w:.3e})")
    n = cfg.params.n0 * cfg.u0 / w
    if n <= 0.0:
        raise SonicSingularityError(f"derived density nonpositive (n = {n:.3e})")
    return n


def _derivative_system(y: np.ndarray, cfg: WaveFrameConfig,
                       eps_sonic: float) -> tuple[np.ndarray, np.ndarray, float]:
    u, p, Q, phi, psi = y
    par = cfg.params
    w = u - cfg.v
    n = density(u, cfg, eps_sonic)
    hq = (par.e * par.hbar) ** 2 * n**2 / (4.0 * par.m**2 * par.eps0)
    M = np.array([
        [w, 1.0 / (par.m * n), 0.0],
        [3.0 * p, w, 1.0],
        [4.0 * Q - hq / w, -3.0 * p / (par.m * n), w],
    ])
    b = np.array([(par.e / par.m) * psi, 0.0, 0.0])
    det = w**3 + (4.0 * Q - hq / w) / (par.m * n)
    return M, b, det


def traveling_rhs(y, cfg: WaveFrameConfig, eps_sonic: float = 1e-9) -> np.ndarray:
    """Derivatives (u', p', Q', phi', psi') at state vector y.

    Raises ``SonicSingularityError`` when |u - v| collapses or the 3x3
    derivative matrix is singular to within tolerance.
    """
    y = np.asarray(y, dtype=float)
    M, b, det = _derivative_system(y, cfg, eps_sonic)
    norm = float(np.linalg.norm(M, np.inf))
    if abs(det) <= _DET_RTOL * norm**3:
        raise SonicSingularityError(
            f"derivative system singular at u = {y[0]:.9g} (det = {det:.3e})")
    dupQ = np.linalg.solve(M, b)
    n = density(y[0], cfg, eps_sonic)
    par = cfg.params
    return np.array([dupQ[0], dupQ[1], dupQ[2], y[4],
                     (par.e / par.eps0) * (n - par.n0)])


def equilibrium_state(cfg: WaveFrameConfig, p0: float) -> TravelingState:
    """The fixed point u = u0 + v, p = p0, Q = 0, phi = psi = 0."""
    return TravelingState(xi=0.0, u=cfg.u0 + cfg.v, p=p0, Q=0.0, phi=0.0, psi=0.0)


def reference_oscillation_state(cfg: WaveFrameConfig,
                                density_ratio: float = 2.0 / 3.0,
                                p0_scale: float = 1.0) -> TravelingState:
    """Density-dip launch state for the oscillation runs.

    n(0) = density_ratio * n0 (so u(0) - v = u0 / density_ratio),
    p(0) = p0_scale * m n0 u0^2, Q(0) = phi(0) = phi'(0) = 0.
    """
    if not 0.0 < density_ratio:
        raise ConfigError("density ratio must be positive")
    par = cfg.params
    return TravelingState(
        xi=0.0,
        u=cfg.v + cfg.u0 / density_ratio,
        p=p0_scale * par.m * par.n0 * cfg.u0**2,
        Q=0.0, phi=0.0, psi=0.0)


@dataclass
class Trajectory:
    """Sampled wave-frame trajectory with derived density and field."""

    xi: np.ndarray
    u: np.ndarray
    p: np.ndarray
    Q: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    n: np.ndarray
    halt_reason: str | None
    cfg: WaveFrameConfig

    @property
    def completed(self) -> bool:
        return self.halt_reason is None

    @property
    def E(self) -> np.ndarray:
        """Electric field E = -phi'."""
        return -self.psi


def integrate(initial: TravelingState, cfg: WaveFrameConfig, xi_max: float,
              tol: float = 1e-9, n_samples: int = 2048,
              eps_sonic: float = 1e-9) -> Trajectory:
    """Integrate the wave-frame system over xi in [initial.xi, xi_max].

    Adaptive embedded RK pair at relative tolerance ``tol``; on a sonic
    singularity the partial trajectory is returned with the halt reason.
    """
    y0 = initial.vector()
    samples = np.linspace(initial.xi, xi_max, n_samples + 1)
    atol = tol * 1e-3 * max(1.0, float(np.max(np.abs(y0))))
    res: OdeResult = integrate_adaptive(
        lambda xi, y: traveling_rhs(y, cfg, eps_sonic),
        y0, xi_max, x0=initial.xi, rtol=tol, atol=atol,
        sample_points=samples, halt_on=(SonicSingularityError,))
    u = res.y[:, 0]
    n = cfg.params.n0 * cfg.u0 / (u - cfg.v)
    return Trajectory(xi=res.x, u=u, p=res.y[:, 1], Q=res.y[:, 2],
                      phi=res.y[:, 3], psi=res.y[:, 4], n=n,
                      halt_reason=res.halt_reason, cfg=cfg)


def equilibrium_eigenvalues(cfg: WaveFrameConfig, p0: float | None = None,
                            fd_step: float = 1e-7) -> np.ndarray:
    """Eigenvalues of the 5x5 Jacobian at the equilibrium point.

    Central finite differences with steps scaled to natural state
    magnitudes.  For H < 2 the spectrum is a purely imaginary pair plus
    three zero modes; for H > 2 the pair moves onto the real axis.
    """
    par = cfg.params
    if p0 is None:
        p0 = par.m * par.n0 * cfg.u0**2
    y0 = equilibrium_state(cfg, p0).vector()
    u0a, wp = abs(cfg.u0), par.omega_p
    scales = np.array([
        u0a,
        max(p0, par.m * par.n0 * u0a**2),
        par.m * par.n0 * u0a**3,                 # heat-flux scale
        par.m * u0a**2 / par.e,                  # potential scale
        par.m * u0a * wp / par.e,                # field (phi') scale
    ])
    J = np.empty((5, 5))
    for j in range(5):
        dy = np.zeros(5)
        dy[j] = fd_step * scales[j]
        J[:, j] = (traveling_rhs(y0 + dy, cfg) - traveling_rhs(y0 - dy, cfg)) / (2.0 * dy[j])
    return np.linalg.eigvals(J)


def classify_equilibrium(cfg: WaveFrameConfig, p0: float | None = None) -> str:
    """"center-like" when all eigenvalue real parts are below tolerance, else "unstable"."""
    eigs = equilibrium_eigenvalues(cfg, p0)
    rate_scale = cfg.params.omega_p / abs(cfg.u0)
    return "center-like" if float(np.max(eigs.real)) < _STABLE_TOL * rate_scale else "unstable"


def stability_threshold(h_lo: float, h_hi: float, config_for=wave_frame_config,
                        p0: float | None = None, tol: float = 1e-6) -> float:
    """Bisect the quantum parameter for loss of equilibrium stability.

    ``config_for(H)`` must build a WaveFrameConfig for a given H; the
    bracket must classify differently at its ends.  A singular Jacobian
    evaluation (the sonic point reaches the equilibrium at marginality)
    counts as the unstable side.
    """
    def is_unstable(H: float) -> bool:
        try:
            return classify_equilibrium(config_for(H), p0) == "unstable"
        except SonicSingularityError:
            return True

    lo_unstable, hi_unstable = is_unstable(h_lo), is_unstable(h_hi)
    if lo_unstable == hi_unstable:
        raise ConfigError(
            f"no stability change in bracket [{h_lo}, {h_hi}] "
            f"(both {'unstable' if lo_unstable else 'center-like'})")
    lo, hi = float(h_lo), float(h_hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_unstable(mid) == hi_unstable:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
