"""Physical parameters, derived scales, and nondimensionalization.

Everything downstream (dispersion relations, the 1D fluid solver, the
traveling-wave reduction) reads its constants from a ``PlasmaParams``
instance.  Two presets are provided: a nondimensional one in which
e = m = eps0 = kB = 1, and an SI electron preset with CODATA constants.

Sign convention: ``e`` is the (positive) magnitude of the elementary
charge; the momentum equation carries the force term +(e/m) d(phi)/dx and
Poisson's equation reads d2(phi)/dx2 = (e/eps0)(n - n0).  These two are
mutually consistent for electrons on a fixed ion background and must not
be "corrected" independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

__all__ = [
    "PlasmaParams",
    "NondimScheme",
    "nondimensional",
    "si_electron",
    "derived_omega_p",
    "make_nondim",
    "parse_params_config",
    "load_params_config",
]

# CODATA 2018 recommended values (SI)
_E_SI = 1.602176634e-19        # elementary charge [C]
_ME_SI = 9.1093837015e-31      # electron mass [kg]
_EPS0_SI = 8.8541878128e-12    # vacuum permittivity [F/m]
_HBAR_SI = 1.054571817e-34     # reduced Planck constant [J s]
_KB_SI = 1.380649e-23          # Boltzmann constant [J/K]


@dataclass(frozen=True)
class PlasmaParams:
    """Equilibrium plasma parameters and physical constants.

    Attributes
    ----------
    n0 : equilibrium number density [m^-3]
    m : particle mass [kg]
    e : elementary charge magnitude [C]
    eps0 : vacuum permittivity [F/m]
    hbar : reduced Planck constant [J s]
    T0_par : equilibrium temperature parallel to the wave vector [K]
    T0_perp : equilibrium temperature perpendicular to the wave vector [K]
    kB : Boltzmann constant [J/K]
    """

    n0: float
    m: float
    e: float
    eps0: float
    hbar: float
    T0_par: float = 0.0
    T0_perp: float = 0.0
    kB: float = 1.0

    def __post_init__(self):
        for name in ("n0", "m", "e", "eps0", "kB"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"parameter {name!r} must be finite and positive, got {value!r}")
        # hbar = 0 is the formal classical limit and is used throughout
        for name in ("hbar", "T0_par", "T0_perp"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ConfigError(f"parameter {name!r} must be finite and non-negative, got {value!r}")
        if not math.isfinite(self.omega_p):
            raise ConfigError("derived plasma frequency is not finite")

    @property
    def omega_p(self) -> float:
        """Plasma frequency sqrt(e^2 n0 / (m eps0)) [rad/s]."""
        return math.sqrt(self.e**2 * self.n0 / (self.m * self.eps0))

    @property
    def vt2_par(self) -> float:
        """Squared parallel thermal speed kB T0_par / m [m^2/s^2]."""
        return self.kB * self.T0_par / self.m

    def with_(self, **changes) -> "PlasmaParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


@dataclass(frozen=True)
class NondimScheme:
    """Derived scales for casting the equations in dimensionless form.

    ``H`` is the quantum coupling hbar * omega_p / (m u0^2) that controls
    the wave-frame dynamics.
    """

    length_scale: float
    time_scale: float
    velocity_scale: float
    H: float

    def __post_init__(self):
        if not math.isclose(self.velocity_scale, self.length_scale / self.time_scale,
                            rel_tol=1e-12):
            raise ConfigError("inconsistent scheme: velocity_scale != length_scale / time_scale")
        if self.H < 0.0:
            raise ConfigError("quantum parameter H must be non-negative")


def nondimensional(hbar: float = 1.0, T0_par: float = 0.0, T0_perp: float = 0.0,
                   n0: float = 1.0) -> PlasmaParams:
    """Nondimensional preset: e = m = eps0 = kB = 1; hbar and temperatures free.

    With the default n0 = 1 the plasma frequency is exactly 1.
    """
    return PlasmaParams(n0=n0, m=1.0, e=1.0, eps0=1.0, hbar=hbar,
                        T0_par=T0_par, T0_perp=T0_perp, kB=1.0)


def si_electron(n0: float, T0_par: float = 0.0, T0_perp: float = 0.0) -> PlasmaParams:
    """SI electron preset with CODATA 2018 constants."""
    return PlasmaParams(n0=n0, m=_ME_SI, e=_E_SI, eps0=_EPS0_SI, hbar=_HBAR_SI,
                        T0_par=T0_par, T0_perp=T0_perp, kB=_KB_SI)


def derived_omega_p(params: PlasmaParams) -> float:
    """Plasma frequency sqrt(e^2 n0 / (m eps0)) [rad/s]."""
    return params.omega_p


def make_nondim(params: PlasmaParams, u0: float) -> NondimScheme:
    """Build the wave-frame nondimensionalization for reference velocity u0.

    time_scale = 1/omega_p, velocity_scale = |u0|, and
    H = hbar omega_p / (m u0^2).  u0 = 0 is excluded (the wave-frame
    reduction degenerates there).
    """
    if u0 == 0.0:
        raise ConfigError("reference velocity u0 must be nonzero")
    wp = params.omega_p
    return NondimScheme(
        length_scale=abs(u0) / wp,
        time_scale=1.0 / wp,
        velocity_scale=abs(u0),
        H=params.hbar * wp / (params.m * u0**2),
    )


_PRESETS = {"nondim": nondimensional, "si-electron": si_electron}
_FLOAT_KEYS = tuple(f.name for f in fields(PlasmaParams))


def parse_params_config(text: str) -> PlasmaParams:
    """Parse a key=value parameter config.

    Lines are ``key = value`` with '#' comments.  A ``preset`` key
    ("nondim" or "si-electron") supplies defaults that later keys override;
    without a preset every parameter field must be given.  Unknown keys are
    an error.
    """
    values: dict[str, float] = {}
    preset: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "preset":
            if val not in _PRESETS:
                raise ConfigError(f"line {lineno}: unknown preset {val!r} "
                                  f"(choices: {sorted(_PRESETS)})")
            preset = val
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(val)
            except ValueError:
                raise ConfigError(f"line {lineno}: key {key!r} has non-numeric value {val!r}") from None
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    if preset == "nondim":
        base = nondimensional()
    elif preset == "si-electron":
        base = si_electron(n0=values.get("n0", 1.0))
    else:
        missing = [k for k in _FLOAT_KEYS if k not in values]
        if missing:
            raise ConfigError(f"no preset given and parameters missing: {missing}")
        base = PlasmaParams(**values)
        return base
    return base.with_(**values)


def load_params_config(path) -> PlasmaParams:
    """Read and parse a key=value parameter config file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_params_config(fh.read())
