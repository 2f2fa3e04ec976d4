"""Velocity moments of a tabulated phase-space distribution.

Given f(v) sampled on a 1D or 3D velocity grid, computes the hierarchy

    n      = int f dv
    n u_i  = int v_i f dv
    P_ij   = m int (v-u)_i (v-u)_j f dv
    Q_ijk  = m int (v-u)_i (v-u)_j (v-u)_k f dv
    R_ijkl = m int (v-u)_i (v-u)_j (v-u)_k (v-u)_l f dv

plus the scalar reductions p = trace(P)/3 (or P_xx in 1D) and
q_i = Q_jji / 2.  f may be negative (Wigner functions are quasi-
distributions); only the density must come out positive for the bulk
velocity to be defined.

P, Q and R are exactly symmetric under index permutation by construction:
only canonically ordered components are computed and the rest are filled
in by copying, so equality of permuted components is bitwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, MomentError

__all__ = [
    "VelocityGrid",
    "MomentSet",
    "compute_moments",
    "scalar_reductions",
    "maxwellian",
    "load_distribution_csv",
    "save_distribution_csv",
]

_MIN_NODES = 8


def _trapezoid_weights(nodes: np.ndarray) -> np.ndarray:
    w = np.zeros_like(nodes)
    d = np.diff(nodes)
    w[:-1] += 0.5 * d
    w[1:] += 0.5 * d
    return w


@dataclass(frozen=True)
class VelocityGrid:
    """Per-axis quadrature nodes and weights for velocity-space integrals.

    ``axes`` and ``weights`` are tuples of 1D arrays, one pair per velocity
    dimension (1 or 3).  Nodes must be strictly increasing and weights
    positive, with at least 8 nodes per axis.
    """

    axes: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.axes) not in (1, 3):
            raise ConfigError(f"velocity grid must be 1D or 3D, got {len(self.axes)} axes")
        if len(self.weights) != len(self.axes):
            raise ConfigError("axes and weights length mismatch")
        for ax, (nodes, w) in enumerate(zip(self.axes, self.weights)):
            if nodes.ndim != 1 or w.shape != nodes.shape:
                raise ConfigError(f"axis {ax}: nodes and weights must be matching 1D arrays")
            if len(nodes) < _MIN_NODES:
                raise ConfigError(f"axis {ax}: need at least {_MIN_NODES} nodes, got {len(nodes)}")
            if not np.all(np.diff(nodes) > 0):
                raise ConfigError(f"axis {ax}: nodes must be strictly increasing")
            if not np.all(w > 0):
                raise ConfigError(f"axis {ax}: weights must be positive")

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    @classmethod
    def uniform(cls, d: int, v_max: float, n: int, center: float = 0.0) -> "VelocityGrid":
        """Uniform symmetric grid on [center - v_max, center + v_max] with trapezoid weights."""
        nodes = np.linspace(center - v_max, center + v_max, n)
        w = _trapezoid_weights(nodes)
        return cls(axes=(nodes,) * d, weights=(w,) * d)

    @classmethod
    def from_nodes(cls, *axes: np.ndarray) -> "VelocityGrid":
        """Trapezoid-weight grid from user-supplied (possibly nonuniform) nodes."""
        axes = tuple(np.asarray(a, dtype=float) for a in axes)
        return cls(axes=axes, weights=tuple(_trapezoid_weights(a) for a in axes))

    @classmethod
    def gauss_hermite(cls, d: int, n: int, scale: float = 1.0,
                      center: float = 0.0) -> "VelocityGrid":
        """Gauss-Hermite nodes for Gaussian-decaying integrands.

        The exp(+x^2) factor is folded into the weights so plain sums
        W * f approximate int f dv for f with Gaussian tails of width
        ~scale.
        """
        x, w = np.polynomial.hermite.hermgauss(n)
        nodes = center + scale * x
        weights = scale * w * np.exp(x**2)
        return cls(axes=(nodes,) * d, weights=(weights,) * d)


@dataclass(frozen=True)
class MomentSet:
    """Moments of one distribution: n, u, P, Q, R plus scalar p and q.

    ``boundary_ok`` is False when the tabulated distribution had not
    decayed below threshold at the grid boundary, in which case the
    moments may be truncation-polluted.
    """

    n: float
    u: np.ndarray          # (d,)
    P: np.ndarray          # (d, d)
    Q: np.ndarray          # (d, d, d)
    R: np.ndarray          # (d, d, d, d)
    p: float
    q: np.ndarray          # (d,)
    boundary_ok: bool = True

    @property
    def d(self) -> int:
        return len(self.u)

    def to_dict(self) -> dict:
        """Flat name -> value mapping for serialization / diagnostics."""
        out = {"n": self.n, "p": self.p, "boundary_ok": self.boundary_ok}
        names = "xyz"[: self.d]
        for i, ni in enumerate(names):
            out[f"u_{ni}"] = float(self.u[i])
            out[f"q_{ni}"] = float(self.q[i])
        for idx in itertools.combinations_with_replacement(range(self.d), 2):
            out["P_" + "".join(names[i] for i in idx)] = float(self.P[idx])
        for idx in itertools.combinations_with_replacement(range(self.d), 3):
            out["Q_" + "".join(names[i] for i in idx)] = float(self.Q[idx])
        for idx in itertools.combinations_with_replacement(range(self.d), 4):
            out["R_" + "".join(names[i] for i in idx)] = float(self.R[idx])
        return out


def _boundary_max(f: np.ndarray) -> float:
    """Largest |f| on any outermost grid slice."""
    worst = 0.0
    for ax in range(f.ndim):
        first = np.take(f, 0, axis=ax)
        last = np.take(f, -1, axis=ax)
        worst = max(worst, float(np.max(np.abs(first))), float(np.max(np.abs(last))))
    return worst


def _symmetric_tensor(rank: int, d: int, component) -> np.ndarray:
    """Fill a rank-``rank`` tensor from canonically ordered components.

    ``component(idx)`` is evaluated once per sorted index tuple and the
    value is broadcast to every permutation, making permutation symmetry
    exact by construction.
    """
    T = np.empty((d,) * rank)
    for idx in itertools.combinations_with_replacement(range(d), rank):
        val = component(idx)
        for perm in set(itertools.permutations(idx)):
            T[perm] = val
    return T


def compute_moments(f: np.ndarray, grid: VelocityGrid, mass: float = 1.0,
                    boundary_threshold: float = 1e-10) -> MomentSet:
    """Moments of f tabulated on ``grid`` by tensor-product quadrature.

    Raises ``MomentError`` when the density is nonpositive within
    quadrature tolerance (the bulk velocity is then undefined).  A
    boundary decay violation (max |f| on the boundary above
    ``boundary_threshold`` times the global max) only flags the result.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != grid.shape:
        raise ConfigError(f"distribution shape {f.shape} does not match grid {grid.shape}")
    d = grid.d

    fmax = float(np.max(np.abs(f)))
    boundary_ok = fmax == 0.0 or _boundary_max(f) <= boundary_threshold * fmax

    # W[a,b,...] = prod of per-axis weights; shaped velocity arrays per axis
    W = grid.weights[0]
    for w in grid.weights[1:]:
        W = np.multiply.outer(W, w)
    vs = []
    for ax in range(d):
        shape = [1] * d
        shape[ax] = len(grid.axes[ax])
        vs.append(grid.axes[ax].reshape(shape))

    wf = W * f
    n = float(np.sum(wf))
    abs_scale = float(np.sum(W * np.abs(f)))
    if n <= 1e-12 * abs_scale or n <= 0.0:
        raise MomentError(f"density nonpositive within quadrature tolerance (n = {n:.3e})")

    u = np.array([float(np.sum(wf * vs[ax])) / n for ax in range(d)])
    dv = [vs[ax] - u[ax] for ax in range(d)]

    def central(idx) -> float:
        g = wf
        for ax in idx:
            g = g * dv[ax]
        return mass * float(np.sum(g))

    P = _symmetric_tensor(2, d, central)
    Q = _symmetric_tensor(3, d, central)
    R = _symmetric_tensor(4, d, central)
    p, q = _reduce(P, Q, d)
    return MomentSet(n=n, u=u, P=P, Q=Q, R=R, p=p, q=q, boundary_ok=boundary_ok)


def _reduce(P: np.ndarray, Q: np.ndarray, d: int) -> tuple[float, np.ndarray]:
    p = float(np.trace(P)) / 3.0 if d == 3 else float(P[0, 0])
    q = 0.5 * np.einsum("jji->i", Q)
    return p, q


def scalar_reductions(mset: MomentSet) -> tuple[float, np.ndarray]:
    """Scalar pressure and heat-flux vector: p = trace(P)/3 (P_xx in 1D), q_i = Q_jji/2."""
    return _reduce(mset.P, mset.Q, mset.d)


def maxwellian(grid: VelocityGrid, density: float, temperature,
               drift=None, mass: float = 1.0, kB: float = 1.0) -> np.ndarray:
    """Tabulated (bi-)Maxwellian on ``grid``.

    ``temperature`` is a scalar or a per-axis sequence (anisotropic);
    ``drift`` a scalar (1D) or d-vector.  Normalized so the exact density
    is ``density``.
    """
    d = grid.d
    T = np.broadcast_to(np.asarray(temperature, dtype=float), (d,))
    w = np.zeros(d) if drift is None else np.broadcast_to(np.asarray(drift, dtype=float), (d,))
    theta = kB * T / mass
    out = np.full(grid.shape, density / np.prod(np.sqrt(2.0 * np.pi * theta)))
    for ax in range(d):
        shape = [1] * d
        shape[ax] = len(grid.axes[ax])
        vax = grid.axes[ax].reshape(shape)
        out = out * np.exp(-0.5 * (vax - w[ax]) ** 2 / theta[ax])
    return out


def save_distribution_csv(path, f: np.ndarray, grid: VelocityGrid) -> None:
    """Write a tabulated distribution as CSV (axis columns + value column)."""
    d = grid.d
    cols = np.meshgrid(*grid.axes, indexing="ij")
    header = ",".join(f"v{i+1}" for i in range(d)) + ",f" if d == 3 else "v,f"
    rows = np.column_stack([c.ravel() for c in cols] + [np.asarray(f).ravel()])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(f"{x:.16e}" for x in row) + "\n")


def load_distribution_csv(path) -> tuple[np.ndarray, VelocityGrid]:
    """Read a distribution written by ``save_distribution_csv``.

    1D files have columns (v, f); 3D files (v1, v2, v3, f) in row-major
    tensor-product order.  Grid weights are rebuilt by the trapezoid rule.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",")
    if header == ["v", "f"]:
        nodes, vals = data[:, 0], data[:, 1]
        grid = VelocityGrid.from_nodes(nodes)
        return vals, grid
    if header == ["v1", "v2", "v3", "f"]:
        axes = [np.unique(data[:, i]) for i in range(3)]
        shape = tuple(len(a) for a in axes)
        if np.prod(shape) != data.shape[0]:
            raise ConfigError("3D distribution file is not a complete tensor product")
        vals = data[:, 3].reshape(shape)
        grid = VelocityGrid.from_nodes(*axes)
        return vals, grid
    raise ConfigError(f"unrecognized distribution header {header!r}")
