"""Radially symmetric solutions of the 3D wave equation with zero initial velocity.

For ``f(x) = g(|x|)`` the function ``v = r u`` solves the 1D wave equation on
the half line with ``v(t, 0) = 0``.  Extending ``s g(|s|)`` oddly to the whole
line gives d'Alembert's formula

    u(t, r) = [G(r + t) + G(r - t)] / (2 r),    G(s) = s g(|s|),

whose limit at the origin is ``g(t) + t g'(t)``.  A leapfrog solver for the same
half-line problem is kept here as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .core import RadialField, RadialGrid

__all__ = [
    "RadialProfile",
    "TransitionFamilyParams",
    "make_transition_profile",
    "gaussian_profile",
    "bump_profile",
    "propagate_radial",
    "evaluate_radial",
    "center_value",
    "fd_wave_oracle",
    "wave_propagator",
]

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A radial function ``g`` on ``[0, inf)`` together with ``g'``.

    ``feature_width`` is the length scale of the sharpest transition, used to
    check that finite-difference grids resolve the profile.
    """

    value: Func
    derivative: Func
    support_radius: float = np.inf
    feature_width: float | None = None

    def __call__(self, r):
        return self.value(np.asarray(r, dtype=float))

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        widths = [w for w in (self.feature_width, other.feature_width) if w]
        return RadialProfile(
            lambda r: self.value(r) + other.value(r),
            lambda r: self.derivative(r) + other.derivative(r),
            max(self.support_radius, other.support_radius),
            min(widths) if widths else None,
        )

    def __mul__(self, scalar: float) -> "RadialProfile":
        s = float(scalar)
        return RadialProfile(
            lambda r: s * self.value(r),
            lambda r: s * self.derivative(r),
            self.support_radius,
            self.feature_width,
        )

    __rmul__ = __mul__

    def sample(self, grid: RadialGrid) -> RadialField:
        return RadialField(grid, self.value(grid.points))

    @classmethod
    def from_field(cls, field: RadialField) -> "RadialProfile":
        """Interpolate sampled data with an even cubic spline.

        The spline has zero slope at the origin (radial functions are even)
        and the profile vanishes beyond the grid.
        """
        r = field.r
        spline = CubicSpline(r, field.values, bc_type=((1, 0.0), "not-a-knot"))
        dspline = spline.derivative()
        r_max = field.grid.r_max

        def value(x):
            x = np.asarray(x, dtype=float)
            return np.where(x <= r_max, spline(np.clip(x, 0.0, r_max)), 0.0)

        def derivative(x):
            x = np.asarray(x, dtype=float)
            return np.where(x <= r_max, dspline(np.clip(x, 0.0, r_max)), 0.0)

        nonzero = np.nonzero(field.values)[0]
        support = r[nonzero[-1]] + field.grid.spacing if nonzero.size else 0.0
        return cls(value, derivative, min(support, r_max), 4 * field.grid.spacing)


@dataclass(frozen=True)
class TransitionFamilyParams:
    index: int
    center: float = 1.0
    low: float = -1.0
    high: float = 0.0

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("transition index must be >= 1")
        if not self.center > self.width / 2:
            raise ValueError("transition window must lie in r > 0")

    @property
    def width(self) -> float:
        return 2.0 ** (-self.index)


def make_transition_profile(params: TransitionFamilyParams) -> RadialProfile:
    """C^1 cubic-smoothstep ramp from ``low`` to ``high`` across a window of width 2^-n."""
    w, c = params.width, params.center
    lo, hi = params.low, params.high
    a = c - w / 2

    def value(r):
        s = np.clip((np.asarray(r, dtype=float) - a) / w, 0.0, 1.0)
        return lo + (hi - lo) * s * s * (3.0 - 2.0 * s)

    def derivative(r):
        s = (np.asarray(r, dtype=float) - a) / w
        inside = (s > 0.0) & (s < 1.0)
        return np.where(inside, (hi - lo) * 6.0 * s * (1.0 - s) / w, 0.0)

    support = c + w / 2 if hi == 0.0 else np.inf
    return RadialProfile(value, derivative, support, w)


def gaussian_profile(amplitude: float = 1.0, scale: float = 1.0) -> RadialProfile:
    """``amplitude * exp(-(r/scale)^2)``."""

    def value(r):
        r = np.asarray(r, dtype=float)
        return amplitude * np.exp(-((r / scale) ** 2))

    def derivative(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * r / scale**2 * amplitude * np.exp(-((r / scale) ** 2))

    return RadialProfile(value, derivative, np.inf, scale)


def bump_profile(amplitude: float = 1.0, radius: float = 2.0, power: int = 4) -> RadialProfile:
    """Compactly supported ``amplitude * (1 - (r/radius)^2)^power``."""

    def value(r):
        q = 1.0 - (np.asarray(r, dtype=float) / radius) ** 2
        return amplitude * np.where(q > 0, q, 0.0) ** power

    def derivative(r):
        r = np.asarray(r, dtype=float)
        q = 1.0 - (r / radius) ** 2
        return np.where(
            q > 0,
            amplitude * power * np.where(q > 0, q, 0.0) ** (power - 1) * (-2.0 * r / radius**2),
            0.0,
        )

    return RadialProfile(value, derivative, radius, radius / power)


def center_value(g: RadialProfile, t: float) -> float:
    """Solution at the origin, ``u(t, 0) = g(t) + t g'(t)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return float(g.value(np.asarray(t)) + t * g.derivative(np.asarray(t)))


def _odd_extension(g: RadialProfile, s: np.ndarray) -> np.ndarray:
    return s * g.value(np.abs(s))


def evaluate_radial(g: RadialProfile, t: float, r) -> np.ndarray:
    """Exact ``u(t, r)`` at arbitrary radii; ``r = 0`` uses :func:`center_value`."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(r)
    zero = r == 0.0
    if t == 0.0:
        return g.value(r)
    rp = r[~zero]
    out[~zero] = (_odd_extension(g, rp + t) + _odd_extension(g, rp - t)) / (2.0 * rp)
    if np.any(zero):
        out[zero] = center_value(g, t)
    return out


def propagate_radial(g: RadialProfile, t: float, grid: RadialGrid) -> RadialField:
    """Exact solution ``u(t, .)`` sampled on ``grid``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    need = g.support_radius + t
    if np.isfinite(need) and grid.r_max < need - 1e-12:
        raise ValueError(
            f"grid ends at r = {grid.r_max} but the solution is supported up to r = {need}"
        )
    return RadialField(grid, evaluate_radial(g, t, grid.points))


def wave_propagator(t: float = 1.0) -> Callable[[RadialField], RadialField]:
    """The operator ``B f = u(t)`` acting on sampled radial data.

    Input samples are interpolated by :meth:`RadialProfile.from_field`, so the
    output is exact up to interpolation error.  The output lives on the input
    grid, which must extend ``t`` beyond the support of the data.
    """

    def apply(f: RadialField) -> RadialField:
        return propagate_radial(RadialProfile.from_field(f), t, f.grid)

    return apply


def fd_wave_oracle(
    g: RadialProfile, t: float, grid: RadialGrid, cfl: float = 0.5
) -> RadialField:
    """Leapfrog solution of ``v_tt = v_rr``, ``v = r u``, sampled on ``grid``.

    The computational domain extends past the grid far enough that nothing
    reflected from the outer Dirichlet boundary reaches the grid by time ``t``.
    """
    if not 0 < cfl <= 0.9:
        raise ValueError(f"CFL number {cfl} outside (0, 0.9]")
    if t < 0:
        raise ValueError("t must be nonnegative")
    dx = grid.spacing
    if g.feature_width is not None and g.feature_width / dx < 8:
        raise ValueError(
            f"grid spacing {dx:.3g} resolves the feature width {g.feature_width:.3g} "
            "with fewer than 8 points"
        )
    if t == 0.0:
        return g.sample(grid)

    reach = g.support_radius if np.isfinite(g.support_radius) else grid.r_max + t
    extent = max(grid.r_max, reach) + t + 4 * dx
    n_pts = int(np.ceil(extent / dx)) + 1
    r = dx * np.arange(n_pts)

    steps = int(np.ceil(t / (cfl * dx)))
    lam2 = (t / steps / dx) ** 2

    v_prev = r * g.value(r)
    v_prev[0] = v_prev[-1] = 0.0
    lap = np.zeros_like(v_prev)
    lap[1:-1] = v_prev[2:] - 2 * v_prev[1:-1] + v_prev[:-2]
    v = v_prev + 0.5 * lam2 * lap
    for _ in range(steps - 1):
        lap[1:-1] = v[2:] - 2 * v[1:-1] + v[:-2]
        v_prev, v = v, 2 * v - v_prev + lam2 * lap
        v[0] = v[-1] = 0.0

    m = grid.point_count
    u = np.empty(m)
    u[1:] = v[1:m] / r[1:m]
    # u is even in r: fit a + b r^2 through the first two interior nodes
    u[0] = (4.0 * u[1] - u[2]) / 3.0
    return RadialField(grid, u)
