"""Space/frequency filtering of Fourier multipliers.

The regularized multiplier is applied as ``B_{a,b} = B T_{a,b}`` where the
preconditioner ``T_{a,b} f = k_a * (h_b f)`` first windows ``f`` with
``h_b(x) = h(b x)`` and then mollifies with ``k_a(x) = a^-d k(x / a)``.
For radial data in 3D the convolution reduces to a one-dimensional integral

    (k * g)(r) = (2 pi / r) int_0^inf s g(s) [K(r + s) - K(|r - s|)] ds,
    K(x) = int_0^x t k(t) dt,

with ``(k * g)(0) = 4 pi int_0^inf s^2 g(s) k(s) ds``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gamma, pi
from typing import Callable

import numpy as np

from .core import FourierSignal, RadialField

__all__ = [
    "FilterShape",
    "FilterProfile",
    "DilatedFilterPair",
    "MultiplierSpec",
    "wave_multiplier",
    "dilate_filters",
    "apply_precondition",
    "apply_multiplier",
    "regularized_propagate",
    "triangle_filters",
]

# exp(-pi r^2) is below 1e-17 here; treated as the edge of the Gaussian support
_GAUSSIAN_CUTOFF = 3.6


class FilterShape(enum.Enum):
    TRIANGLE = "triangle"
    GAUSSIAN = "gaussian"


def _sphere_area(d: int) -> float:
    return 2 * pi ** (d / 2) / gamma(d / 2)


@dataclass(frozen=True)
class FilterProfile:
    """Radial filter shape on R^d.

    ``normalization="mass"`` scales the profile to unit integral (the
    mollifier ``k``); ``"peak"`` keeps ``h(0) = 1`` (the spatial window ``h``,
    whose transform then has unit integral).
    """

    shape: FilterShape
    dimension: int = 3
    normalization: str = "mass"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.normalization not in ("mass", "peak"):
            raise ValueError("normalization must be 'mass' or 'peak'")

    @property
    def scale(self) -> float:
        if self.normalization == "peak" or self.shape is FilterShape.GAUSSIAN:
            return 1.0
        d = self.dimension
        return d * (d + 1) / _sphere_area(d) if d > 1 else 1.0

    @property
    def support_radius(self) -> float:
        return 1.0 if self.shape is FilterShape.TRIANGLE else _GAUSSIAN_CUTOFF

    def __call__(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        if self.shape is FilterShape.TRIANGLE:
            base = np.maximum(1.0 - r, 0.0)
        else:
            base = np.exp(-pi * r * r)
        return self.scale * base

    def moment_integral(self, x) -> np.ndarray:
        """``K(x) = int_0^x t k(t) dt`` for ``x >= 0``."""
        x = np.asarray(x, dtype=float)
        if self.shape is FilterShape.TRIANGLE:
            y = np.minimum(x, 1.0)
            return self.scale * (y * y / 2 - y**3 / 3)
        return self.scale * (1.0 - np.exp(-pi * x * x)) / (2 * pi)

    def l1_norm(self) -> float:
        if self.normalization == "mass":
            return 1.0
        d = self.dimension
        if self.shape is FilterShape.TRIANGLE:
            return _sphere_area(d) / (d * (d + 1)) if d > 1 else 1.0
        return 1.0

    def l2_norm(self) -> float:
        d = self.dimension
        if self.shape is FilterShape.TRIANGLE:
            # int_0^1 (1 - r)^2 r^(d-1) dr = 2 (d-1)! / (d+2)!
            radial = 2 * gamma(d) / gamma(d + 3)
            area = _sphere_area(d) if d > 1 else 2.0
            return self.scale * np.sqrt(area * radial)
        return self.scale * 2 ** (-d / 4)

    def sup_norm(self) -> float:
        return self.scale


@dataclass(frozen=True)
class DilatedFilterPair:
    k_profile: FilterProfile
    h_profile: FilterProfile
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("filter scales alpha and beta must be positive")
        if self.k_profile.dimension != self.h_profile.dimension:
            raise ValueError("filters must live in the same dimension")

    @property
    def dimension(self) -> int:
        return self.k_profile.dimension

    def k_alpha(self, r) -> np.ndarray:
        a, d = self.alpha, self.dimension
        return a ** (-d) * self.k_profile(np.asarray(r, dtype=float) / a)

    def h_beta(self, r) -> np.ndarray:
        return self.h_profile(self.beta * np.asarray(r, dtype=float))

    def k_alpha_moment(self, x) -> np.ndarray:
        # int_0^x t k_a(t) dt = a^(2-d) K(x / a); only used for d = 3
        a = self.alpha
        return a ** (2 - self.dimension) * self.k_profile.moment_integral(
            np.asarray(x, dtype=float) / a
        )

    @property
    def k_support(self) -> float:
        return self.alpha * self.k_profile.support_radius

    def kappa_sup(self) -> float:
        """Bound on ``sup |F k_a|``; equals ``||k||_1`` for nonnegative k."""
        return self.k_profile.l1_norm()

    def k_alpha_l2(self) -> float:
        return self.alpha ** (-self.dimension / 2) * self.k_profile.l2_norm()

    def h_beta_l2(self) -> float:
        return self.beta ** (-self.dimension / 2) * self.h_profile.l2_norm()

    def h_beta_sup(self) -> float:
        return self.h_profile.sup_norm()


def triangle_filters(alpha: float, beta: float, dimension: int = 3) -> DilatedFilterPair:
    """Triangle mollifier (unit mass) and triangle window (unit peak)."""
    return dilate_filters(
        FilterProfile(FilterShape.TRIANGLE, dimension, "mass"),
        FilterProfile(FilterShape.TRIANGLE, dimension, "peak"),
        alpha,
        beta,
    )


def dilate_filters(
    k: FilterProfile, h: FilterProfile, alpha: float, beta: float
) -> DilatedFilterPair:
    return DilatedFilterPair(k, h, float(alpha), float(beta))


@dataclass(frozen=True)
class MultiplierSpec:
    symbol: Callable[[np.ndarray], np.ndarray]
    sup_bound: float


def wave_multiplier(t: float = 1.0) -> MultiplierSpec:
    """Symbol ``cos(2 pi |xi| t)`` of wave propagation with zero initial velocity."""
    return MultiplierSpec(lambda xi: np.cos(2 * pi * np.abs(xi) * t), 1.0)


def apply_multiplier(mu: MultiplierSpec, f: FourierSignal) -> FourierSignal:
    """Multiply the coefficient at frequency ``n`` by ``mu(n)``."""
    m = np.asarray(mu.symbol(f.indices.astype(float)), dtype=complex)
    if np.any(np.abs(m) > mu.sup_bound * (1 + 1e-12)):
        raise ValueError("multiplier symbol exceeds its declared sup bound")
    real = f.real_symmetric and np.allclose(m, np.conj(m[::-1]), atol=1e-14)
    return FourierSignal(f.max_index, m * f.coeffs, real)


def _band_rows(n: int, half_width: int, block: int = 256):
    for i0 in range(0, n, block):
        i1 = min(n, i0 + block)
        yield i0, i1, max(0, i0 - half_width), min(n, i1 + half_width)


def apply_precondition(pair: DilatedFilterPair, f: RadialField) -> RadialField:
    """``T f = k_a * (h_b f)`` for radial data on R^3, on the grid of ``f``.

    The product ``h_b f`` is integrated with the trapezoid rule in ``s``; the
    inner integral over ``t`` is done exactly through the moment integral of
    the profile.  The data are taken to vanish beyond the grid.
    """
    if pair.dimension != 3:
        raise ValueError("radial convolution is implemented for d = 3 only")
    r = f.r
    dx = f.grid.spacing
    g = pair.h_beta(r) * f.values
    nonzero = np.nonzero(g)[0]
    if nonzero.size == 0:
        return RadialField(f.grid, np.zeros_like(r))
    required = r[nonzero[-1]] + pair.k_support
    if f.grid.r_max < required - 1e-12:
        raise ValueError(
            f"grid must extend to r_max >= {required:.6g} to hold the filtered field"
        )

    weights = np.full_like(r, dx)
    weights[0] = weights[-1] = dx / 2
    ws_g = weights * r * g

    out = np.empty_like(r)
    out[0] = 4 * pi * np.sum(weights * r**2 * g * pair.k_alpha(r))
    half = int(np.ceil(pair.k_support / dx)) + 2
    for i0, i1, j0, j1 in _band_rows(r.size, half):
        ri = r[max(i0, 1) : i1, None]
        if ri.size == 0:
            continue
        s = r[None, j0:j1]
        kern = pair.k_alpha_moment(ri + s) - pair.k_alpha_moment(np.abs(ri - s))
        out[max(i0, 1) : i1] = (2 * pi / ri[:, 0]) * (kern @ ws_g[j0:j1])
    return RadialField(f.grid, out)


def regularized_propagate(
    B: Callable[[RadialField], RadialField], pair: DilatedFilterPair, f: RadialField
) -> RadialField:
    """``B_{a,b} f = B(T_{a,b} f)``: filters act before the propagator, never after."""
    return B(apply_precondition(pair, f))
