"""Signal containers, grids and norms shared by the rest of the package.

Torus functions are stored as truncated two-sided Fourier series
``x(t) = sum_{|n|<=N} c_n exp(2 pi i n t)`` on ``[0, 1)``; radially symmetric
functions on R^3 are stored as samples on a uniform radial grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FourierSignal",
    "TorusGrid",
    "TorusField",
    "RadialGrid",
    "RadialField",
    "NormKind",
    "synthesize",
    "analyze",
    "norm",
    "sup_grid_size",
]


@dataclass(frozen=True, eq=False)
class FourierSignal:
    """Coefficients ``c_n`` for ``n = -N..N``, stored at position ``n + N``."""

    max_index: int
    coeffs: np.ndarray
    real_symmetric: bool = False

    def __post_init__(self):
        if int(self.max_index) < 0:
            raise ValueError("max_index must be nonnegative")
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (2 * self.max_index + 1,):
            raise ValueError(
                f"expected {2 * self.max_index + 1} coefficients, got shape {c.shape}"
            )
        if self.real_symmetric and not np.allclose(
            c[::-1], np.conj(c), rtol=0.0, atol=1e-12
        ):
            raise ValueError("coefficients are not conjugate symmetric")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, max_index: int, real_symmetric: bool = False) -> "FourierSignal":
        return cls(max_index, np.zeros(2 * max_index + 1, dtype=complex), real_symmetric)

    @classmethod
    def from_dict(cls, values: dict, max_index: int, real_symmetric: bool = False):
        c = np.zeros(2 * max_index + 1, dtype=complex)
        for n, v in values.items():
            c[n + max_index] = v
        return cls(max_index, c, real_symmetric)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.max_index, self.max_index + 1)

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.max_index:
            return 0j
        return complex(self.coeffs[n + self.max_index])

    def __mul__(self, scalar) -> "FourierSignal":
        scalar = complex(scalar)
        return FourierSignal(
            self.max_index,
            self.coeffs * scalar,
            self.real_symmetric and scalar.imag == 0.0,
        )

    __rmul__ = __mul__

    def __add__(self, other: "FourierSignal") -> "FourierSignal":
        n = max(self.max_index, other.max_index)
        a, b = self.padded(n), other.padded(n)
        return FourierSignal(
            n, a.coeffs + b.coeffs, self.real_symmetric and other.real_symmetric
        )

    def __sub__(self, other: "FourierSignal") -> "FourierSignal":
        return self + (-1.0) * other

    def padded(self, max_index: int) -> "FourierSignal":
        """Zero-pad (never truncate) to a larger bandwidth."""
        if max_index < self.max_index:
            raise ValueError("padding cannot shrink a signal; use truncated()")
        c = np.zeros(2 * max_index + 1, dtype=complex)
        off = max_index - self.max_index
        c[off : off + 2 * self.max_index + 1] = self.coeffs
        return FourierSignal(max_index, c, self.real_symmetric)

    def truncated(self, max_index: int) -> "FourierSignal":
        if max_index >= self.max_index:
            return self.padded(max_index)
        off = self.max_index - max_index
        return FourierSignal(
            max_index, self.coeffs[off : off + 2 * max_index + 1], self.real_symmetric
        )


@dataclass(frozen=True)
class TorusGrid:
    point_count: int

    def __post_init__(self):
        if self.point_count < 1:
            raise ValueError("point_count must be positive")

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.point_count) / self.point_count

    @property
    def spacing(self) -> float:
        return 1.0 / self.point_count


@dataclass(frozen=True, eq=False)
class TorusField:
    """Samples of a function on the torus at the points of ``grid``."""

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.point_count,):
            raise ValueError("values do not match grid size")
        object.__setattr__(self, "values", v)

    def __mul__(self, scalar) -> "TorusField":
        return TorusField(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    point_count: int

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if self.point_count < 2:
            raise ValueError("a radial grid needs at least two points")

    @classmethod
    def with_spacing(cls, r_max: float, step: float) -> "RadialGrid":
        """Smallest uniform grid on ``[0, r_max]`` with spacing ``<= step``."""
        return cls(r_max, int(np.ceil(r_max / step)) + 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.point_count)

    @property
    def spacing(self) -> float:
        return self.r_max / (self.point_count - 1)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Samples ``u(r_i)`` of a radially symmetric function on R^3."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.point_count,):
            raise ValueError(
                f"expected {self.grid.point_count} values, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("radial field contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def r(self) -> np.ndarray:
        return self.grid.points

    def __mul__(self, scalar) -> "RadialField":
        return RadialField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __add__(self, other: "RadialField") -> "RadialField":
        _check_same_grid(self, other)
        return RadialField(self.grid, self.values + other.values)

    def __sub__(self, other: "RadialField") -> "RadialField":
        _check_same_grid(self, other)
        return RadialField(self.grid, self.values - other.values)


def _check_same_grid(a: RadialField, b: RadialField) -> None:
    if a.grid != b.grid:
        raise ValueError("radial fields live on different grids")


class NormKind(enum.Enum):
    L2_TORUS = "l2_torus"
    SUP_GRID = "sup_grid"
    L2_RADIAL_3D = "l2_radial_3d"
    SUP_RADIAL = "sup_radial"


def sup_grid_size(max_index: int, factor: int = 8) -> int:
    """Power-of-two grid size at least ``factor`` times the signal bandwidth."""
    need = factor * (2 * max_index + 1)
    return 1 << int(np.ceil(np.log2(max(need, 2))))


def synthesize(signal: FourierSignal, grid: TorusGrid) -> np.ndarray:
    """Evaluate the Fourier series of ``signal`` at the grid points."""
    n_max, m = signal.max_index, grid.point_count
    if m < 2 * n_max + 1:
        raise ValueError(
            f"grid of {m} points aliases a signal of bandwidth {n_max}; "
            f"need at least {2 * n_max + 1}"
        )
    spectrum = np.zeros(m, dtype=complex)
    spectrum[signal.indices % m] = signal.coeffs
    samples = np.fft.ifft(spectrum) * m
    if signal.real_symmetric:
        imag = np.abs(samples.imag)
        if np.all(imag < 1e-10):
            return samples.real.copy()
    return samples


def analyze(samples, max_index: int) -> FourierSignal:
    """Discrete Fourier coefficients ``c_n = mean_j x_j exp(-2 pi i n t_j)``."""
    x = np.asarray(samples)
    m = x.shape[0]
    if m < 2 * max_index + 1:
        raise ValueError(f"{m} samples cannot resolve bandwidth {max_index}")
    spectrum = np.fft.fft(x) / m
    idx = np.arange(-max_index, max_index + 1)
    coeffs = spectrum[idx % m]
    real = bool(np.isrealobj(x) or np.all(np.abs(np.imag(x)) < 1e-12))
    if real:
        # enforce exact symmetry, the FFT only gives it to rounding
        coeffs = 0.5 * (coeffs + np.conj(coeffs[::-1]))
    return FourierSignal(max_index, coeffs, real_symmetric=real)


def _trapezoid(y: np.ndarray, dx: float) -> float:
    return float(dx * (np.sum(y) - 0.5 * (y[0] + y[-1])))


def norm(obj, kind: NormKind) -> float:
    """Norm of a signal or sampled field.

    ``L2_TORUS`` uses Parseval for a :class:`FourierSignal` and the rms of the
    samples for a :class:`TorusField`.  ``SUP_GRID`` synthesizes a Fourier
    signal on a grid eight times denser than its bandwidth.  ``L2_RADIAL_3D``
    integrates ``4 pi r^2 |u|^2`` with the trapezoid rule.
    """
    if kind is NormKind.L2_TORUS:
        if isinstance(obj, FourierSignal):
            return float(np.sqrt(np.sum(np.abs(obj.coeffs) ** 2)))
        if isinstance(obj, TorusField):
            return float(np.sqrt(np.mean(np.abs(obj.values) ** 2)))
    elif kind is NormKind.SUP_GRID:
        if isinstance(obj, FourierSignal):
            grid = TorusGrid(sup_grid_size(obj.max_index))
            return float(np.max(np.abs(synthesize(obj, grid))))
        if isinstance(obj, TorusField):
            return float(np.max(np.abs(obj.values)))
    elif kind is NormKind.L2_RADIAL_3D:
        if isinstance(obj, RadialField):
            r = obj.r
            return float(
                np.sqrt(4 * np.pi * _trapezoid(obj.values**2 * r**2, obj.grid.spacing))
            )
    elif kind is NormKind.SUP_RADIAL:
        if isinstance(obj, RadialField):
            return float(np.max(np.abs(obj.values)))
    raise TypeError(f"cannot take {kind.name} norm of {type(obj).__name__}")
