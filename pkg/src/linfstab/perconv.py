"""Periodic convolution with a singular kernel, its SVD, and adversarial data.

The kernel has Fourier coefficients ``k[n] = (|n| + 1)^-rho`` with
``0 < rho < 1/2``, so ``k`` is integrable but not square integrable and
``A x = k * x`` is diagonal in the Fourier basis.  The perturbations

    r_N = sum_{|n| <= N} (|n| + 1)^-(1 - rho) u_n

are bounded in L^2 but drive the Tikhonov reconstruction to infinity at t = 0.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .core import FourierSignal
from .regularizers import SvdOperator

__all__ = [
    "PeriodicKernel",
    "AdversarialParams",
    "TestSignalKind",
    "singular_kernel",
    "forward_convolve",
    "svd_of_convolution",
    "adversarial_perturbation",
    "test_signal",
    "exact_test_signal",
    "signal_range",
    "SIGNAL_TABLE_BANDWIDTH",
]

SIGNAL_TABLE_BANDWIDTH = 4096


@dataclass(frozen=True, eq=False)
class PeriodicKernel:
    coeffs: FourierSignal
    rho: float

    def __post_init__(self):
        c = self.coeffs.coeffs
        if np.any(c == 0):
            raise ValueError("kernel has a vanishing Fourier coefficient")
        if not self.coeffs.real_symmetric:
            raise ValueError("kernel must be real valued")
        floor = (np.abs(self.coeffs.indices) + 1.0) ** (-self.rho)
        if np.any(np.abs(c) < floor * (1 - 1e-12)):
            raise ValueError("kernel coefficients decay faster than (|n|+1)^-rho")

    @property
    def bandwidth(self) -> int:
        return self.coeffs.max_index


@dataclass(frozen=True)
class AdversarialParams:
    rho: float
    N: int

    def __post_init__(self):
        if not 0 < self.rho < 0.5:
            raise ValueError("rho must lie in (0, 1/2)")
        if self.N < 0:
            raise ValueError("N must be nonnegative")


def singular_kernel(rho: float = 1.0 / 3.0, N: int = 512) -> PeriodicKernel:
    """Real, even kernel with ``k[n] = (|n| + 1)^-rho`` for ``|n| <= N``."""
    if not 0 < rho < 0.5:
        raise ValueError("rho must lie in (0, 1/2) for the kernel to be singular")
    if N < 1:
        raise ValueError("N must be at least 1")
    n = np.arange(-N, N + 1)
    return PeriodicKernel(FourierSignal(N, (np.abs(n) + 1.0) ** (-rho), True), rho)


def forward_convolve(kernel: PeriodicKernel, x: FourierSignal) -> FourierSignal:
    """``(k * x)[n] = k[n] x[n]`` on the common band."""
    if x.max_index > kernel.bandwidth:
        raise ValueError(
            f"signal bandwidth {x.max_index} exceeds kernel bandwidth {kernel.bandwidth}"
        )
    k = kernel.coeffs.truncated(x.max_index)
    return FourierSignal(x.max_index, k.coeffs * x.coeffs, x.real_symmetric)


def svd_of_convolution(kernel: PeriodicKernel) -> SvdOperator:
    """SVD of the convolution: ``sigma = |k[n]|``, ``v_n = e_n``, ``u_n = phase(k[n]) e_n``.

    Equal singular values are ordered by ``|n|``, then positive ``n`` first.
    """
    c = kernel.coeffs.coeffs
    if np.any(c == 0):
        raise ValueError("kernel has a vanishing Fourier coefficient")
    n = kernel.coeffs.indices
    sig = np.abs(c)
    order = np.lexsort((n < 0, np.abs(n), -sig))
    return SvdOperator(
        sig[order],
        n[order],
        (c / sig)[order],
        n[order],
        np.ones(n.size, dtype=complex),
    )


def adversarial_perturbation(params: AdversarialParams, kernel: PeriodicKernel) -> FourierSignal:
    """``r_N = sum_{|n| <= N} (|n| + 1)^-(1 - rho) u_n``, phases of ``u_n`` included."""
    if params.N > kernel.bandwidth:
        raise ValueError("perturbation band exceeds the kernel bandwidth")
    n = np.arange(-params.N, params.N + 1)
    a = (np.abs(n) + 1.0) ** (-(1.0 - params.rho))
    k = kernel.coeffs.truncated(params.N).coeffs
    return FourierSignal(params.N, a * k / np.abs(k), kernel.coeffs.real_symmetric)


class TestSignalKind(enum.Enum):
    SMOOTH_OSCILLATORY = "smooth"
    PIECEWISE_LINEAR = "piecewise_linear"
    PIECEWISE_CONSTANT = "piecewise_constant"

    __test__ = False  # not a pytest test class


# sin(2 pi 3 t) + 0.6 cos(2 pi 8 t) + 0.3 sin(2 pi 13 t + 0.4)
SMOOTH_TERMS = ((3, 1.0, -np.pi / 2), (8, 0.6, 0.0), (13, 0.3, 0.4 - np.pi / 2))
# continuous, periodic; linear between the knots
LINEAR_KNOTS = ((0.2, 0.0), (0.5, 1.0), (0.8, -0.5))
# value 1 on [0.25, 0.75), 0 elsewhere
STEP_EDGES = (0.25, 0.75)


def _smooth_coeffs(bandwidth: int) -> np.ndarray:
    c = np.zeros(2 * bandwidth + 1, dtype=complex)
    for freq, amp, phase in SMOOTH_TERMS:
        c[bandwidth + freq] += 0.5 * amp * np.exp(1j * phase)
        c[bandwidth - freq] += 0.5 * amp * np.exp(-1j * phase)
    return c


def _piecewise_linear_coeffs(bandwidth: int) -> np.ndarray:
    knots = np.array([k for k, _ in LINEAR_KNOTS])
    vals = np.array([v for _, v in LINEAR_KNOTS])
    nxt_k = np.append(knots[1:], knots[0] + 1.0)
    nxt_v = np.append(vals[1:], vals[0])
    slopes = (nxt_v - vals) / (nxt_k - knots)
    jumps = slopes - np.roll(slopes, 1)
    n = np.arange(-bandwidth, bandwidth + 1)
    c = np.zeros(n.size, dtype=complex)
    nz = n != 0
    phase = np.exp(-2j * np.pi * np.outer(n[nz], knots))
    c[nz] = -(phase @ jumps) / (4 * np.pi**2 * n[nz] ** 2)
    c[bandwidth] = np.sum(0.5 * (vals + nxt_v) * (nxt_k - knots))
    return c


def _piecewise_constant_coeffs(bandwidth: int) -> np.ndarray:
    a, b = STEP_EDGES
    n = np.arange(-bandwidth, bandwidth + 1)
    c = np.zeros(n.size, dtype=complex)
    nz = n != 0
    c[nz] = (np.exp(-2j * np.pi * n[nz] * a) - np.exp(-2j * np.pi * n[nz] * b)) / (
        2j * np.pi * n[nz]
    )
    c[bandwidth] = b - a
    return c


_GENERATORS = {
    TestSignalKind.SMOOTH_OSCILLATORY: _smooth_coeffs,
    TestSignalKind.PIECEWISE_LINEAR: _piecewise_linear_coeffs,
    TestSignalKind.PIECEWISE_CONSTANT: _piecewise_constant_coeffs,
}


def exact_test_signal(kind: TestSignalKind, bandwidth: int) -> FourierSignal:
    """Closed-form Fourier projection of a test signal (used to build the tables)."""
    c = _GENERATORS[kind](bandwidth)
    c = 0.5 * (c + np.conj(c[::-1]))
    return FourierSignal(bandwidth, c, True)


def signal_range(kind: TestSignalKind) -> tuple[float, float]:
    """Minimum and maximum of the underlying (not band-limited) signal."""
    if kind is TestSignalKind.PIECEWISE_CONSTANT:
        return 0.0, 1.0
    if kind is TestSignalKind.PIECEWISE_LINEAR:
        vals = [v for _, v in LINEAR_KNOTS]
        return float(min(vals)), float(max(vals))
    # a trigonometric polynomial of degree 13: dense samples are exact to ~1e-9
    t = np.arange(2**16) / 2**16
    x = sum(a * np.cos(2 * np.pi * f * t + p) for f, a, p in SMOOTH_TERMS)
    return float(np.min(x)), float(np.max(x))


def table_path(kind: TestSignalKind):
    return resources.files("linfstab") / "data" / f"signal_{kind.value}.csv"


@lru_cache(maxsize=None)
def _load_table(kind: TestSignalKind) -> FourierSignal:
    with table_path(kind).open("r", encoding="utf-8") as fh:
        rows = [r for r in csv.DictReader(fh)]
    n = np.array([int(r["n"]) for r in rows])
    c = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
    bw = int(np.max(np.abs(n)))
    coeffs = np.zeros(2 * bw + 1, dtype=complex)
    coeffs[n + bw] = c
    return FourierSignal(bw, coeffs, True)


def test_signal(kind: TestSignalKind, bandwidth: int) -> FourierSignal:
    """Versioned test signal projected onto ``|n| <= bandwidth``."""
    if bandwidth < 64:
        raise ValueError("test signals need bandwidth >= 64")
    table = _load_table(kind)
    if bandwidth > table.max_index:
        raise ValueError(f"coefficient tables stop at bandwidth {table.max_index}")
    return table.truncated(bandwidth)


test_signal.__test__ = False
