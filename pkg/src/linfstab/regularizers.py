"""Spectral regularization of compact operators given through their SVD.

An operator ``A x = sum_n sigma_n <x, v_n> u_n`` is stored with its left and
right singular vectors described as phase-shifted Fourier modes on the torus,
``u_n = p_n e_{i_n}`` with ``e_k(t) = exp(2 pi i k t)``.  Every filter below
acts coefficient-wise in this basis:

==============  ==================================
PSEUDOINVERSE   ``1 / sigma``
TIKHONOV        ``sigma / (sigma^2 + alpha)``
TSVD            ``1 / sigma`` if ``sigma^2 >= alpha`` else 0
WEIGHTED        ``sigma / (sigma^2 + alpha c_n)``
==============  ==================================

All series are truncated to the stored modes.  Whether a truncated series
"converges" is judged from its partial sums, see :func:`partial_sums_cauchy`
and :func:`dyadic_block_ratio`.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FourierSignal, TorusGrid

__all__ = [
    "SvdOperator",
    "FilterKind",
    "FilterScheme",
    "WeightSchedule",
    "SmoothnessParams",
    "RateEnvelope",
    "SeriesWarning",
    "filter_factors",
    "apply_filter",
    "weight_schedule",
    "picard_sum",
    "uniform_sum",
    "rate_envelope",
    "choose_alpha",
    "linf_bound_constant",
    "partial_sums_cauchy",
    "dyadic_block_ratio",
    "series_converges",
    "source_set_data",
    "fourier_diagonal_operator",
]


class SeriesWarning(UserWarning):
    """A truncated series looks divergent; the truncated value is still returned."""


@dataclass(frozen=True, eq=False)
class SvdOperator:
    """Truncated SVD ``(sigma_n, u_n, v_n)`` with Fourier-mode basis descriptors.

    ``left_index[n]`` / ``left_phase[n]`` describe ``u_n``, the ``right_*``
    arrays describe ``v_n``.  ``v_sup_norms`` holds ``||v_n||_inf`` and defaults
    to 1, the sup norm of a unimodular Fourier mode.
    """

    sigmas: np.ndarray
    left_index: np.ndarray
    left_phase: np.ndarray
    right_index: np.ndarray
    right_phase: np.ndarray
    v_sup_norms: Optional[np.ndarray] = None

    def __post_init__(self):
        s = np.asarray(self.sigmas, dtype=float)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("sigmas must be a nonempty 1D array")
        if np.any(s <= 0):
            raise ValueError("singular values must be strictly positive")
        if np.any(np.diff(s) > 0):
            raise ValueError("singular values must be non-increasing")
        arrays = {"sigmas": s}
        for name in ("left_index", "right_index"):
            idx = np.asarray(getattr(self, name), dtype=int)
            if idx.shape != s.shape:
                raise ValueError(f"{name} must have one entry per singular value")
            if np.unique(idx).size != idx.size:
                raise ValueError(f"{name} repeats a mode; basis is not orthonormal")
            arrays[name] = idx
        for name in ("left_phase", "right_phase"):
            ph = np.asarray(getattr(self, name), dtype=complex)
            if ph.shape != s.shape or not np.allclose(np.abs(ph), 1.0, atol=1e-12):
                raise ValueError(f"{name} must hold unimodular phases")
            arrays[name] = ph
        sup = self.v_sup_norms
        arrays["v_sup_norms"] = (
            np.ones_like(s) if sup is None else np.asarray(sup, dtype=float)
        )
        if arrays["v_sup_norms"].shape != s.shape:
            raise ValueError("v_sup_norms must have one entry per singular value")
        for name, value in arrays.items():
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def count(self) -> int:
        return self.sigmas.size

    @property
    def max_index(self) -> int:
        return int(max(np.max(np.abs(self.left_index)), np.max(np.abs(self.right_index))))

    def truncated(self, count: int) -> "SvdOperator":
        """The first ``count`` singular triples."""
        sl = slice(0, count)
        return SvdOperator(
            self.sigmas[sl],
            self.left_index[sl],
            self.left_phase[sl],
            self.right_index[sl],
            self.right_phase[sl],
            self.v_sup_norms[sl],
        )

    def left_coefficients(self, y: FourierSignal) -> np.ndarray:
        """``<y, u_n>`` for every stored mode (zero outside the band of ``y``)."""
        vals = np.zeros(self.count, dtype=complex)
        inside = np.abs(self.left_index) <= y.max_index
        vals[inside] = y.coeffs[self.left_index[inside] + y.max_index]
        return np.conj(self.left_phase) * vals

    def expand_right(self, coefs, max_index: Optional[int] = None) -> FourierSignal:
        """``sum_n coefs_n v_n`` as a Fourier signal."""
        return self._expand(coefs, self.right_index, self.right_phase, max_index)

    def expand_left(self, coefs, max_index: Optional[int] = None) -> FourierSignal:
        return self._expand(coefs, self.left_index, self.left_phase, max_index)

    def _expand(self, coefs, index, phase, max_index):
        m = self.max_index if max_index is None else max_index
        c = np.zeros(2 * m + 1, dtype=complex)
        c[index + m] = phase * np.asarray(coefs)
        real = bool(np.allclose(c, np.conj(c[::-1]), rtol=0.0, atol=1e-12 * (1 + np.max(np.abs(c)))))
        if real:
            c = 0.5 * (c + np.conj(c[::-1]))
        return FourierSignal(m, c, real)

    def forward(self, x: FourierSignal) -> FourierSignal:
        """``A x = sum sigma_n <x, v_n> u_n``."""
        xv = np.zeros(self.count, dtype=complex)
        inside = np.abs(self.right_index) <= x.max_index
        xv[inside] = x.coeffs[self.right_index[inside] + x.max_index]
        xv = np.conj(self.right_phase) * xv
        return self.expand_left(self.sigmas * xv, max(self.max_index, x.max_index))

    def gram_check(self, which: str = "right") -> float:
        """Largest deviation from the identity of the sampled Gram matrix."""
        index = self.right_index if which == "right" else self.left_index
        phase = self.right_phase if which == "right" else self.left_phase
        m = 2 * self.max_index + 1
        t = TorusGrid(m).points
        samples = phase[:, None] * np.exp(2j * np.pi * index[:, None] * t[None, :])
        gram = samples.conj() @ samples.T / m
        return float(np.max(np.abs(gram - np.eye(self.count))))


def fourier_diagonal_operator(sigmas, indices=None, phases=None, v_sup_norms=None) -> SvdOperator:
    """Operator diagonal in the Fourier basis with ``v_n = e_{i_n}``, ``u_n = p_n e_{i_n}``.

    Without explicit indices the modes are laid out as 0, 1, -1, 2, -2, ...
    """
    s = np.asarray(sigmas, dtype=float)
    if indices is None:
        k = np.arange(s.size)
        indices = np.where(k % 2 == 1, (k + 1) // 2, -(k // 2))
    indices = np.asarray(indices, dtype=int)
    phases = np.ones(s.size, dtype=complex) if phases is None else np.asarray(phases)
    return SvdOperator(s, indices, phases, indices, np.ones(s.size, dtype=complex), v_sup_norms)


class FilterKind(enum.Enum):
    PSEUDOINVERSE = "pseudoinverse"
    TIKHONOV = "tikhonov"
    TSVD = "tsvd"
    WEIGHTED = "weighted"


@dataclass(frozen=True, eq=False)
class WeightSchedule:
    """Weights ``c_n`` with ``c_n >= floor`` and ``c_n <= C sigma_n^-growth_exponent``."""

    c: np.ndarray
    floor: float
    growth_exponent: float
    growth_constant: float

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if not self.floor > 0:
            raise ValueError("weight floor must be positive")
        if np.any(c < self.floor * (1 - 1e-12)):
            raise ValueError("weights fall below their floor")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    def growth_violation(self, sigmas) -> float:
        """Largest relative excess of ``c_n`` over ``C sigma_n^-beta`` (<= 0 when valid)."""
        cap = self.growth_constant * np.asarray(sigmas, dtype=float) ** (-self.growth_exponent)
        return float(np.max(self.c / cap - 1.0))


@dataclass(frozen=True)
class FilterScheme:
    kind: FilterKind
    alpha: float = 0.0
    weights: Optional[WeightSchedule] = None

    def __post_init__(self):
        if self.kind is not FilterKind.PSEUDOINVERSE and not self.alpha > 0:
            raise ValueError(f"{self.kind.name} needs alpha > 0")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.kind is FilterKind.WEIGHTED and self.weights is None:
            raise ValueError("WEIGHTED filtering requires a weight schedule")


@dataclass(frozen=True)
class SmoothnessParams:
    eta: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if self.delta < 0:
            raise ValueError("noise level must be nonnegative")


def filter_factors(op: SvdOperator, scheme: FilterScheme) -> np.ndarray:
    s, a = op.sigmas, scheme.alpha
    kind = scheme.kind
    if kind is FilterKind.PSEUDOINVERSE:
        return 1.0 / s
    if kind is FilterKind.TIKHONOV:
        return s / (s * s + a)
    if kind is FilterKind.TSVD:
        return np.where(s * s >= a, 1.0 / s, 0.0)
    c = scheme.weights.c
    if c.shape != s.shape:
        raise ValueError("weight schedule length does not match the operator")
    return s / (s * s + a * c)


def apply_filter(op: SvdOperator, scheme: FilterScheme, y: FourierSignal) -> FourierSignal:
    """``T y = sum_n F_n <y, u_n> v_n`` for the scheme's filter factors ``F_n``."""
    coefs = op.left_coefficients(y)
    if scheme.kind is FilterKind.PSEUDOINVERSE:
        terms = np.abs(coefs) ** 2 / op.sigmas**2
        if not series_converges(terms):
            warnings.warn(
                "Picard series of the data does not settle; the pseudoinverse is "
                "returned truncated to the stored modes",
                SeriesWarning,
                stacklevel=2,
            )
    return op.expand_right(filter_factors(op, scheme) * coefs)


def weight_schedule(op: SvdOperator, eta: float, c0: float = 1.0, C: float = 1.0) -> WeightSchedule:
    """Weights making the weighted filter bounded into L-infinity.

    For ``eta <= 2`` any constant ``c0`` works; for ``eta > 2`` the weights
    ``C sigma_n^(1 - eta/2)`` are used, which meet the growth cap with exponent
    ``eta/2 - 1`` and constant ``C`` exactly.
    """
    if not (eta > 0 and c0 > 0 and C > 0):
        raise ValueError("eta, c0 and C must be positive")
    s = op.sigmas
    if eta <= 2:
        return WeightSchedule(np.full(s.shape, float(c0)), float(c0), 0.0, float(c0))
    c = C * s ** (1.0 - eta / 2.0)
    return WeightSchedule(c, float(np.min(c)), eta / 2.0 - 1.0, float(C))


def picard_terms(op: SvdOperator, y: FourierSignal, eta: float) -> np.ndarray:
    return np.abs(op.left_coefficients(y)) ** 2 / op.sigmas ** (2.0 + eta)


def picard_sum(op: SvdOperator, y: FourierSignal, eta: float) -> float:
    """Truncated ``P_eta(y) = sum |<y, u_n>|^2 / sigma_n^(2 + eta)``."""
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    return float(np.sum(picard_terms(op, y, eta)))


def uniform_terms(op: SvdOperator, y: FourierSignal) -> np.ndarray:
    return np.abs(op.left_coefficients(y)) / op.sigmas * op.v_sup_norms


def uniform_sum(op: SvdOperator, y: FourierSignal) -> float:
    """Truncated ``sum |<y, u_n>| ||v_n||_inf / sigma_n``, an upper bound for ``||A^+ y||_inf``."""
    return float(np.sum(uniform_terms(op, y)))


def partial_sums_cauchy(terms, rtol: float = 1e-3) -> bool:
    """Do the partial sums at N/2 and N agree to relative tolerance ``rtol``?"""
    t = np.abs(np.asarray(terms, dtype=float))
    full = np.sum(t)
    half = np.sum(t[: t.size // 2])
    return bool(full - half <= rtol * max(full, np.finfo(float).tiny))


def dyadic_block_ratio(terms) -> float:
    """Ratio of the last two dyadic block sums, ``S(N) - S(N/2)`` over ``S(N/2) - S(N/4)``.

    Power-law terms ``n^-p`` give ``2^(1-p)``: below one for a convergent
    series and at least one for a divergent one.
    """
    t = np.abs(np.asarray(terms, dtype=float))
    n = t.size
    last = np.sum(t[n // 2 :])
    prev = np.sum(t[n // 4 : n // 2])
    if prev == 0.0:
        return 0.0 if last == 0.0 else np.inf
    return float(last / prev)


def series_converges(terms, rtol: float = 1e-3, max_ratio: float = 0.95) -> bool:
    """Either the partial sums are Cauchy or the dyadic tail blocks shrink.

    Fewer than four terms carry no tail information and count as convergent.
    """
    if np.size(terms) < 4:
        return True
    return partial_sums_cauchy(terms, rtol) or dyadic_block_ratio(terms) < max_ratio


@dataclass(frozen=True)
class RateEnvelope:
    """Bound ``sigma^eta / (sigma^2 + alpha)^2 <= constant * alpha^(eta/2 - 2)``.

    For ``eta >= 4`` there is no envelope; the function is increasing in sigma
    and ``monotone`` is set instead.
    """

    eta: float
    alpha: float
    constant: Optional[float]
    value: Optional[float]
    monotone: bool


def rate_envelope(eta: float, alpha: float) -> RateEnvelope:
    if not (eta > 0 and alpha > 0):
        raise ValueError("eta and alpha must be positive")
    if eta >= 4:
        return RateEnvelope(eta, alpha, None, None, True)
    q = eta / (4.0 - eta)
    c_eta = q ** (eta / 2.0) * (q + 1.0) ** -2
    return RateEnvelope(eta, alpha, c_eta, c_eta * alpha ** (eta / 2.0 - 2.0), False)


def choose_alpha(delta: float) -> float:
    """A-priori parameter choice ``alpha(delta) = sqrt(delta)``."""
    if delta < 0:
        raise ValueError("noise level must be nonnegative")
    return float(np.sqrt(delta))


def linf_bound_constant(op: SvdOperator, schedule: WeightSchedule, eta: float) -> float:
    """``C'`` with ``||T^c_alpha||_{Y -> L^inf} <= C' / alpha``.

    Uses ``sigma_1^(1 - eta/2) ||(sigma_n^(eta/2) ||v_n||_inf)||_2 / c_0`` for
    ``eta <= 2`` and ``||(sigma_n^(eta/2) ||v_n||_inf)||_2 / C`` otherwise.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    terms = op.sigmas**eta * op.v_sup_norms**2
    if not series_converges(terms):
        warnings.warn(
            f"sum sigma_n^{eta} ||v_n||^2 is still growing at the truncation; "
            "the constant reflects the stored modes only",
            SeriesWarning,
            stacklevel=2,
        )
    tail = float(np.sqrt(np.sum(terms)))
    if eta <= 2:
        return op.sigmas[0] ** (1.0 - eta / 2.0) * tail / schedule.floor
    return tail / schedule.growth_constant


def source_set_data(op: SvdOperator, order: float, max_index: Optional[int] = None) -> FourierSignal:
    """Data with ``<y, u_n> = sigma_n^((2 + order)/2) / n`` (1-based n).

    Then ``P_order(y) = sum 1/n^2`` is finite, so ``y`` lies in the source set
    of that order whatever the singular values are.
    """
    n = np.arange(1, op.count + 1)
    return op.expand_left(op.sigmas ** ((2.0 + order) / 2.0) / n, max_index)
