"""Truncated Fourier series of 1-periodic functions and the homological equation.

Convention used throughout the package::

    f(x) ~ sum_{j=-N..N} c_j exp(+2 pi i j x)
    c_j  = (1/S) sum_{k=1..S} f(k/S) exp(-2 pi i j k/S)      (right-point rule)

With it, ``h(x + alpha) - h(x) = eta(x)`` becomes
``c_j(h) = c_j(eta) / (exp(2 pi i j alpha) - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResonanceError

DEFAULT_SAMPLES = 64
DEFAULT_MODES = 10
DIVISOR_FLOOR = 1e-8


class TrigSeries:
    """Complex coefficients ``c_{-N}..c_N`` of a truncated Fourier series."""

    __slots__ = ("coeffs", "freqs")

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("need an odd number of coefficients c_{-N}..c_N")
        c.setflags(write=False)
        self.coeffs = c
        N = c.size // 2
        self.freqs = np.arange(-N, N + 1)

    @classmethod
    def zero(cls, modes: int = 0) -> "TrigSeries":
        return cls(np.zeros(2 * modes + 1))

    @classmethod
    def from_modes(cls, table: dict) -> "TrigSeries":
        """Build from ``{j: c_j}``; unlisted modes are zero."""
        N = max((abs(j) for j in table), default=0)
        c = np.zeros(2 * N + 1, dtype=complex)
        for j, value in table.items():
            c[j + N] = value
        return cls(c)

    @property
    def modes(self) -> int:
        return self.coeffs.size // 2

    def coefficient(self, j: int) -> complex:
        N = self.modes
        return complex(self.coeffs[j + N]) if abs(j) <= N else 0j

    def _phases(self, x):
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        return np.exp(2j * np.pi * np.multiply.outer(x, self.freqs))

    def complex_value(self, x):
        return (self._phases(x) * self.coeffs).sum(axis=-1)[()]

    def __call__(self, x):
        return np.real(self.complex_value(x))[()]

    def derivative(self, x):
        return np.real((self._phases(x) * (2j * np.pi * self.freqs * self.coeffs)).sum(axis=-1))[()]

    def sup_bound(self) -> float:
        """Upper bound ``sum |c_j|`` on ``sup |f|``."""
        return float(np.abs(self.coeffs).sum())

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.coeffs - np.conj(self.coeffs[::-1])) <= tol))

    def __add__(self, other: "TrigSeries") -> "TrigSeries":
        N = max(self.modes, other.modes)
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N - self.modes:N + self.modes + 1] += self.coeffs
        c[N - other.modes:N + other.modes + 1] += other.coeffs
        return TrigSeries(c)

    def __eq__(self, other):
        if not isinstance(other, TrigSeries):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __repr__(self):
        return f"TrigSeries(modes={self.modes})"


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """Values of a periodic function at the right endpoints ``k/S``, ``k = 1..S``."""

    count: int
    values: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.arange(1, self.count + 1) / self.count


def sample(f, S: int = DEFAULT_SAMPLES) -> SampleGrid:
    if S < 2:
        raise ValueError(f"need at least 2 samples, got {S}")
    points = np.arange(1, S + 1) / S
    values = np.broadcast_to(np.asarray(f(points), dtype=float), points.shape).copy()
    values.setflags(write=False)
    return SampleGrid(S, values)


def estimate_coeffs(grid: SampleGrid, N: int = DEFAULT_MODES) -> TrigSeries:
    """Right-point Riemann estimate of ``c_j`` for ``|j| <= N``."""
    if N < 0:
        raise ValueError(f"mode count must be >= 0, got {N}")
    if 2 * N + 1 > grid.count:
        raise ValueError(
            f"{2 * N + 1} coefficients requested from {grid.count} samples; need 2N+1 <= S"
        )
    freqs = np.arange(-N, N + 1)
    phases = np.exp(-2j * np.pi * np.multiply.outer(freqs, grid.points))
    return TrigSeries(phases @ grid.values / grid.count)


def divisor(j: int, alpha: float) -> complex:
    # reduce j*alpha first so the exponent stays small
    return np.exp(2j * np.pi * math.fmod(j * alpha, 1.0)) - 1.0


def solve_homological(eta: TrigSeries, alpha: float, divisor_floor: float = DIVISOR_FLOOR) -> TrigSeries:
    """Solve ``h(x + alpha) - h(x) = eta(x) - c_0(eta)`` mode by mode.

    The mean of ``eta`` cannot be absorbed and is dropped (``c_0(h) = 0``).
    Raises :class:`ResonanceError` if any retained divisor is at or below
    ``divisor_floor``.
    """
    N = eta.modes
    c = np.zeros(2 * N + 1, dtype=complex)
    for j in range(-N, N + 1):
        if j == 0:
            continue
        d = divisor(j, alpha)
        if abs(d) <= divisor_floor:
            raise ResonanceError(j, abs(d), abs(j * alpha - round(j * alpha)))
        c[j + N] = eta.coeffs[j + N] / d
    return TrigSeries(c)


@dataclass(frozen=True)
class SmallDivisorReport:
    alpha: float
    magnitudes: tuple
    min_divisor: float
    flagged: tuple
    floor: float = DIVISOR_FLOOR

    def magnitude(self, j: int) -> float:
        return self.magnitudes[abs(j) - 1]


def small_divisors(alpha: float, N: int = DEFAULT_MODES, divisor_floor: float = DIVISOR_FLOOR) -> SmallDivisorReport:
    """Magnitudes ``|exp(2 pi i j alpha) - 1|`` for ``j = 1..N``."""
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    mags = tuple(float(abs(divisor(j, alpha))) for j in range(1, N + 1))
    flagged = tuple(j for j, m in enumerate(mags, start=1) if m <= divisor_floor)
    return SmallDivisorReport(float(alpha), mags, min(mags), flagged, divisor_floor)
