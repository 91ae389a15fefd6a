"""Melodies and variations from the KAM Newton iteration.

The original melody is the quantized orbit of an Arnold map started at
``x0``. Variation ``s`` conjugates the current map by one more Newton change
of variables ``H`` and re-iterates from ``x0``, each note solved from
``H(x_k) = phi(H(x_{k-1}))`` with initial guess ``x_{k-1} + alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .circlemap import arnold, iterate, resolve_alpha, rotation, rotation_number
from .conjugacy import SolverSettings, newton_step
from .diophantine import DiophantineReport, continued_fraction
from .errors import KAMError
from .harmonic import DEFAULT_MODES, DEFAULT_SAMPLES, DIVISOR_FLOOR, SmallDivisorReport, small_divisors

EDGE_TOLERANCE = 1e-3


@dataclass(frozen=True)
class RunConfig:
    alpha: Union[float, str]
    epsilon: float
    n: int = 10
    M: int = 1
    S: int = DEFAULT_SAMPLES
    N: int = DEFAULT_MODES
    divisions: int = 12
    x0: float = 0.0
    divisor_floor: float = DIVISOR_FLOOR
    tolerance: float = 1e-12
    allow_folds: bool = False
    rotation_iterations: int = 512

    def __post_init__(self):
        resolve_alpha(self.alpha)
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must satisfy 0 < epsilon < 1, got {self.epsilon}")
        if self.n < 1:
            raise ValueError(f"melody length must satisfy n >= 1, got {self.n}")
        if self.M < 0:
            raise ValueError(f"variation count must satisfy M >= 0, got {self.M}")
        if self.N < 1:
            raise ValueError(f"mode count must satisfy N >= 1, got {self.N}")
        if 2 * self.N + 1 > self.S:
            raise ValueError(f"samples and modes must satisfy 2N+1 <= S, got N={self.N}, S={self.S}")
        if self.divisions < 1:
            raise ValueError(f"divisions must satisfy d >= 1, got {self.divisions}")
        if not math.isfinite(self.x0):
            raise ValueError("x0 must be finite")
        if not self.tolerance > 0 or not self.divisor_floor >= 0:
            raise ValueError("tolerance must be > 0 and divisor floor >= 0")
        if self.rotation_iterations < 1:
            raise ValueError("rotation_iterations must be >= 1")

    @property
    def alpha_value(self) -> float:
        return resolve_alpha(self.alpha)


@dataclass(frozen=True)
class PitchRow:
    """Quantized orbit. ``stage`` 0 is the original melody, ``s >= 1`` variation ``s``."""

    stage: int
    pitches: tuple
    raw: tuple
    near_edge: tuple = ()


@dataclass(frozen=True)
class StageSummary:
    """Serializable diagnostics of one Newton stage."""

    index: int
    residual_before: float
    residual_after: float
    eta_mean: float
    min_derivative: float
    folded: bool
    rotation_number: float
    h_coeffs: tuple


@dataclass(frozen=True)
class VariationRun:
    config: RunConfig
    rows: tuple
    stages: tuple
    diophantine: DiophantineReport
    small_divisors: SmallDivisorReport
    converged_at: Optional[int] = None

    def matrix(self) -> list:
        return [list(r.pitches) for r in self.rows]


class RunAborted(KAMError):
    """A stage failed; the rows and stage diagnostics computed so far are kept."""

    def __init__(self, stage: int, rows, stages, cause: Exception):
        self.stage = stage
        self.rows = tuple(rows)
        self.stages = tuple(stages)
        self.cause = cause
        super().__init__(f"stage {stage} failed: {cause}")


def quantize(x: float, d: int = 12) -> int:
    """``floor(d * (x mod 1))`` with ``x mod 1`` taken in ``[0, 1)``."""
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    frac = x % 1.0
    if frac >= 1.0:  # -1e-20 % 1.0 rounds up to 1.0
        frac = 0.0
    return min(int(math.floor(d * frac)), d - 1)


def near_edge(x: float, d: int = 12, tol: float = EDGE_TOLERANCE) -> bool:
    t = d * (x % 1.0)
    return abs(t - round(t)) < tol


def pitch_row(stage: int, raw, d: int = 12) -> PitchRow:
    raw = tuple(float(x) for x in raw)
    # the seed is an input, not a computed note
    flags = tuple(k for k, x in enumerate(raw) if k > 0 and near_edge(x, d))
    return PitchRow(stage, tuple(quantize(x, d) for x in raw), raw, flags)


def rotation_reference(alpha, n: int, d: int = 12) -> PitchRow:
    """Quantized orbit of the pure rotation from 0: what the variations drift toward."""
    return pitch_row(-1, iterate(rotation(alpha), 0.0, n).points, d)


def conjugated_orbit(phi, H, alpha: float, x0: float, n: int) -> list:
    """Orbit of ``H^-1 o phi o H`` from ``x0``, note by note.

    Each ``x_k`` solves ``H(x_k) = phi(H(x_{k-1}))`` starting from
    ``x_{k-1} + alpha``.
    """
    xs = [float(x0)]
    for _ in range(1, n):
        u = phi(H.apply(xs[-1]))
        xs.append(H.invert(u, xs[-1] + alpha))
    return xs


def run(config: RunConfig, on_row: Callable[[PitchRow], None] = None) -> VariationRun:
    """Produce the original melody and ``config.M`` variations.

    ``on_row`` is called with each row as soon as it exists. A failing stage
    raises :class:`RunAborted` carrying the rows computed before it.
    """
    alpha = config.alpha_value
    d = config.divisions
    solver = SolverSettings(tolerance=config.tolerance)
    phi = arnold(alpha, config.epsilon)

    rows = [pitch_row(0, iterate(phi, config.x0, config.n).points, d)]
    if on_row:
        on_row(rows[0])
    stages = []
    for s in range(1, config.M + 1):
        try:
            stage = newton_step(
                phi, alpha, config.S, config.N,
                solver=solver,
                divisor_floor=config.divisor_floor,
                allow_folds=config.allow_folds,
                stage_index=s,
            )
            H = stage.H
            xs = conjugated_orbit(phi, H, alpha, config.x0, config.n)
            rho = rotation_number(phi, 0.0, config.rotation_iterations).value
        except KAMError as exc:
            raise RunAborted(s, rows, stages, exc) from exc
        rows.append(pitch_row(s, xs, d))
        if on_row:
            on_row(rows[-1])
        stages.append(StageSummary(
            index=s,
            residual_before=stage.residual_before,
            residual_after=stage.residual_after,
            eta_mean=stage.eta_mean,
            min_derivative=H.min_derivative,
            folded=H.folded,
            rotation_number=rho,
            h_coeffs=tuple(complex(c) for c in H.h.coeffs),
        ))
        phi = stage.map_after

    converged = next((s for s in range(1, len(rows)) if rows[s].pitches == rows[s - 1].pitches), None)
    return VariationRun(
        config=config,
        rows=tuple(rows),
        stages=tuple(stages),
        diophantine=continued_fraction(config.alpha),
        small_divisors=small_divisors(alpha, config.N, config.divisor_floor),
        converged_at=converged,
    )
