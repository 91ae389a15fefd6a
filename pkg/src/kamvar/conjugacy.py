"""Near-identity changes of variables and the KAM Newton step."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .circlemap import Lift, compose
from .errors import InversionError, OrientationError, ResonanceError
from .harmonic import (
    DEFAULT_MODES,
    DEFAULT_SAMPLES,
    DIVISOR_FLOOR,
    TrigSeries,
    estimate_coeffs,
    sample,
    solve_homological,
)

RESIDUAL_GRID = 256


class FoldWarning(RuntimeWarning):
    """A change of variables was accepted although H' <= 0 somewhere."""


class ContractionWarning(RuntimeWarning):
    """A Newton stage increased the distance to the pure rotation."""


@dataclass(frozen=True)
class SolverSettings:
    """Root-solve contract for ``H(x) = u``.

    Convergence means ``|H(x) - u| <= tolerance * max(1, |u|)``.
    """

    tolerance: float = 1e-12
    max_iter: int = 64
    max_halvings: int = 12


def unit_grid(count: int = RESIDUAL_GRID) -> np.ndarray:
    return np.arange(count) / count


class ConjugacyMap:
    """``H(x) = x + h(x)`` with ``h`` a real trigonometric series.

    Construction checks ``H' > 0`` on a 256-point grid and raises
    :class:`OrientationError` otherwise, unless ``allow_folds`` is set; the
    minimum is kept in ``min_derivative`` either way.
    """

    def __init__(self, h: TrigSeries, solver: SolverSettings = None, allow_folds: bool = False):
        self.h = h
        self.solver = solver or SolverSettings()
        self.min_derivative = float(np.min(1.0 + h.derivative(unit_grid())))
        if self.min_derivative <= 0.0 and not allow_folds:
            raise OrientationError(self.min_derivative)

    @property
    def folded(self) -> bool:
        return self.min_derivative <= 0.0

    def apply(self, x):
        return x + self.h(x)

    def derivative(self, x):
        return 1.0 + self.h.derivative(x)

    def invert(self, u, guess):
        """Solve ``H(x) = u`` starting from ``guess``.

        Damped Newton first; entries that fail fall back to bisection on
        ``[u - R - 1, u + R + 1]`` with ``R = sum |c_j| >= sup |h|``, which
        always brackets a root. When ``H`` is folded the root found is the one
        Newton reaches from ``guess``, so the guess matters.
        """
        scalar = np.ndim(u) == 0 and np.ndim(guess) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        x = np.array(np.broadcast_to(np.asarray(guess, dtype=float), u.shape))
        tol = self.solver.tolerance * np.maximum(1.0, np.abs(u))
        h = self.h

        r = x + h(x) - u
        pinned = np.zeros(u.shape, dtype=bool)
        active = ~(np.abs(r) <= tol)
        for _ in range(self.solver.max_iter):
            if not active.any():
                break
            idx = np.flatnonzero(active)
            xa, ra, ua = x[idx], r[idx], u[idx]
            with np.errstate(divide="ignore", invalid="ignore"):
                step = ra / (1.0 + h.derivative(xa))
            step = np.where(np.isfinite(step), step, 0.0)
            trial = xa - step
            rt = trial + h(trial) - ua
            worse = ~(np.abs(rt) < np.abs(ra))
            for _ in range(self.solver.max_halvings):
                if not worse.any():
                    break
                step[worse] *= 0.5
                trial[worse] = xa[worse] - step[worse]
                rt[worse] = trial[worse] + h(trial[worse]) - ua[worse]
                worse = ~(np.abs(rt) < np.abs(ra))
            moved = ~worse
            x[idx[moved]] = trial[moved]
            r[idx[moved]] = rt[moved]
            stalled = np.zeros_like(active)
            stalled[idx[worse]] = True
            if stalled.any():
                self._bisect(u, x, r, tol, stalled, pinned)
            active = ~(np.abs(r) <= tol) & ~stalled

        failed = ~(np.abs(r) <= tol) & ~pinned
        if failed.any():
            self._bisect(u, x, r, tol, failed, pinned)
            failed = ~(np.abs(r) <= tol) & ~pinned
            if failed.any():
                k = int(np.flatnonzero(failed)[np.argmax(np.abs(r[failed]))])
                raise InversionError(float(u[k]), float(x[k]), float(abs(r[k])))
        return float(x[0]) if scalar else x

    def _bisect(self, u, x, r, tol, mask, pinned):
        # in place; a bracket shrunk to a few ulps counts as converged even if
        # a steep H keeps |H(x) - u| above tolerance
        idx = np.flatnonzero(mask)
        ub = u[idx]
        reach = self.h.sup_bound() + 1.0
        lo, hi = ub - reach, ub + reach
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = mid + self.h(mid) - ub
            tight = hi - lo <= 4 * np.spacing(np.abs(mid) + 1.0)
            if np.all((np.abs(fm) <= tol[idx]) | tight):
                break
            lo = np.where(fm < 0.0, mid, lo)
            hi = np.where(fm < 0.0, hi, mid)
        x[idx] = mid
        r[idx] = fm
        pinned[idx] = tight


def residual_sup(lift: Lift, alpha: float, grid: np.ndarray = None) -> float:
    """``sup |phi(x) - x - alpha|`` over a uniform grid of the unit interval."""
    xs = unit_grid() if grid is None else grid
    return float(np.max(np.abs(lift(xs) - xs - alpha)))


@dataclass(frozen=True, eq=False)
class NewtonStage:
    """One conjugation ``phi -> H^-1 o phi o H``."""

    stage_index: int
    map_before: Lift
    map_after: Lift
    H: ConjugacyMap
    eta_coeffs: TrigSeries
    residual_before: float
    residual_after: float

    @property
    def h_coeffs(self) -> TrigSeries:
        return self.H.h

    @property
    def residual_sup(self) -> float:
        return self.residual_before

    @property
    def eta_mean(self) -> float:
        return self.eta_coeffs.coefficient(0).real


def newton_step(
    lift: Lift,
    alpha: float,
    S: int = DEFAULT_SAMPLES,
    N: int = DEFAULT_MODES,
    *,
    solver: SolverSettings = None,
    divisor_floor: float = DIVISOR_FLOOR,
    allow_folds: bool = False,
    stage_index: int = 1,
) -> NewtonStage:
    """Sample ``eta = phi - alpha - x``, solve the homological equation and conjugate."""
    grid = sample(lambda x: lift(x) - alpha - x, S)
    eta = estimate_coeffs(grid, N)
    h = solve_homological(eta, alpha, divisor_floor)
    H = ConjugacyMap(h, solver, allow_folds=allow_folds)
    if H.folded:
        warnings.warn(
            f"stage {stage_index}: change of variables folds (min H' = {H.min_derivative:.4g}); "
            "inverses are local roots",
            FoldWarning,
            stacklevel=2,
        )
    after = compose(lift, H)
    before_res = residual_sup(lift, alpha)
    after_res = residual_sup(after, alpha)
    if after_res > before_res:
        warnings.warn(
            f"stage {stage_index}: residual grew from {before_res:.3e} to {after_res:.3e}",
            ContractionWarning,
            stacklevel=2,
        )
    return NewtonStage(stage_index, lift, after, H, eta, before_res, after_res)


def _check_sine(value: float, mode: int, alpha: float):
    if abs(value) <= DIVISOR_FLOOR:
        raise ResonanceError(mode, 2.0 * abs(value), abs(mode * alpha - round(mode * alpha)))


def exact_H1(alpha: float, epsilon: float, solver: SolverSettings = None) -> ConjugacyMap:
    """Closed form ``H1(x) = x - eps/(2 pi) cos(2 pi x - pi alpha) / (2 sin(pi alpha))``.

    It solves the homological equation of the Arnold map exactly.
    """
    s1 = math.sin(math.pi * alpha)
    _check_sine(s1, 1, alpha)
    amp = -epsilon / (2.0 * math.pi) / (2.0 * s1)
    # cos(t - a) = (e^{i(t-a)} + e^{-i(t-a)}) / 2
    c1 = amp * np.exp(-1j * math.pi * alpha) / 2.0
    return ConjugacyMap(TrigSeries.from_modes({1: c1, -1: np.conj(c1)}), solver, allow_folds=True)


def exact_H2(alpha: float, epsilon: float, solver: SolverSettings = None) -> ConjugacyMap:
    """``H1`` plus the second-order term
    ``eps^2/(4 pi^2) sin(4 pi x - pi alpha) / (4 sin(pi alpha) sin(2 pi alpha))``."""
    s1 = math.sin(math.pi * alpha)
    s2 = math.sin(2.0 * math.pi * alpha)
    _check_sine(s1, 1, alpha)
    _check_sine(s2, 2, alpha)
    first = exact_H1(alpha, epsilon, solver).h
    amp = epsilon**2 / (4.0 * math.pi**2) / (4.0 * s1 * s2)
    # sin(t - a) = (e^{i(t-a)} - e^{-i(t-a)}) / 2i
    c2 = amp * np.exp(-1j * math.pi * alpha) / 2j
    second = TrigSeries.from_modes({2: c2, -2: np.conj(c2)})
    return ConjugacyMap(first + second, solver, allow_folds=True)
