"""Lifts of orientation-preserving circle diffeomorphisms.

Everything here lives on the real line: a lift ``phi`` satisfies
``phi(x + 1) = phi(x) + 1`` and points are never reduced mod 1. Reduction
happens only when an orbit is quantized or a periodic function is sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

ROTATION = "rotation"
ARNOLD = "arnold"
COMPOSED = "composed"

SYMBOLIC_ALPHAS = {
    "e": math.e,
    "pi": math.pi,
    "phi": (1.0 + math.sqrt(5.0)) / 2.0,
}


def resolve_alpha(alpha: Union[str, float]) -> float:
    """Turn a decimal literal or one of the tokens ``e``, ``pi``, ``phi`` into a float."""
    if isinstance(alpha, str):
        token = alpha.strip().lower()
        if token in SYMBOLIC_ALPHAS:
            return SYMBOLIC_ALPHAS[token]
        try:
            value = float(token)
        except ValueError:
            raise ValueError(
                f"alpha must be a number or one of {sorted(SYMBOLIC_ALPHAS)}, got {alpha!r}"
            ) from None
    else:
        value = float(alpha)
    if not math.isfinite(value):
        raise ValueError(f"alpha must be finite, got {alpha!r}")
    return value


@dataclass(frozen=True)
class Lift:
    """A degree-one lift ``phi(x) = x + alpha + eta(x)``.

    ``kind`` is one of ``rotation``, ``arnold`` or ``composed``. A composed
    lift stands for ``H^-1 o base o H`` where ``conj`` is the change of
    variables ``H``; it is evaluated functionally, one inversion per call.
    """

    kind: str
    alpha: float
    epsilon: float = 0.0
    base: Optional["Lift"] = field(default=None, repr=False)
    conj: Optional[object] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in (ROTATION, ARNOLD, COMPOSED):
            raise ValueError(f"unknown lift kind {self.kind!r}")
        if self.kind == COMPOSED and (self.base is None or self.conj is None):
            raise ValueError("a composed lift needs both base and conj")

    @property
    def depth(self) -> int:
        """Number of conjugations stacked on top of the original map."""
        return 0 if self.kind != COMPOSED else 1 + self.base.depth

    def __call__(self, x):
        if self.kind == ROTATION:
            return x + self.alpha
        if self.kind == ARNOLD:
            return x + self.alpha + self.epsilon / (2.0 * np.pi) * np.sin(2.0 * np.pi * x)
        H = self.conj
        u = self.base(H.apply(x))
        # first-order inverse as starting point; exact when H is a translation
        return H.invert(u, u - H.h(u))

    def eta(self, x):
        """Periodic part ``phi(x) - x - alpha``."""
        if self.kind == ROTATION:
            return np.zeros_like(np.asarray(x, dtype=float))[()]
        if self.kind == ARNOLD:
            return self.epsilon / (2.0 * np.pi) * np.sin(2.0 * np.pi * x)
        return self(x) - x - self.alpha

    def describe(self) -> str:
        if self.kind == ROTATION:
            return f"rotation(alpha={self.alpha!r})"
        if self.kind == ARNOLD:
            return f"arnold(alpha={self.alpha!r}, epsilon={self.epsilon!r})"
        return f"conjugated[{self.depth}]({self.base.describe()})"


def rotation(alpha) -> Lift:
    return Lift(ROTATION, resolve_alpha(alpha))


def arnold(alpha, epsilon: float) -> Lift:
    """The Arnold family ``x + alpha + epsilon/(2 pi) sin(2 pi x)``."""
    return Lift(ARNOLD, resolve_alpha(alpha), float(epsilon))


def compose(base: Lift, conj) -> Lift:
    """Return the lift ``conj^-1 o base o conj``."""
    return Lift(COMPOSED, base.alpha, base.epsilon, base=base, conj=conj)


def eval_lift(lift: Lift, x: float) -> float:
    return float(lift(float(x)))


@dataclass(frozen=True)
class Orbit:
    points: tuple
    source: str
    x0: float

    def __len__(self):
        return len(self.points)


def iterate(lift: Lift, x0: float, n: int) -> Orbit:
    """First ``n`` points ``x0, phi(x0), ..., phi^(n-1)(x0)``."""
    if n < 1:
        raise ValueError(f"orbit length must be >= 1, got {n}")
    x = float(x0)
    points = [x]
    for _ in range(n - 1):
        x = float(lift(x))
        points.append(x)
    return Orbit(tuple(points), lift.describe(), float(x0))


@dataclass(frozen=True)
class RotationEstimate:
    value: float
    iterations: int
    bound: float


def rotation_number(lift: Lift, x0: float = 0.0, n: int = 1000) -> RotationEstimate:
    """Birkhoff estimate ``(phi^n(x0) - x0) / n`` of the rotation number.

    The telescoping sum is accumulated as ``alpha + mean(eta(x_k))``, which is
    the same quantity without the cancellation in ``phi^n(x0) - x0``; for a
    pure rotation it returns ``alpha`` exactly.
    """
    if n < 1:
        raise ValueError(f"need at least one iterate, got {n}")
    x = float(x0)
    drift = []
    for _ in range(n):
        y = float(lift(x))
        if lift.kind == COMPOSED:
            drift.append(y - x - lift.alpha)
        else:
            drift.append(float(lift.eta(x)))
        x = y
    return RotationEstimate(lift.alpha + math.fsum(drift) / n, n, 1.0 / n)
