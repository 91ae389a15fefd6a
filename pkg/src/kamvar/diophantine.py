"""Continued fractions and Diophantine diagnostics for the rotation offset.

A double is a dyadic rational, so every expansion here terminates eventually;
the numbers reported describe the double, not the ideal real it stands for.
Expansions are computed in exact rational arithmetic on that double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .circlemap import SYMBOLIC_ALPHAS, resolve_alpha

DENOMINATOR_CAP = 10**12

# literature values for the irrationality measure (upper bound for pi)
KNOWN_BOUNDS = {"e": 2.0, "pi": 7.103205334, "phi": 2.0}


@dataclass(frozen=True)
class DiophantineReport:
    alpha: float
    partial_quotients: tuple
    convergents: tuple
    worst_quality: float
    empirical_nu: Optional[float]
    known_bound: Optional[float] = None

    def value(self) -> Fraction:
        """Evaluate the expansion back to a rational."""
        return evaluate(self.partial_quotients)


def evaluate(quotients) -> Fraction:
    acc = Fraction(quotients[-1])
    for a in reversed(quotients[:-1]):
        acc = a + 1 / acc
    return acc


def _token(alpha) -> Optional[str]:
    if isinstance(alpha, str) and alpha.strip().lower() in SYMBOLIC_ALPHAS:
        return alpha.strip().lower()
    return None


def continued_fraction(alpha, max_terms: int = 20) -> DiophantineReport:
    """Expand ``alpha`` by the Gauss map and collect convergents ``(m, n)``.

    Stops after ``max_terms`` quotients, when the expansion terminates, or when
    the next denominator would exceed ``1e12``. ``empirical_nu`` is the
    least-squares slope (through the origin) of ``-log|alpha - m/n|`` against
    ``log n`` over convergents with ``n >= 2`` and nonzero error.
    """
    if max_terms < 1:
        raise ValueError(f"max_terms must be >= 1, got {max_terms}")
    token = _token(alpha)
    value = resolve_alpha(alpha)
    exact = Fraction(value)

    quotients = []
    convergents = []
    m_prev, m = 0, 1
    n_prev, n = 1, 0
    rest = exact
    while len(quotients) < max_terms:
        a = math.floor(rest)
        m_next, n_next = a * m + m_prev, a * n + n_prev
        if n_next > DENOMINATOR_CAP:
            break
        quotients.append(a)
        convergents.append((m_next, n_next))
        m_prev, m, n_prev, n = m, m_next, n, n_next
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac

    errors = [abs(exact - Fraction(p, q)) for p, q in convergents]
    worst = min(float(err * q * q) for err, (_, q) in zip(errors, convergents))
    xs, ys = [], []
    for err, (_, q) in zip(errors, convergents):
        if q >= 2 and err > 0:
            xs.append(math.log(q))
            ys.append(-math.log(err))
    nu = float(np.dot(xs, ys) / np.dot(xs, xs)) if xs else None
    return DiophantineReport(
        alpha=value,
        partial_quotients=tuple(quotients),
        convergents=tuple(convergents),
        worst_quality=worst,
        empirical_nu=nu,
        known_bound=KNOWN_BOUNDS.get(token),
    )


def type_witness(alpha, nu: float, n_max: int) -> float:
    """Infimum over ``1 <= n <= n_max`` of ``n**nu * |alpha - m/n|`` with ``m`` nearest.

    This is the largest ``K`` for which ``|alpha - m/n| >= K / n**nu`` holds over
    the scanned denominators (strict inequality for every smaller ``K``).
    Exhaustive; ``O(n_max)``.
    """
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    a = resolve_alpha(alpha)
    n = np.arange(1, n_max + 1, dtype=float)
    m = np.round(a * n)
    return float(np.min(np.abs(a - m / n) * n**nu))
