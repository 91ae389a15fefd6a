import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kamvar.diophantine import continued_fraction, evaluate, type_witness

GOLDEN = (1 + math.sqrt(5)) / 2


def brute_witness(alpha, nu, n_max):
    # exact rational scan of the double, independent of the numpy path
    a = Fraction(alpha)
    best = None
    for n in range(1, n_max + 1):
        m = round(a * n)
        k = abs(a - Fraction(m, n)) * n**nu
        best = k if best is None else min(best, k)
    return float(best)


def test_golden_ratio_expansion():
    rep = continued_fraction("phi", 12)
    assert rep.partial_quotients == (1,) * 12
    fib = [1, 1]
    while len(fib) < 14:
        fib.append(fib[-1] + fib[-2])
    assert rep.convergents == tuple((fib[k + 1], fib[k]) for k in range(12))
    assert rep.known_bound == 2.0


def test_known_bounds():
    assert continued_fraction("e", 15).known_bound == 2.0
    assert continued_fraction("pi", 15).known_bound == 7.103205334
    assert continued_fraction(math.pi, 15).known_bound is None
    assert continued_fraction("0.25").known_bound is None


def test_e_expansion_and_exponent():
    rep = continued_fraction("e", 15)
    assert rep.partial_quotients == (2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1, 1, 10)
    assert abs(rep.empirical_nu - 2.0) < 0.3


def test_pi_quotients():
    assert continued_fraction("pi", 5).partial_quotients == (3, 7, 15, 1, 292)


def test_integer_alpha_single_term():
    rep = continued_fraction(3.0, 10)
    assert rep.partial_quotients == (3,)
    assert rep.empirical_nu is None


@given(st.floats(0.001, 50, allow_nan=False), st.integers(2, 40))
@settings(max_examples=80, deadline=None)
def test_convergent_bounds(alpha, terms):
    rep = continued_fraction(alpha, terms)
    a = Fraction(alpha)
    dens = [n for _, n in rep.convergents]
    assert all(x < y for x, y in zip(dens[1:], dens[2:]))
    assert all(n <= 10**12 for n in dens)
    for (m, n), (_, n_next) in zip(rep.convergents, rep.convergents[1:]):
        # equality only when the next convergent is alpha itself
        assert abs(a - Fraction(m, n)) <= Fraction(1, n * n_next)
        assert abs(a - Fraction(m, n)) < Fraction(1, n * n) or n == n_next


def test_reconstruction():
    for token in ("e", "pi", "phi"):
        rep = continued_fraction(token, 60)
        assert rep.convergents[-1][1] > 10**6
        assert abs(float(rep.value()) - rep.alpha) < 1e-12
        assert evaluate(rep.partial_quotients) == Fraction(*rep.convergents[-1])


def test_type_witness_examples():
    assert type_witness(0.5, 2, 2) == 0.0
    assert type_witness(0.5, 2, 100) == 0.0
    assert type_witness("e", 2, 1000) > 0
    # the n = 1 term |phi - 2| = 1/phi^2 is the infimum
    assert type_witness("phi", 2, 1000) == pytest.approx(0.3819660112501051, abs=1e-12)


@pytest.mark.parametrize("alpha", [GOLDEN, math.e, math.pi, 0.3071])
def test_type_witness_matches_exact_scan(alpha):
    assert type_witness(alpha, 2, 300) == pytest.approx(brute_witness(alpha, 2, 300), rel=1e-9, abs=1e-15)


@given(st.floats(0.01, 10), st.floats(0.5, 4), st.integers(1, 200), st.integers(1, 200))
@settings(max_examples=60, deadline=None)
def test_type_witness_monotone(alpha, nu, n1, n2):
    lo, hi = sorted((n1, n2))
    assert type_witness(alpha, nu, hi) <= type_witness(alpha, nu, lo)
    assert type_witness(alpha, nu, hi) <= type_witness(alpha, nu + 0.5, hi)
