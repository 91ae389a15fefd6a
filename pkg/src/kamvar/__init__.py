"""Melody variation through the KAM Newton iteration for circle diffeomorphisms."""

from .circlemap import Lift, Orbit, RotationEstimate, arnold, compose, eval_lift, iterate, resolve_alpha, rotation, rotation_number
from .conjugacy import ConjugacyMap, NewtonStage, SolverSettings, exact_H1, exact_H2, newton_step
from .diophantine import DiophantineReport, continued_fraction, type_witness
from .errors import InversionError, KAMError, OrientationError, ResonanceError
from .harmonic import SampleGrid, SmallDivisorReport, TrigSeries, estimate_coeffs, sample, small_divisors, solve_homological
from .melody import PitchRow, RunAborted, RunConfig, VariationRun, quantize, rotation_reference, run

__version__ = "0.1.0"
