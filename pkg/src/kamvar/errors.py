"""Exception hierarchy shared by the numerical modules."""


class KAMError(Exception):
    """Base class for failures of the conjugacy machinery."""


class ResonanceError(KAMError):
    """A small divisor fell below the configured floor."""

    def __init__(self, mode, divisor, distance):
        self.mode = mode
        self.divisor = divisor
        self.distance = distance
        super().__init__(
            f"resonant mode j={mode}: |e^(2 pi i j alpha) - 1| = {divisor:.3e}, "
            f"|j*alpha - nearest integer| = {distance:.3e}"
        )


class InversionError(KAMError):
    """Root solve for H(x) = u did not converge."""

    def __init__(self, u, x, residual):
        self.u = u
        self.x = x
        self.residual = residual
        super().__init__(f"could not solve H(x) = {u!r}: best x = {x!r}, residual {residual:.3e}")


class OrientationError(KAMError):
    """A change of variables is not monotone (H' <= 0 somewhere)."""

    def __init__(self, min_derivative):
        self.min_derivative = min_derivative
        super().__init__(f"change of variables is not invertible: min H' = {min_derivative:.6g}")
