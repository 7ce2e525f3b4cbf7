"""Exception types shared across the package."""


class ChainConfigError(ValueError):
    """A chain specification is syntactically or physically invalid."""


class OnCutError(ValueError):
    """Interior branch evaluation requested exactly on the spectral cut.

    Callers that need the value on the cut must ask for a boundary side
    (``plus_i0`` or ``minus_i0``) instead.
    """


class SingularFrameError(ArithmeticError):
    """The symbol matrix is numerically singular at the evaluation point."""

    def __init__(self, det, scale, omega=None):
        self.det = det
        self.scale = scale
        self.omega = omega
        super().__init__(
            f"singular frame: |det| = {abs(det):.3e} below threshold "
            f"(scale {scale:.3e}, omega = {omega})"
        )


class PivotBreakdownError(ArithmeticError):
    """A forward/backward elimination pivot vanished at a known index."""

    def __init__(self, index, direction):
        self.index = index
        self.direction = direction
        super().__init__(f"zero pivot at index {index} ({direction} sweep)")


class UnsupportedConfigurationError(ValueError):
    """The requested analysis is outside the supported parameter regimes."""


class ResonancePoleError(ValueError):
    """Kernel evaluation refused: the symbol inverse has real poles.

    Carries the pole pair ``(+omega_star, -omega_star)`` so the caller can
    account for the non-decaying contribution explicitly.
    """

    def __init__(self, omega_star):
        self.omega_star = omega_star
        super().__init__(
            f"defect kernel has simple poles at +/-{omega_star:.12g}; "
            "the band-jump integral alone does not represent it"
        )


class ConvergenceError(RuntimeError):
    """A quadrature did not pass its node-doubling convergence gate."""
