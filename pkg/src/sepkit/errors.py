"""Exception types raised by sepkit."""


class DimensionError(ValueError):
    """Operand shapes or subsystem dimensions do not fit together."""


class NotHermitianError(ValueError):
    """A matrix that must be Hermitian deviates beyond tolerance."""


class StateError(ValueError):
    """A matrix fails the density-matrix invariants (trace, PSD, finiteness)."""


class ConvergenceError(RuntimeError):
    """An LAPACK routine failed to converge."""
