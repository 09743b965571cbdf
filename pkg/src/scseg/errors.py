"""Exception types shared across the package."""


class ScsegError(Exception):
    """Base class for all scseg errors."""


class ParameterError(ScsegError, ValueError):
    """An argument violates a precondition (bad dimension, range, ...)."""


class DegenerateInputError(ScsegError):
    """The input admits no well-posed solve (e.g. all sampled systems singular)."""


class NumericalDivergenceError(ScsegError):
    """An iterative solver produced non-finite values."""

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"non-finite values at iteration {iteration}")


class InputError(ScsegError):
    """Unsupported input image (wrong dtype, incompatible dimensions)."""


class DatasetError(ScsegError):
    """A dataset directory is malformed (missing or mismatched pairs)."""
