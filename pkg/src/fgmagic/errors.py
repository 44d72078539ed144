"""Exception types shared across the package."""


class InputError(ValueError):
    """An argument violates a documented precondition."""


class NumericalFailure(RuntimeError):
    """A computation produced values outside their mathematical range.

    ``step`` carries the offending sampler position (0-based Majorana index)
    and ``index`` the sample index inside a batch, when known.  Sweep drivers
    fill in ``module`` and the sampling ``seed`` of the failing state.
    """

    def __init__(self, message, step=None, index=None, module=None, seed=None):
        super().__init__(message)
        self.step = step
        self.index = index
        self.module = module
        self.seed = seed


class InsufficientSamples(ValueError):
    """No samples are left after filtering."""
