"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A computation failed to converge or produced an unusable result.

    Raised for genuinely numerical failures (non-convergent Wronskian
    plateaus, linear-solve breakdowns), as opposed to invalid arguments,
    which raise ValueError.
    """
