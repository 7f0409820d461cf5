"""Exception hierarchy.

Two families matter to callers: :class:`InputError` for bad arguments or
configuration (CLI exit code 1) and :class:`NumericalError` for runs that
were set up correctly but failed numerically (CLI exit code 2).
"""


class LZError(Exception):
    """Base class for all package errors."""


class InputError(LZError, ValueError):
    pass


class NumericalError(LZError, ArithmeticError):
    pass


class ConventionError(InputError):
    """A matrix was used under the wrong hermiticity convention."""


class DegenerateProfileError(InputError):
    """The sweep field vanishes identically on an interval."""


class CrossingSingularityError(InputError):
    """A rate-dependent formula was evaluated where the sweep rate vanishes."""


class SingularPivotError(NumericalError):
    def __init__(self, index, time=None, value=0.0):
        self.index = index
        self.time = time
        self.value = value
        where = f" at t={time:.12g}" if time is not None else ""
        super().__init__(f"singular pivot h_{index}={value:.3e}{where}")
