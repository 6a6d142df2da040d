"""Exception hierarchy shared by all modules and the CLI."""


class PerispecError(Exception):
    """Base class; ``kind`` is the machine-readable name used by the CLI."""

    @property
    def kind(self):
        return type(self).__name__


class DescriptorError(PerispecError, ValueError):
    pass


class MissingIndex(DescriptorError):
    pass


class NoUniqueOccurrence(DescriptorError):
    pass


class OutOfRange(DescriptorError):
    pass


class InvalidMatrix(PerispecError, ValueError):
    pass


class DimensionMismatch(PerispecError, ValueError):
    pass


class NoConvergence(PerispecError, ArithmeticError):
    pass


class ZeroOperator(PerispecError, ValueError):
    pass


class RankTooLow(PerispecError, ValueError):
    pass


class ConstructionFailed(PerispecError, RuntimeError):
    pass


class NotLinearConsistent(PerispecError, ValueError):
    pass


class InconsistentWithLemma(PerispecError, AssertionError):
    """Sampled quadratic-form identity and the scalar closed form disagree."""


class SpanDeficient(PerispecError, ValueError):
    pass
