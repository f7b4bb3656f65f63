"""Exception hierarchy shared by all modules."""


class IsgError(Exception):
    pass


class ParameterError(IsgError, ValueError):
    """Bad input: composite modulus, mismatched contexts, wrong kernel, ..."""


class UnsupportedParameterError(ParameterError):
    pass


class NotSupersingularError(ParameterError):
    pass


class CapacityError(IsgError):
    """The requested computation exceeds a desk-scale limit."""


class InternalError(IsgError, RuntimeError):
    """Two independent methods disagreed, or an invariant broke."""


class StateCorruptionError(InternalError):
    pass
