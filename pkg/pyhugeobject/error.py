"""
Custom error definitions for huge object model simulations.

Algorithmic outcomes (``Fail``, ``Reject``, ``Invalid``) are values and are
never raised; the classes below cover misuse and internal failures.
"""


class HugeObjectBaseError(Exception):
    """
    A base error class from which other pyhugeobject errors
    should inherit.
    """
    pass


class HugeObjectInitializationError(HugeObjectBaseError):
    """
    Raised when an object is constructed from invalid arguments (e.g. a
    bit that is not 0/1 or a mapping that is not a bijection).
    """
    pass


class HugeObjectDistributionError(HugeObjectBaseError):
    """
    Raised when a distribution violates its invariants: mass sum, distinct
    support or a common dimension. When raised while parsing a distribution
    file ``line_number`` holds the offending line.
    """

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = 'line {line}: {message}'.format(
                line=line_number,
                message=message
            )
        super(HugeObjectDistributionError, self).__init__(message)
        self.line_number = line_number


class HugeObjectDimensionError(HugeObjectBaseError):
    """
    Raised on a length, size or shape mismatch between operands.
    """
    pass


class HugeObjectBudgetError(HugeObjectBaseError):
    """
    Raised when a sample or query budget would be exceeded.
    """
    pass


class HugeObjectOracleError(HugeObjectBaseError):
    """
    Raised on an unknown sample id or an index out of range.
    """
    pass


class HugeObjectPreconditionError(HugeObjectBaseError):
    """
    Raised when an algorithm precondition does not hold. This is distinct
    from an algorithm reporting ``Fail``.
    """
    pass


class HugeObjectConstructionError(HugeObjectBaseError):
    """
    Raised when a rejection sampler reaches its attempt cap.
    """
    pass


class HugeObjectSolverError(HugeObjectBaseError):
    """
    Raised when an exact solver reports an impossible state.
    """
    pass


class HugeObjectConfigError(HugeObjectBaseError):
    """
    Raised on invalid experiment configuration. ``field`` names the
    offending configuration key.
    """

    def __init__(self, message, field=None):
        if field is not None:
            message = '{field}: {message}'.format(field=field, message=message)
        super(HugeObjectConfigError, self).__init__(message)
        self.field = field
