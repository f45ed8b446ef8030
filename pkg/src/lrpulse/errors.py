"""Exception hierarchy.

``DesignError`` covers everything that makes a requested protocol
infeasible; ``NumericalError`` covers integration failures.
"""


class LRPulseError(Exception):
    pass


class ParameterError(LRPulseError, ValueError):
    """Invalid device parameters."""


class DesignError(LRPulseError, ValueError):
    """The requested transfer cannot be designed."""


class UnsupportedBranchError(DesignError):
    pass


class AnsatzError(DesignError):
    """The polynomial ansatz has no solution for this spec."""


class ConstraintError(DesignError):
    """A synthesized pulse violates the start-of-protocol gauge constraint."""


class NumericalError(LRPulseError, ArithmeticError):
    pass


class NormDriftError(NumericalError):
    pass


class SingularityError(NumericalError):
    """An LR phase integrand is unbounded on the integration path."""


class EmptySweepError(LRPulseError, RuntimeError):
    pass
