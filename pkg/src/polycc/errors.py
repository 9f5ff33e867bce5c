"""Exception hierarchy shared by all polycc modules."""


class PolyccError(Exception):
    """Base class for all polycc errors."""


class ParameterError(PolyccError, ValueError):
    """A parameter violates its stated invariant."""


class CollisionError(ParameterError):
    """Two bodies are closer than the collision tolerance.

    ``pair`` holds the zero-based indices of the offending bodies.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InadmissibleTwistError(ParameterError):
    """Twist angle outside {0, pi/N} where only those are meaningful."""


class SingularityError(PolyccError, ArithmeticError):
    """A kernel sum has a vanishing denominator."""


class IntegrationError(PolyccError, RuntimeError):
    """Step-size control failed to keep the energy error bounded."""
