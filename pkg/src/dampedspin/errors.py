"""Exception hierarchy shared by all modules."""


class SpinDynamicsError(ValueError):
    """Base class for every error raised by dampedspin."""


class PoleSingularity(SpinDynamicsError):
    """The stereographic coordinate is evaluated at (or too close to) the south pole."""


class NotAState(SpinDynamicsError):
    pass


class NotHermitian(SpinDynamicsError):
    pass


class BadTrace(SpinDynamicsError):
    pass


class NotPure(SpinDynamicsError):
    pass


class NotNormalized(SpinDynamicsError):
    pass


class OutOfRange(SpinDynamicsError):
    pass


class UnsupportedPulse(SpinDynamicsError):
    pass


class UnknownFamily(SpinDynamicsError):
    pass


class DomainTooLarge(SpinDynamicsError):
    """Bessel argument outside the radius where the ascending series is trusted."""


class StepTooLarge(SpinDynamicsError):
    """Integrator norm drift exceeded the instability threshold."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
