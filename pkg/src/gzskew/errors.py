"""Exception hierarchy shared by all modules."""


class GZError(Exception):
    """Base class for every error raised by the engine."""


class DimensionMismatch(GZError):
    pass


class NotDivisible(GZError):
    pass


class PoleAtPoint(GZError):
    pass


class NonLinearDenominator(GZError):
    pass


class NotARootSystem(GZError):
    pass


class OrderCapExceeded(GZError):
    pass


class NotParabolic(GZError):
    pass


class NoParabolicRepresentative(GZError):
    pass


class InconsistentCharacter(GZError):
    pass


class NotParabolicStabilizer(GZError):
    pass


class NotInvariantCoefficient(GZError):
    pass


class WrongLongestElement(GZError):
    pass


class NotHolomorphicAtGerm(GZError):
    """An operator produced a germ with a surviving pole at its base point."""

    def __init__(self, target, factor=None, message=None):
        self.target = tuple(target)
        self.factor = factor
        if message is None:
            message = "pole at target %s" % (list(map(str, self.target)),)
            if factor is not None:
                message += " along %s = 0" % (factor,)
        super().__init__(message)


class ModuleStructureMissing(GZError):
    pass


class PoleOnOrbit(GZError):
    def __init__(self, point, message=None):
        self.point = tuple(point)
        super().__init__(message or "coefficient has a pole at %s" % (list(map(str, self.point)),))


class ConfigError(GZError):
    pass
