"""Exception hierarchy shared by all harmonia modules."""


class HarmoniaError(Exception):
    """Base class for every error raised by harmonia."""


class InputError(HarmoniaError, ValueError):
    """Malformed or inconsistent user input."""


class GeometryError(HarmoniaError, ValueError):
    """The geometry degenerates where a regular point was required."""


class BothZero(InputError):
    pass


class ZeroPolynomial(InputError):
    pass


class AllZero(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class StageOutOfRange(InputError):
    pass


class TooFew(InputError):
    pass


class TooFewPlanes(InputError):
    pass


class NotSubgeneralPosition(InputError):
    pass


class ConfigInvalid(InputError):
    pass


class HypothesisFailed(InputError):
    """The defect-sum hypothesis fails, so the N window is empty."""


class PreconditionFailed(InputError):
    pass


class DegeneratePoint(GeometryError):
    pass


class NotQuasiconformal(GeometryError):
    pass


class IndeterminatePoint(GeometryError):
    pass


class DegenerateCurve(GeometryError):
    pass


class Infeasible(HarmoniaError, RuntimeError):
    pass


class NoWitness(HarmoniaError, RuntimeError):
    pass
