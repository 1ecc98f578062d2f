"""Exception hierarchy shared by all solvers."""


class PTSpectraError(Exception):
    """Base class for every error raised by the package."""


class NumericalFailure(PTSpectraError):
    """A numerical routine could not deliver a trustworthy result."""


class BranchAmbiguity(NumericalFailure):
    pass


class TurningPointOnPath(NumericalFailure):
    pass


class QuadratureFailure(NumericalFailure):
    pass


class DegenerateLeadingCoefficient(PTSpectraError, ValueError):
    pass


class NoConvergence(NumericalFailure):
    """Iteration budget exhausted; ``best`` holds the last iterate."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class StepUnderflow(NumericalFailure):
    pass


class RhsSingular(NumericalFailure):
    pass


class SectorViolation(PTSpectraError, ValueError):
    pass


class NoRoot(NumericalFailure):
    pass


class IncompleteSpectrum(NumericalFailure):
    def __init__(self, message, found=None):
        super().__init__(message)
        self.found = found if found is not None else []


class BranchMergeAmbiguous(NumericalFailure):
    pass


class NormalizationSingular(NumericalFailure):
    pass


class TraceDiverged(NumericalFailure):
    pass


class TopologyUnresolved(NumericalFailure):
    pass


class DegenerateTurningPoints(NumericalFailure):
    pass


class WrongBranch(NumericalFailure):
    pass


class PuiseuxOutOfRange(PTSpectraError, ValueError):
    pass


class ConfigInvalid(PTSpectraError, ValueError):
    """Config failed validation; ``pointer`` is a JSON pointer to the offending field."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


class MissingTaskOutput(PTSpectraError, KeyError):
    pass


class DegenerateEnergy(DegenerateTurningPoints, ValueError):
    """Mapped energy too close to zero: all turning points coalesce at the origin."""


class TracingStalled(TraceDiverged):
    """A trajectory stopped making progress without reaching a terminus."""


class TurningPairUnavailable(NumericalFailure):
    """No conjugate-symmetric turning-point pair matches the selection rule."""


class NotMonotone(NumericalFailure):
    """A quantization integral failed to bracket its target."""


class BranchSwapSuspected(NumericalFailure):
    """Branch matching between neighbouring L values was ambiguous."""


NormalizationDegenerate = NormalizationSingular
