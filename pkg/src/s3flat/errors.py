"""Exception hierarchy shared by every module of the package."""


class S3FlatError(Exception):
    """Base class for all errors raised by s3flat."""


class DomainError(S3FlatError, ValueError):
    """A parameter lies outside the domain where a construction is defined."""


class NotTangent(DomainError):
    pass


class PoleProximity(S3FlatError):
    pass


class DegenerateFrame(S3FlatError):
    pass


class ArcLengthViolation(DomainError):
    pass


class HemisphereViolation(DomainError):
    pass


class DegenerateImmersion(S3FlatError):
    pass


class NotAsymptotic(S3FlatError):
    pass


class PreconditionViolation(DomainError):
    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        msg = f"precondition failed: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DegenerateDenominator(DomainError):
    pass


class ConstraintViolation(S3FlatError):
    pass


class NonConstantAngle(S3FlatError):
    pass


class SingularInitialData(DomainError):
    pass


class StiffnessAbort(S3FlatError):
    pass


class DivisionByZeroComponent(S3FlatError):
    pass


class PoleFailure(PoleProximity):
    """Every candidate projection pole lies on the sampled surface."""
