class BoundaryKError(Exception):
    """Root of all errors raised by boundaryk."""


class NotPrime(BoundaryKError, ValueError):
    def __init__(self, p):
        super().__init__(f"{p} is not a prime.")
        self.p = p


class MissingFace(BoundaryKError, ValueError):
    def __init__(self, simplex, face):
        super().__init__(f"Face {face} of simplex {simplex} is not listed.")
        self.simplex = tuple(simplex)
        self.face = tuple(face)


class NonIncreasingVertices(BoundaryKError, ValueError):
    def __init__(self, simplex):
        super().__init__(f"Vertices of {simplex} must be strictly increasing.")
        self.simplex = tuple(simplex)


class DimensionTooHigh(BoundaryKError, ValueError):
    def __init__(self, dim, cap=3):
        super().__init__(f"Complex dimension {dim} exceeds the supported maximum {cap}.")
        self.dim = dim


class DimensionMismatch(BoundaryKError, ValueError):
    """A boundary matrix does not fit the chain ranks."""


class BoundarySquareNonzero(BoundaryKError, ValueError):
    def __init__(self, degree):
        super().__init__(f"Boundary composite d_{degree - 1} * d_{degree} is not zero.")
        self.degree = degree


class SchemaError(BoundaryKError, ValueError):
    """A fixture file does not follow the fixture schema."""

    def __init__(self, reason, message, path="", line=None):
        where = path or "<root>"
        if line is not None:
            where = f"{where} (line {line})"
        super().__init__(f"{reason} at {where}: {message}")
        self.reason = reason
        self.path = path
        self.line = line


class MixedModes(BoundaryKError, ValueError):
    def __init__(self, modes):
        labels = ", ".join(sorted({str(m) for m in modes}))
        super().__init__(f"Cannot classify invariants computed in different modes: {labels}.")
        self.modes = tuple(modes)


class RefusedComputation(BoundaryKError):
    """A computation whose hypotheses do not hold on the given data."""

    precondition = ""

    def __init__(self, message, precondition=None):
        super().__init__(message)
        if precondition is not None:
            self.precondition = precondition


class DegenerationNotCertified(RefusedComputation):
    precondition = "every differential of the spectral sequence is structurally zero"


class ExtensionUnresolved(RefusedComputation):
    precondition = "every filtration extension has a free quotient or a vanishing end"


class IntegralTorsionUnsupported(RefusedComputation):
    precondition = "H_1(M) is torsion-free"


class HyperbolicityNotDeclared(RefusedComputation):
    precondition = "the manifold is declared hyperbolic"


class ManifoldValidationFailed(RefusedComputation):
    precondition = "the complex is a closed connected orientable 3-manifold"


class ManifoldFlagsNotDeclared(RefusedComputation):
    precondition = "the manifold is declared closed and orientable"
