"""Exception hierarchy shared by all zcsieve modules.

Every error carries a ``details`` dict so the CLI can emit machine-readable
error objects alongside its exit code.
"""


class ZcsieveError(Exception):
    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self):
        return {
            "type": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class CompositeModulus(ZcsieveError):
    """A modulus that must be an odd prime is not one."""


class NonResidue(ZcsieveError):
    """Square root requested of a quadratic non-residue."""


class FieldMismatch(ZcsieveError):
    """Operands belong to different fields."""


class ShapeMismatch(ZcsieveError):
    """Coset lattices with incompatible rank, modulus or torsion shape."""


class SingularModel(ZcsieveError):
    """The curve model has vanishing discriminant."""


class UnsupportedModel(ZcsieveError):
    """A structurally valid model outside the supported certification range."""


class BadReduction(ZcsieveError):
    """Operation requires good reduction at the given prime."""


class PrecisionExhausted(ZcsieveError):
    """Local search ended without a solubility or insolubility certificate."""


class InvalidDivisor(ZcsieveError):
    """A Mumford pair that does not represent a divisor on the curve."""


class PointNotOnCurve(ZcsieveError):
    """Coordinates that do not satisfy the curve equation."""


class NonIntegralAtP(ZcsieveError):
    """A rational point whose coordinates are not p-integral."""


class EmbeddingUnavailable(ZcsieveError):
    """No rational degree-1 class is available to embed the curve."""


class NoAdmissiblePrimes(ZcsieveError):
    """The admissibility filter rejected every candidate sieve prime."""


class HypothesisUnmet(ZcsieveError):
    """A report was requested whose stated hypotheses fail on the input."""


class ParseError(ZcsieveError):
    """Malformed input file or configuration."""


class FactorizationError(ZcsieveError):
    """Integer factorization beyond the trial-division bound was required."""
