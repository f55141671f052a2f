"""Exception hierarchy.

Every error carries a stable ``code`` used for the CLI's JSON diagnostics
and a distinct process exit status.
"""

from __future__ import annotations


class ConleyMorseError(Exception):
    """Base class for all library faults."""

    code = "error"
    exit_status = 1

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.detail = detail

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self), "detail": _jsonable(self.detail)}


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class IngestionError(ConleyMorseError):
    code = "ingestion"
    exit_status = 2


class IngestionOutOfBounds(IngestionError):
    code = "ingestion_out_of_bounds"
    exit_status = 3


class MalformedEnvelope(IngestionError):
    code = "malformed_envelope"
    exit_status = 4


class InvalidCell(ConleyMorseError):
    code = "invalid_cell"
    exit_status = 5


class NotIsolating(ConleyMorseError):
    code = "not_isolating"
    exit_status = 6


class NotAttractor(ConleyMorseError):
    code = "not_attractor"
    exit_status = 7


class ResolutionTooCoarse(ConleyMorseError):
    code = "resolution_too_coarse"
    exit_status = 8


class RestrictInvalid(ConleyMorseError):
    code = "restrict_invalid"
    exit_status = 9


class MalformedSolution(ConleyMorseError):
    code = "malformed_solution"
    exit_status = 10


class ValuesNotAcyclic(ConleyMorseError):
    code = "values_not_acyclic"
    exit_status = 11


class CarrierError(ConleyMorseError):
    code = "carrier_error"
    exit_status = 12


class ExcisionFailure(ConleyMorseError):
    code = "excision_failure"
    exit_status = 13


class NotDivisible(ConleyMorseError):
    code = "not_divisible"
    exit_status = 14


class NegativeQ(ConleyMorseError):
    code = "negative_q"
    exit_status = 15


class InconsistentIndex(ConleyMorseError):
    """Two computations of the same Conley index disagree."""

    code = "inconsistent_index"
    exit_status = 16


class VerificationFailure(ConleyMorseError):
    """A constructed object failed its own post-condition check."""

    code = "verification_failure"
    exit_status = 17
