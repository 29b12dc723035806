class SpanSubError(Exception):
    """Base class for all library errors."""


class InvalidSystem(SpanSubError):
    """A tuple system does not meet its declared density."""


class FamilyNotFound(SpanSubError):
    """No admissible tuple family was found within the retry budget."""


class InvalidDegree(SpanSubError):
    """The host digraph is below the required semi-degree."""


class ReservoirExhausted(SpanSubError):
    """No unused reservoir vertex connects the requested pair."""


class LinkageFailed(SpanSubError):
    """Two consecutive absorber gadgets could not be linked."""


class AbsorptionFailed(SpanSubError):
    """A leftover set could not be matched to free absorber slots."""


class HamiltonNotFound(SpanSubError):
    """No Hamiltonian cycle found (precondition failed or budget exhausted)."""


class PreconditionViolated(SpanSubError):
    """Solver input violates a hypothesis; the message names the inequality."""


class SolveFailed(SpanSubError):
    def __init__(self, stage: str, diagnostics: list[str]):
        self.stage = stage
        self.diagnostics = list(diagnostics)
        super().__init__(f"solve failed at stage {stage!r}: " + "; ".join(self.diagnostics[-3:]))


class InstanceTooLarge(SpanSubError):
    """Exhaustive search refused: instance above the size cap."""


class InvalidSizes(SpanSubError):
    """Generator parameters are inconsistent."""


class InfeasibleDensity(SpanSubError):
    """Requested arc probability exceeds one."""


class InvalidPattern(SpanSubError):
    """Pattern digraph has isolated vertices or too many vertices."""
