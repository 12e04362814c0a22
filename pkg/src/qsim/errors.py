"""Exception hierarchy. The CLI maps these onto its exit codes."""


class QsimError(Exception):
    """Base class for all simulator errors."""


class GateError(QsimError, ValueError):
    """Invalid gate construction: bad operands, non-unitary matrix, bad parameter."""


class TopologyError(QsimError, ValueError):
    """Invalid partitioning: too many ranks, rank out of range, qubit out of range."""


class ParseError(QsimError, ValueError):
    """Malformed input text; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CircuitParseError(ParseError):
    """Malformed circuit text."""


class PauliParseError(ParseError):
    """Malformed observable text."""


class PlanError(QsimError):
    """Gate cannot be executed under the current partitioning (e.g. a dense
    multi-qubit gate with a non-local target)."""


class TransportError(QsimError):
    """Message-passing failure: mismatched buffers, mismatched collective
    ordering, or a missing partner."""


class MeasureError(QsimError):
    """Measurement requested on an invalid state (e.g. unnormalized)."""
