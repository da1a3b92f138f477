"""Exception taxonomy. The CLI maps each category to a distinct exit code."""


class GrammargenError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class GraphError(GrammargenError):
    """Malformed graph or illegal graph operation (unknown node, bad edge)."""

    exit_code = 3


class ParseError(GrammargenError):
    """Input file could not be parsed; carries an optional line number."""

    exit_code = 3

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructureError(GrammargenError):
    """RNA structure invariant violated (crossing pairs, bad complement...)."""

    exit_code = 3


class GrammarError(GrammargenError):
    """Grammar induction or application failed (empty corpus, stuck seed)."""

    exit_code = 4


class CertificateCollisionError(GrammarError):
    """Interface certificates matched but no exact isomorphism exists."""


class TransformError(GrammargenError):
    """Feasibility transformer rejected a candidate graph."""

    exit_code = 4


class EstimatorError(GrammargenError):
    """Model fitting preconditions violated (too few points, non-finite)."""

    exit_code = 4


class ConfigError(GrammargenError):
    """Invalid configuration value."""

    exit_code = 2
