"""Exception hierarchy shared across the toolchain.

Groups map onto the CLI exit codes: parse/safety problems, semantic input
problems, resource limits, and internal invariant violations.
"""


class BigruleError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------- exit 1 ----

class ParseError(BigruleError):
    """Malformed input text. Carries a line/column position when known."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}" + (f", col {col}" if col is not None else "") + f": {message}"
        super().__init__(message)


class SafetyError(BigruleError):
    """A rule failed the safety closure."""

    def __init__(self, unsafe_vars, rule_text=""):
        self.unsafe_vars = frozenset(unsafe_vars)
        names = ", ".join(sorted(self.unsafe_vars))
        where = f" in `{rule_text}`" if rule_text else ""
        super().__init__(f"unsafe variables {{{names}}}{where}")


class ArityError(BigruleError):
    """The same predicate is used with two different arities."""


class EmptyPrefixError(ParseError):
    """QDIMACS input has no quantifier lines (strict mode)."""


class DanglingReferenceError(ParseError):
    """Reified fact references an undeclared atom or rule id."""


class DuplicateIdError(ParseError):
    """Reified atom or rule id declared twice."""


# ---------------------------------------------------------------- exit 2 ----

class InputSemanticsError(BigruleError):
    """Structurally valid input that a component cannot accept."""


class PartitionError(InputSemanticsError):
    """Graph partition section references an unknown vertex."""


class PrefixShapeError(InputSemanticsError):
    """QBF prefix does not match the shape an encoder requires."""


class ClauseTooWideError(InputSemanticsError):
    """Clause exceeds the width the classic QBF encoding supports."""


class MissingPartitionError(InputSemanticsError):
    """Second-level coloring encoding needs a vertex partition."""


class ReservedPrefixCollisionError(InputSemanticsError):
    """Program already uses a predicate prefix reserved for fresh symbols."""


class HeadCycleError(InputSemanticsError):
    """Shifting was asked to verify head-cycle freeness and it failed."""


class UnsupportedAggregateError(InputSemanticsError):
    """Aggregate outside the fragment the oracle evaluates exactly."""


class DivisionByZeroError(InputSemanticsError):
    """Arithmetic evaluation hit a division by zero."""


# ---------------------------------------------------------------- exit 4 ----

class LimitError(BigruleError):
    """A configured resource cap was exceeded."""


class GroundingLimitError(LimitError):
    pass


class TooManyAtomsError(LimitError):
    pass


class TooManyVarsError(LimitError):
    pass


class TooManyVerticesError(LimitError):
    pass


class TupleWidthError(LimitError):
    """Per-clause existential tuple width above the expansion cap."""


# ------------------------------------------------------------- internal ----

class InternalError(BigruleError):
    """Invariant that valid inputs cannot violate. A bug if seen."""


class UncoveredAtomError(InternalError):
    """A body atom's variables fit no bag of a validated decomposition."""


class NoCoveringBagError(InternalError):
    """No bag covers the head variables of a validated decomposition."""


class UnsecurableVariableError(InternalError):
    """No positive atom or arithmetic chain grounds a needed variable."""
