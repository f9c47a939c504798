"""Exception hierarchy shared by the readers and scorers."""


class GecError(ValueError):
    """Base class. ``lineno`` is 1-based when the error comes from a file."""

    kind = "error"

    def __init__(self, message, lineno=None, source=None):
        super().__init__(message)
        self.message = message
        self.lineno = lineno
        self.source = source

    def __str__(self):
        where = []
        if self.source:
            where.append(str(self.source))
        if self.lineno is not None:
            where.append(f"line {self.lineno}")
        prefix = ":".join(where)
        if prefix:
            return f"{prefix}: {self.kind}: {self.message}"
        return f"{self.kind}: {self.message}"


class MalformedLine(GecError):
    kind = "MalformedLine"


class SpanOutOfRange(GecError):
    kind = "SpanOutOfRange"


class UnknownAction(GecError):
    kind = "UnknownAction"


class InvalidEdit(GecError):
    """An A line whose span arity does not fit its action."""

    kind = "InvalidEdit"


class EmptyBlock(GecError):
    kind = "EmptyBlock"


class ConflictingEdits(GecError):
    kind = "ConflictingEdits"


class EmptyCorpus(GecError):
    kind = "EmptyCorpus"


class EmptyHypothesis(GecError):
    kind = "EmptyHypothesis"


class LengthMismatch(GecError):
    """Parallel inputs (hypotheses, references, sources) differ in length."""

    kind = "LengthMismatch"
