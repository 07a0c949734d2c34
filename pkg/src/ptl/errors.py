"""Exception hierarchy for the reasoner."""


class PTLError(Exception):
    """Base class for every error raised by this package."""


class ParseError(PTLError):
    def __init__(self, message, line=1, column=1, text=None):
        self.message = message
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownAtom(PTLError, KeyError):
    def __init__(self, atom, vocab=None):
        self.atom = atom
        self.vocab = vocab
        where = f" in vocabulary {list(vocab)}" if vocab is not None else ""
        super().__init__(f"unknown atom {atom!r}{where}")

    def __str__(self):
        return self.args[0]


class NestedTypicality(PTLError):
    pass


class NotPropositional(PTLError):
    pass


class NotConditionalKB(PTLError):
    pass


class VocabularyTooLarge(PTLError):
    pass


class VocabularyMismatch(PTLError):
    pass


class ConvexityViolation(PTLError):
    pass


class EmptyInput(PTLError, ValueError):
    pass


class UnsupportedCombination(PTLError):
    pass


class InvariantViolation(PTLError, AssertionError):
    """A runtime check of an algorithm invariant failed."""
