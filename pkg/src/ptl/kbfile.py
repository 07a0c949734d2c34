"""Reading knowledge bases from text files.

Format: one formula per line; ``#`` starts a comment; blank lines are
ignored; an optional ``vocab: a b c`` line (commas allowed) pins the
vocabulary instead of inferring it from the atoms used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError
from .semantics import Vocabulary
from .syntax import Formula, atoms, parse

__all__ = ["KbSentence", "KbFile", "parse_kb_text", "load_kb"]

_VOCAB_RE = re.compile(r"\s*vocab\s*:(.*)$")


@dataclass(frozen=True)
class KbSentence:
    formula: Formula
    line: int
    text: str


@dataclass(frozen=True)
class KbFile:
    path: str
    sentences: tuple
    declared_vocab: Vocabulary | None = None

    @property
    def formulas(self) -> tuple:
        return tuple(s.formula for s in self.sentences)

    def vocabulary(self, *extra: Formula) -> Vocabulary:
        """The declared vocabulary, else the sorted atoms of the KB and ``extra``."""
        if self.declared_vocab is not None:
            for f in extra:
                self.declared_vocab.check(f)
            return self.declared_vocab
        return Vocabulary.of(*self.formulas, *extra)


def parse_kb_text(text: str, path: str = "<string>") -> KbFile:
    sentences = []
    vocab = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = _VOCAB_RE.match(body)
        if m:
            if vocab is not None:
                raise ParseError(f"{path}: second vocab declaration", lineno, body.index("vocab") + 1)
            names = [x for x in re.split(r"[\s,]+", m.group(1).strip()) if x]
            try:
                vocab = Vocabulary(tuple(names))
            except ValueError as exc:
                raise ParseError(f"{path}: {exc}", lineno, 1) from None
            continue
        try:
            f = parse(body)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc.message}", lineno, exc.column, raw) from None
        sentences.append(KbSentence(f, lineno, body.strip()))
    kb = KbFile(path, tuple(sentences), vocab)
    if vocab is not None:
        for s in sentences:
            missing = atoms(s.formula) - set(vocab.atoms)
            if missing:
                raise ParseError(f"{path}: atom {sorted(missing)[0]!r} is not in the declared vocabulary",
                                 s.line, 1)
    return kb


def load_kb(path) -> KbFile:
    path = Path(path)
    return parse_kb_text(path.read_text(encoding="utf-8"), str(path))
