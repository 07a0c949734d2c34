"""One entry point for the four entailment relations.

Every relation here is "truth in a selected set of models": all models
(ranked), the LM-minimal model (LM), the PT-minimal models (PT) or the PT'
ones.  :class:`Theory` holds the selected models of a KB as a rank table so
that many queries against the same KB are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conditionals import ConditionalSet, conditional_of_rows
from .enumeration import (DEFAULT_MAX_ATOMS, batch_is_model, interpretations_to_table, model_rows,
                          row_to_interpretation)
from .lm import LmTrace, lm_minimal
from .pt import ptprime_filter_rows, pt_minimal_rows
from .semantics import EntailmentMode, RankedInterpretation, Vocabulary, resolve_vocab
from .syntax import as_formula, as_kb

__all__ = ["Theory", "theory", "entails", "selected_models"]


@dataclass
class Theory:
    """The consequences of ``kb`` under ``mode`` over a fixed vocabulary."""

    kb: tuple
    vocab: Vocabulary
    mode: EntailmentMode
    rows: np.ndarray = field(repr=False)
    trace: LmTrace | None = field(default=None, repr=False)
    _conditional: ConditionalSet | None = field(default=None, repr=False)

    @property
    def models(self) -> list[RankedInterpretation]:
        return [row_to_interpretation(self.vocab, r) for r in self.rows]

    def holds(self, f) -> bool:
        f = as_formula(f)
        return bool(batch_is_model(self.vocab, self.rows, [f]).all())

    def holds_all(self, fs) -> np.ndarray:
        """Vectorized :meth:`holds` over several formulas (shared subformula cache)."""
        cache: dict = {}
        return np.array([bool(batch_is_model(self.vocab, self.rows, [as_formula(f)], cache).all())
                         for f in fs], dtype=bool)

    def counter_models(self, f) -> list[RankedInterpretation]:
        f = as_formula(f)
        bad = ~batch_is_model(self.vocab, self.rows, [f])
        return [row_to_interpretation(self.vocab, r) for r in self.rows[bad]]

    def conditional(self) -> ConditionalSet:
        """Pairs ``(a, b)`` of canonical formulas with ``*a -> b`` in the theory."""
        if self._conditional is None:
            self._conditional = conditional_of_rows(self.vocab, self.rows)
        return self._conditional


def theory(kb, mode, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> Theory:
    kb = as_kb(kb)
    mode = EntailmentMode.parse(mode)
    vocab = resolve_vocab(vocab, *kb)
    if mode is EntailmentMode.LM:
        R, trace = lm_minimal(kb, vocab)
        return Theory(kb, vocab, mode, interpretations_to_table([R]), trace)
    vocab, rows = model_rows(kb, vocab, max_atoms)
    if mode in (EntailmentMode.PT, EntailmentMode.PTPRIME):
        rows = rows[pt_minimal_rows(rows)]
        if mode is EntailmentMode.PTPRIME:
            rows = rows[ptprime_filter_rows(rows)]
    return Theory(kb, vocab, mode, rows)


def selected_models(kb, mode, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> list[RankedInterpretation]:
    return theory(kb, mode, vocab, max_atoms).models


def entails(kb, f, mode, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    """Does ``kb`` entail ``f`` under ``mode`` (ranked, lm, pt or ptp)?"""
    kb, f = as_kb(kb), as_formula(f)
    vocab = resolve_vocab(vocab, *kb, f)
    return theory(kb, mode, vocab, max_atoms).holds(f)
