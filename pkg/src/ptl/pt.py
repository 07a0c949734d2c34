"""Pointwise (PT) preference and the PT / PT' minimal models of a knowledge base.

PT-minimal models are found by filtering the enumerated models: the model
with the least rank sum left in the pool cannot be strictly dominated by
anything, so it is kept and every model it dominates is discarded.  PT'
additionally keeps only the PT-minimal models whose set of possible
valuations is maximal under inclusion.
"""

from __future__ import annotations

import numpy as np

from .enumeration import DEFAULT_MAX_ATOMS, IMPOSSIBLE, batch_is_model, model_rows, row_to_interpretation
from .semantics import RankedInterpretation, _same_vocab, resolve_vocab
from .syntax import as_formula, as_kb

__all__ = [
    "pt_preferred", "pt_strictly_preferred", "pt_minimal_rows", "pt_minimal_rows_bruteforce",
    "ptprime_filter_rows", "pt_minimal_models", "ptprime_minimal_models", "pt_entails",
    "ptprime_entails",
]


def pt_preferred(R1: RankedInterpretation, R2: RankedInterpretation) -> bool:
    """Every valuation is ranked at least as low in ``R1`` as in ``R2``."""
    _same_vocab(R1, R2)
    return all(a <= b for a, b in zip(R1.ranks, R2.ranks))


def pt_strictly_preferred(R1: RankedInterpretation, R2: RankedInterpretation) -> bool:
    return pt_preferred(R1, R2) and not pt_preferred(R2, R1)


def pt_minimal_rows(rows: np.ndarray) -> np.ndarray:
    """Indices (ascending) of the pointwise-minimal rows of a rank table.

    Rows are assumed distinct.
    """
    if len(rows) == 0:
        return np.zeros(0, dtype=np.int64)
    sums = rows.astype(np.int32).sum(axis=1)
    alive = np.ones(len(rows), dtype=bool)
    kept = []
    while alive.any():
        idx = np.flatnonzero(alive)
        best = idx[np.argmin(sums[idx])]
        kept.append(best)
        dominated = (rows[idx] >= rows[best]).all(axis=1)
        alive[idx[dominated]] = False
    return np.array(sorted(kept), dtype=np.int64)


def pt_minimal_rows_bruteforce(rows: np.ndarray) -> np.ndarray:
    """Quadratic reference implementation of :func:`pt_minimal_rows`."""
    keep = []
    for i, r in enumerate(rows):
        le = (rows <= r).all(axis=1)
        lt = le & (rows < r).any(axis=1)
        if not lt.any():
            keep.append(i)
    return np.array(keep, dtype=np.int64)


def ptprime_filter_rows(rows: np.ndarray) -> np.ndarray:
    """Indices of the rows whose possible set is not strictly inside another row's."""
    possible = rows != IMPOSSIBLE
    keep = []
    for i, p in enumerate(possible):
        sup = (possible >= p).all(axis=1) & (possible > p).any(axis=1)
        if not sup.any():
            keep.append(i)
    return np.array(keep, dtype=np.int64)


def _pt_rows(kb, vocab, max_atoms):
    vocab, rows = model_rows(kb, vocab, max_atoms)
    return vocab, rows[pt_minimal_rows(rows)]


def pt_minimal_models(kb, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> list[RankedInterpretation]:
    """The PT-minimal models of ``kb``, in enumeration order."""
    vocab, rows = _pt_rows(kb, vocab, max_atoms)
    return [row_to_interpretation(vocab, r) for r in rows]


def ptprime_minimal_models(kb, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> list[RankedInterpretation]:
    """PT-minimal models of ``kb`` with an inclusion-maximal set of possible valuations."""
    vocab, rows = _pt_rows(kb, vocab, max_atoms)
    rows = rows[ptprime_filter_rows(rows)]
    return [row_to_interpretation(vocab, r) for r in rows]


def _holds_in_all(kb, f, vocab, max_atoms, prime):
    kb, f = as_kb(kb), as_formula(f)
    vocab = resolve_vocab(vocab, *kb, f)
    vocab, rows = _pt_rows(kb, vocab, max_atoms)
    if prime:
        rows = rows[ptprime_filter_rows(rows)]
    return bool(batch_is_model(vocab, rows, [f]).all())


def pt_entails(kb, f, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    """``f`` holds in every PT-minimal model of ``kb``."""
    return _holds_in_all(kb, f, vocab, max_atoms, prime=False)


def ptprime_entails(kb, f, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    """``f`` holds in every PT'-minimal model of ``kb``."""
    return _holds_in_all(kb, f, vocab, max_atoms, prime=True)
