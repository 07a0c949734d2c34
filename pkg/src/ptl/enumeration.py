"""Exhaustive enumeration of ranked interpretations and ranked entailment.

A ranked interpretation is fixed by its set of possible valuations plus an
ordered partition of that set into layers, so the interpretations over ``U``
number ``sum_m C(|U|, m) * Fubini(m)``: 6 for one atom, 150 for two,
1,091,670 for three.

Two routes produce the same sequence in the same order:

* :func:`enumerate_interpretations` is a plain generator;
* :func:`rank_table` materializes all rank vectors as an ``int8`` numpy
  array (``IMPOSSIBLE`` standing for infinity), which the vectorized
  evaluator :func:`batch_extension` works on.  Everything that quantifies
  over all interpretations goes through the table.
"""

from __future__ import annotations

import warnings
from functools import lru_cache
from math import comb
from typing import Iterator

import numpy as np

from .errors import VocabularyTooLarge
from .semantics import INF, RankedInterpretation, Vocabulary, resolve_vocab
from .syntax import And, Atom, Bot, Formula, Iff, Implies, Not, Or, Top, Typ, as_formula, as_kb

__all__ = [
    "DEFAULT_MAX_ATOMS", "HARD_MAX_ATOMS", "IMPOSSIBLE", "fubini", "interpretation_count",
    "check_bound", "enumerate_interpretations", "rank_table", "row_to_interpretation",
    "interpretations_to_table", "batch_extension", "batch_is_model", "model_rows", "models",
    "ranked_entails", "counter_models", "is_satisfiable",
]

DEFAULT_MAX_ATOMS = 3
HARD_MAX_ATOMS = 4
IMPOSSIBLE = 127  # int8 stand-in for an infinite rank


@lru_cache(maxsize=None)
def fubini(m: int) -> int:
    """Number of ordered set partitions of an m-element set."""
    if m == 0:
        return 1
    return sum(comb(m, k) * fubini(m - k) for k in range(1, m + 1))


def interpretation_count(n_atoms: int) -> int:
    """Closed form for the number of ranked interpretations over ``n_atoms`` atoms."""
    u = 1 << n_atoms
    return sum(comb(u, m) * fubini(m) for m in range(u + 1))


def check_bound(vocab: Vocabulary, max_atoms: int = DEFAULT_MAX_ATOMS) -> None:
    n = len(vocab)
    limit = min(max_atoms, HARD_MAX_ATOMS)
    if n > limit:
        raise VocabularyTooLarge(
            f"vocabulary {list(vocab.atoms)} has {n} atoms; enumeration is limited to {limit}")
    if n > DEFAULT_MAX_ATOMS:
        warnings.warn(f"enumerating interpretations over {n} atoms "
                      f"({interpretation_count(n):.3e} of them) will not finish in practice",
                      RuntimeWarning, stacklevel=3)


def _submasks(s: int) -> Iterator[int]:
    """Non-empty submasks of ``s`` in increasing order."""
    b = 0
    while True:
        b = (b - s) & s
        if b == 0:
            return
        yield b


def _ordered_partitions(s: int) -> Iterator[list[int]]:
    if s == 0:
        yield []
        return
    for first in _submasks(s):
        for rest in _ordered_partitions(s & ~first):
            yield [first, *rest]


def enumerate_interpretations(vocab, max_atoms: int = DEFAULT_MAX_ATOMS) -> Iterator[RankedInterpretation]:
    """Yield every ranked interpretation over ``vocab`` exactly once.

    Possible-valuation sets come in binary-counter order; for each, the
    ordered partitions are generated by choosing the bottom layer among the
    submasks in increasing order and recursing on the remainder.
    """
    vocab = vocab if isinstance(vocab, Vocabulary) else Vocabulary(tuple(vocab))
    check_bound(vocab, max_atoms)
    size = vocab.size
    for possible in range(1 << size):
        for parts in _ordered_partitions(possible):
            ranks = [INF] * size
            for i, block in enumerate(parts):
                for v in range(size):
                    if block >> v & 1:
                        ranks[v] = i
            yield RankedInterpretation(vocab, tuple(ranks))


@lru_cache(maxsize=None)
def _rank_table(n_atoms: int) -> np.ndarray:
    size = 1 << n_atoms
    memo = {0: np.full((1, size), IMPOSSIBLE, dtype=np.int8)}

    def partitions(s):
        # rows: all ordered partitions of s, valuations outside s impossible
        if s in memo:
            return memo[s]
        parts = []
        for first in _submasks(s):
            sub = partitions(s & ~first).copy()
            sub[sub != IMPOSSIBLE] += 1
            sub[:, [v for v in range(size) if first >> v & 1]] = 0
            parts.append(sub)
        memo[s] = np.concatenate(parts)
        return memo[s]

    table = np.concatenate([partitions(s) for s in range(1 << size)])
    table.setflags(write=False)
    return table


def rank_table(vocab, max_atoms: int = DEFAULT_MAX_ATOMS) -> np.ndarray:
    """All rank vectors over ``vocab`` as a read-only ``(N, |U|)`` int8 array.

    Rows follow the order of :func:`enumerate_interpretations`.
    """
    vocab = vocab if isinstance(vocab, Vocabulary) else Vocabulary(tuple(vocab))
    check_bound(vocab, max_atoms)
    if len(vocab) > DEFAULT_MAX_ATOMS:
        raise VocabularyTooLarge(f"the materialized table is limited to {DEFAULT_MAX_ATOMS} atoms")
    return _rank_table(len(vocab))


def row_to_interpretation(vocab: Vocabulary, row) -> RankedInterpretation:
    return RankedInterpretation(vocab, tuple(INF if r == IMPOSSIBLE else int(r) for r in row))


def interpretations_to_table(rs) -> np.ndarray:
    rows = [[IMPOSSIBLE if r == INF else r for r in R.ranks] for R in rs]
    if not rows:
        return np.zeros((0, 0), dtype=np.int8)
    return np.array(rows, dtype=np.int8)


# ---------------------------------------------------- vectorized evaluation

@lru_cache(maxsize=None)
def _atom_columns(vocab: Vocabulary, atom: str) -> np.ndarray:
    n = len(vocab)
    shift = n - 1 - vocab.index(atom)
    return (np.arange(vocab.size) >> shift & 1).astype(bool)


def batch_extension(vocab: Vocabulary, table: np.ndarray, f: Formula, cache: dict | None = None) -> np.ndarray:
    """Boolean ``(N, |U|)`` array: ``out[i, v]`` iff ``v`` is in the extension of ``f`` in row ``i``."""
    if cache is None:
        cache = {}
    if "possible" not in cache:
        cache["possible"] = table != IMPOSSIBLE
    possible = cache["possible"]

    def ev(g):
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            out = possible & _atom_columns(vocab, g.name)
        elif isinstance(g, Top):
            out = possible
        elif isinstance(g, Bot):
            out = np.zeros_like(possible)
        elif isinstance(g, Not):
            out = possible & ~ev(g.sub)
        elif isinstance(g, Typ):
            x = ev(g.sub)
            lowest = np.where(x, table, IMPOSSIBLE).min(axis=1, keepdims=True)
            out = x & (table == lowest)
        else:
            a, b = ev(g.left), ev(g.right)
            if isinstance(g, And):
                out = a & b
            elif isinstance(g, Or):
                out = a | b
            elif isinstance(g, Implies):
                out = (possible & ~a) | b
            elif isinstance(g, Iff):
                out = possible & ~(a ^ b)
            else:
                raise TypeError(f"not a formula: {g!r}")
        cache[g] = out
        return out

    vocab.check(f)
    return ev(f)


def batch_is_model(vocab: Vocabulary, table: np.ndarray, kb, cache: dict | None = None) -> np.ndarray:
    """Boolean ``(N,)`` array marking the rows that are models of every sentence in ``kb``."""
    if cache is None:
        cache = {}
    ok = np.ones(len(table), dtype=bool)
    for f in as_kb(kb):
        ext = batch_extension(vocab, table, f, cache)
        ok &= (ext | ~cache["possible"]).all(axis=1)
    return ok


def model_rows(kb, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> tuple[Vocabulary, np.ndarray]:
    """``(vocab, rows)``: the rank table restricted to the models of ``kb``."""
    kb = as_kb(kb)
    vocab = resolve_vocab(vocab, *kb)
    table = rank_table(vocab, max_atoms)
    return vocab, table[batch_is_model(vocab, table, kb)]


def models(kb, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> Iterator[RankedInterpretation]:
    """All ranked models of ``kb``, in enumeration order (always includes the all-impossible one)."""
    kb = as_kb(kb)
    vocab = resolve_vocab(vocab, *kb)
    if len(vocab) > DEFAULT_MAX_ATOMS:
        from .semantics import is_model
        for R in enumerate_interpretations(vocab, max_atoms):
            if is_model(R, kb):
                yield R
        return
    vocab, rows = model_rows(kb, vocab, max_atoms)
    for row in rows:
        yield row_to_interpretation(vocab, row)


def counter_models(kb, f, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> list[RankedInterpretation]:
    """Models of ``kb`` that are not models of ``f``."""
    kb, f = as_kb(kb), as_formula(f)
    vocab = resolve_vocab(vocab, *kb, f)
    vocab, rows = model_rows(kb, vocab, max_atoms)
    bad = ~batch_is_model(vocab, rows, [f])
    return [row_to_interpretation(vocab, row) for row in rows[bad]]


def ranked_entails(kb, f, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    """Every ranked model of ``kb`` is a model of ``f``."""
    kb, f = as_kb(kb), as_formula(f)
    vocab = resolve_vocab(vocab, *kb, f)
    vocab, rows = model_rows(kb, vocab, max_atoms)
    return bool(batch_is_model(vocab, rows, [f]).all())


def is_satisfiable(kb, vocab=None, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    """Some model of ``kb`` has at least one possible valuation."""
    vocab, rows = model_rows(kb, vocab, max_atoms)
    return bool((rows != IMPOSSIBLE).any())
