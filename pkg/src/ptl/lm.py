"""The LM-minimal model of a knowledge base and everything built on it.

:func:`lm_minimal` starts from the interpretation where every valuation has
rank 0 and repeatedly pushes the valuations that violate the KB one layer up,
until the set of satisfying valuations stops growing; the violators of the
last round become impossible.  The result is the unique model of the KB that
is minimal for the layer-prefix order :func:`lm_preferred`, and for
conditional KBs it is the rational closure model.

Each run checks the invariants that make the construction correct (monotone
satisfying sets, the rank-gap property, convexity of each step, and that
cutting each step down to its satisfying set yields a model).  Set
:data:`CHECK_GLOBAL_MINIMALITY` to also compare the result against every
enumerated model, which is what the test suite does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .enumeration import DEFAULT_MAX_ATOMS, IMPOSSIBLE, batch_is_model, rank_table
from .errors import ConvexityViolation, EmptyInput, InvariantViolation, NotConditionalKB
from .semantics import (INF, RankedInterpretation, Vocabulary, _same_vocab, extension_mask,
                        mask_to_set, resolve_vocab, set_to_mask, is_model)
from .syntax import as_formula, as_kb, is_conditional, render

__all__ = [
    "LmStep", "LmTrace", "bump_outside", "make_impossible_outside", "lm_minimal",
    "lm_preferred", "lm_strictly_preferred", "lm_preferred_rows", "ranked_union", "ranked_union_rows",
    "rational_closure_model", "rational_closure_oracle", "lm_entails", "check_lm_minimum",
    "CHECK_GLOBAL_MINIMALITY", "global_checks_run",
]

# when true, every lm_minimal run is also checked against all enumerated models
CHECK_GLOBAL_MINIMALITY = False
_global_checks = 0


def global_checks_run() -> int:
    """How many lm_minimal results have been checked against the enumeration so far."""
    return _global_checks


def _mask(S) -> int:
    return S if isinstance(S, int) else set_to_mask(S)


def bump_outside(R: RankedInterpretation, S) -> RankedInterpretation:
    """Raise every finite rank outside ``S`` by one.  Not necessarily convex."""
    S = _mask(S)
    ranks = tuple(r if (S >> v & 1 or r == INF) else r + 1 for v, r in enumerate(R.ranks))
    return RankedInterpretation.unchecked(R.vocab, ranks)


def make_impossible_outside(R: RankedInterpretation, S) -> RankedInterpretation:
    """Make every valuation outside ``S`` impossible; raises ConvexityViolation if a gap opens."""
    S = _mask(S)
    ranks = tuple(r if S >> v & 1 else INF for v, r in enumerate(R.ranks))
    return RankedInterpretation(R.vocab, ranks)


@dataclass(frozen=True)
class LmStep:
    """Round ``iteration`` of the construction: ``R_i`` and the valuations satisfying the KB in it."""

    iteration: int
    interpretation: RankedInterpretation
    satisfying: frozenset

    def to_json(self) -> dict:
        lit = self.interpretation.vocab.literals
        data = self.interpretation.to_json()
        return {
            "iteration": self.iteration,
            "layers": data["layers"],
            "impossible": data["impossible"],
            "satisfying_set": [lit(v) for v in sorted(self.satisfying)],
        }


@dataclass
class LmTrace:
    """Rounds of :func:`lm_minimal`; ``steps[i].satisfying`` is the set S(i+1)."""

    steps: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def satisfying_sets(self) -> list[frozenset]:
        """``[S1, S2, ...]``."""
        return [s.satisfying for s in self.steps]

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]


def _satisfying(R: RankedInterpretation, kb) -> int:
    """Mask of the possible valuations satisfying every sentence of ``kb`` in ``R``."""
    out = R.possible_mask
    for f in kb:
        out &= extension_mask(R, f)
    return out


def _check_rank_gap(R: RankedInterpretation, sat: int, i: int):
    finite = [r for r in R.ranks if r != INF]
    if not finite:
        return
    top = max(finite)
    for v, r in enumerate(R.ranks):
        if r < top and not sat >> v & 1:
            raise InvariantViolation(
                f"round {i}: valuation {R.vocab.format_valuation(v)} sits below another "
                f"valuation but does not satisfy the KB")


def lm_minimal(kb, vocab=None) -> tuple[RankedInterpretation, LmTrace]:
    """Compute the LM-minimal model of ``kb`` together with the trace of rounds.

    ``vocab`` defaults to the atoms of ``kb``.  An unsatisfiable KB yields the
    interpretation in which every valuation is impossible.
    """
    kb = as_kb(kb)
    vocab = resolve_vocab(vocab, *kb)
    trace = LmTrace()

    R = RankedInterpretation.all_zero(vocab)
    prev = 0  # S0 is empty
    cur = _satisfying(R, kb)
    trace.steps.append(LmStep(0, R, mask_to_set(cur)))
    i = 1
    while cur != prev:
        if prev & ~cur:
            raise InvariantViolation(f"round {i}: satisfying set shrank")
        nxt_R = bump_outside(R, cur)
        if not nxt_R.is_convex:
            raise InvariantViolation(f"round {i}: interpretation {nxt_R.ranks} is not convex")
        try:
            cut = make_impossible_outside(nxt_R, cur)
        except ConvexityViolation as exc:
            raise InvariantViolation(f"round {i}: cutting to the satisfying set broke convexity") from exc
        if not is_model(cut, kb):
            raise InvariantViolation(f"round {i}: cut interpretation is not a model")
        R = nxt_R
        prev, cur = cur, _satisfying(R, kb)
        _check_rank_gap(R, cur, i)
        trace.steps.append(LmStep(i, R, mask_to_set(cur)))
        i += 1
    result = make_impossible_outside(R, cur)
    if not is_model(result, kb):
        raise InvariantViolation("result is not a model of the KB")
    if CHECK_GLOBAL_MINIMALITY and len(vocab) <= DEFAULT_MAX_ATOMS:
        check_lm_minimum(kb, vocab, result)
    return result, trace


# ------------------------------------------------------------ preference

def lm_preferred(R1: RankedInterpretation, R2: RankedInterpretation) -> bool:
    """``R1`` is LM-below-or-equal ``R2``: at the first finite layer where they differ,
    ``R1``'s layer contains ``R2``'s."""
    _same_vocab(R1, R2)
    L, M = R1.layer_masks(), R2.layer_masks()
    n = max(len(L), len(M))
    L += [0] * (n - len(L))
    M += [0] * (n - len(M))
    for a, b in zip(L, M):
        if a != b:
            return b & ~a == 0
    return True


def lm_strictly_preferred(R1: RankedInterpretation, R2: RankedInterpretation) -> bool:
    return lm_preferred(R1, R2) and not lm_preferred(R2, R1)


def lm_preferred_rows(R: RankedInterpretation, rows: np.ndarray) -> np.ndarray:
    """Vectorized :func:`lm_preferred` of ``R`` against every row of a rank table."""
    ranks = np.array([IMPOSSIBLE if r == INF else r for r in R.ranks], dtype=np.int8)
    ok = np.ones(len(rows), dtype=bool)
    decided = np.zeros(len(rows), dtype=bool)
    for j in range(R.vocab.size):
        Lj = ranks == j
        Mj = rows == j
        differ = (Mj != Lj).any(axis=1)
        first = differ & ~decided
        ok[first] = ~(Mj[first] & ~Lj).any(axis=1)
        decided |= differ
    return ok


def ranked_union(rs) -> RankedInterpretation:
    """Rank each valuation by its least rank over ``rs``, closing up gaps.

    Valuations impossible in every member stay impossible.
    """
    rs = list(rs)
    if not rs:
        raise EmptyInput("ranked union of an empty set")
    vocab = _same_vocab(*rs)
    lowest = [min(R.ranks[v] for R in rs) for v in vocab.valuations()]
    levels = sorted({r for r in lowest if r != INF})
    where = {r: k for k, r in enumerate(levels)}
    return RankedInterpretation(vocab, tuple(INF if r == INF else where[r] for r in lowest))


def ranked_union_rows(rows: np.ndarray) -> np.ndarray:
    """:func:`ranked_union` of the rows of a rank table, as a single rank row."""
    if len(rows) == 0:
        raise EmptyInput("ranked union of an empty set")
    lowest = rows.min(axis=0)
    levels = np.unique(lowest[lowest != IMPOSSIBLE])
    out = np.full(rows.shape[1], IMPOSSIBLE, dtype=np.int8)
    finite = lowest != IMPOSSIBLE
    out[finite] = np.searchsorted(levels, lowest[finite])
    return out


# ------------------------------------------------------ rational closure

def _require_conditional(kb):
    for f in kb:
        if not is_conditional(f):
            raise NotConditionalKB(f"{render(f, minimal=True)} is not of the form *a -> b")


def rational_closure_model(kb, vocab=None) -> RankedInterpretation:
    """LM-minimal model of a conditional KB (its rational closure model)."""
    kb = as_kb(kb)
    _require_conditional(kb)
    return lm_minimal(kb, vocab)[0]


def rational_closure_oracle(kb, vocab=None) -> RankedInterpretation:
    """Independent route: ranked union of all enumerated models of a conditional KB."""
    from .enumeration import models
    kb = as_kb(kb)
    _require_conditional(kb)
    return ranked_union(models(kb, resolve_vocab(vocab, *kb)))


def lm_entails(kb, f, vocab=None) -> bool:
    """``f`` holds in the LM-minimal model of ``kb``; ``vocab`` defaults to the atoms of both."""
    kb, f = as_kb(kb), as_formula(f)
    vocab = resolve_vocab(vocab, *kb, f)
    return is_model(lm_minimal(kb, vocab)[0], [f])


def check_lm_minimum(kb, vocab: Vocabulary, R: RankedInterpretation | None = None) -> int:
    """Compare ``R`` (default: the LM-minimal model) with every enumerated model of ``kb``.

    Checks that ``R`` is LM-below each model and the layer-inclusion property
    (while the layers agree up to ``i``, each model's layer ``i`` is inside
    ``R``'s).  Raises :class:`InvariantViolation`; returns the number of models compared.
    """
    global _global_checks
    kb = as_kb(kb)
    vocab = resolve_vocab(vocab, *kb)
    if R is None:
        R = lm_minimal(kb, vocab)[0]
    table = rank_table(vocab)
    rows = table[batch_is_model(vocab, table, kb)]
    if not lm_preferred_rows(R, rows).all():
        raise InvariantViolation("some model is strictly LM-below the computed minimum")
    ranks = np.array([IMPOSSIBLE if r == INF else r for r in R.ranks], dtype=np.int8)
    agree = np.ones(len(rows), dtype=bool)
    for i in range(R.height):
        Li = ranks == i
        Mi = rows == i
        if ((Mi & ~Li).any(axis=1) & agree).any():
            raise InvariantViolation(f"layer inclusion fails at layer {i}")
        agree &= ~(Mi != Li).any(axis=1)
    _global_checks += 1
    return len(rows)
