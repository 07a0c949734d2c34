"""KLM conditionals over a finite vocabulary and checks of the KLM properties.

Propositional formulas are handled up to logical equivalence: a *canonical
formula* is the bitmask of the valuations satisfying it, so there are
``2**|U|`` of them (16 for two atoms, 256 for three).  A
:class:`ConditionalSet` is a boolean matrix ``M[a, b]`` saying whether
``a |~ b`` is in the set.

The conditional of a set of interpretations (every pair satisfied by all of
them) only depends, for each antecedent ``a``, on the union of the minimal
``a``-valuations over the set; :func:`conditional_of_rows` computes that
union from the distinct "strictly below" masks of each valuation instead of
looping over every interpretation and antecedent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .enumeration import IMPOSSIBLE, interpretations_to_table, rank_table, row_to_interpretation
from .errors import NotPropositional, VocabularyMismatch, VocabularyTooLarge
from .semantics import INF, RankedInterpretation, Vocabulary, mask_to_set
from .syntax import (Atom, Formula, Implies, Not, Typ, BOT, TOP, as_formula, conjoin, disjoin,
                     is_propositional, render)

__all__ = [
    "canonical", "canonical_formula", "canonical_domain", "ConditionalSet", "embed",
    "conditional_of_rows", "conditional_from_interpretation", "induced_conditional",
    "PropertyResult", "KlmReport", "check_klm_properties", "KLM_PROPERTIES",
    "reconstruct_interpretation", "find_generating_interpretation", "random_conditional_sets",
]

KLM_PROPERTIES = ("Ref", "LLE", "And", "Or", "RW", "CM", "RM")
MAX_CANONICAL_ATOMS = 3


def _check_size(vocab: Vocabulary):
    if len(vocab) > MAX_CANONICAL_ATOMS:
        raise VocabularyTooLarge(
            f"canonical formulas are limited to {MAX_CANONICAL_ATOMS} atoms, got {len(vocab)}")


def canonical(f, vocab: Vocabulary) -> int:
    """Bitmask of the valuations satisfying the propositional formula ``f``."""
    from .semantics import extension_mask
    f = as_formula(f)
    if not is_propositional(f):
        raise NotPropositional(f"{render(f, minimal=True)} contains typicality")
    return extension_mask(RankedInterpretation.all_zero(vocab), f)


def canonical_formula(mask: int, vocab: Vocabulary) -> Formula:
    """A readable propositional formula whose canonical form is ``mask``."""
    if mask == 0:
        return BOT
    if mask == vocab.full_mask:
        return TOP
    for a in vocab.atoms:
        if mask == vocab.atom_mask(a):
            return Atom(a)
        if mask == vocab.full_mask & ~vocab.atom_mask(a):
            return Not(Atom(a))
    terms = []
    for v in sorted(mask_to_set(mask)):
        terms.append(conjoin(Atom(a) if vocab.value(v, a) else Not(Atom(a)) for a in vocab.atoms))
    return disjoin(terms)


def canonical_domain(vocab: Vocabulary) -> list[int]:
    """All canonical formulas: T, F, the literals in vocabulary order, then the rest ascending."""
    _check_size(vocab)
    head = [vocab.full_mask, 0]
    for a in vocab.atoms:
        head += [vocab.atom_mask(a), vocab.full_mask & ~vocab.atom_mask(a)]
    seen = set()
    order = []
    for m in head + list(range(1 << vocab.size)):
        if m not in seen:
            seen.add(m)
            order.append(m)
    return order


def embed(pair) -> Formula:
    """``(a, b)`` to the typicality sentence ``*a -> b``."""
    a, b = (as_formula(x) for x in pair)
    for g in (a, b):
        if not is_propositional(g):
            raise NotPropositional(f"{render(g, minimal=True)} contains typicality")
    return Implies(Typ(a), b)


@dataclass(frozen=True, eq=False)
class ConditionalSet:
    """Set of pairs of canonical formulas, stored as a boolean matrix."""

    vocab: Vocabulary
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = 1 << self.vocab.size
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix must be {n}x{n}")

    def __eq__(self, other):
        if not isinstance(other, ConditionalSet):
            return NotImplemented
        return self.vocab == other.vocab and bool((self.matrix == other.matrix).all())

    def __hash__(self):
        return hash((self.vocab, self.matrix.tobytes()))

    def __len__(self):
        return int(self.matrix.sum())

    def _mask(self, x) -> int:
        return x if isinstance(x, int) else canonical(x, self.vocab)

    def contains(self, alpha, beta) -> bool:
        return bool(self.matrix[self._mask(alpha), self._mask(beta)])

    def __contains__(self, pair):
        return self.contains(*pair)

    def pairs(self) -> Iterable[tuple[int, int]]:
        for a, b in zip(*np.nonzero(self.matrix)):
            yield int(a), int(b)

    def __and__(self, other: "ConditionalSet") -> "ConditionalSet":
        if self.vocab != other.vocab:
            raise VocabularyMismatch("conditional sets over different vocabularies")
        return ConditionalSet(self.vocab, self.matrix & other.matrix)

    def __or__(self, other: "ConditionalSet") -> "ConditionalSet":
        if self.vocab != other.vocab:
            raise VocabularyMismatch("conditional sets over different vocabularies")
        return ConditionalSet(self.vocab, self.matrix | other.matrix)

    @classmethod
    def from_pairs(cls, vocab: Vocabulary, pairs) -> "ConditionalSet":
        n = 1 << vocab.size
        m = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            a = a if isinstance(a, int) else canonical(a, vocab)
            b = b if isinstance(b, int) else canonical(b, vocab)
            m[a, b] = True
        return cls(vocab, m)


def _min_union(vocab: Vocabulary, rows: np.ndarray) -> np.ndarray:
    """For each canonical antecedent, the union over ``rows`` of its minimal valuations (as masks)."""
    size = vocab.size
    n_forms = 1 << size
    forms = np.arange(n_forms, dtype=np.int64)
    out = np.zeros(n_forms, dtype=np.int64)
    if len(rows) == 0:
        return out
    r = rows.astype(np.int16)
    for v in range(size):
        live = r[:, v] != IMPOSSIBLE
        if not live.any():
            continue
        below = np.zeros(int(live.sum()), dtype=np.int64)
        rv = r[live, v]
        for w in range(size):
            below |= (r[live, w] < rv).astype(np.int64) << w
        distinct = np.unique(below)
        # v is minimal for a in some row iff v in a and a misses everything below v there
        hit = ((forms[:, None] & distinct[None, :]) == 0).any(axis=1) & (forms >> v & 1).astype(bool)
        out[hit] |= 1 << v
    return out


def conditional_of_rows(vocab: Vocabulary, rows: np.ndarray) -> ConditionalSet:
    """Pairs ``(a, b)`` satisfied by every interpretation in the rank table ``rows``."""
    _check_size(vocab)
    lowest = _min_union(vocab, rows)
    forms = np.arange(1 << vocab.size, dtype=np.int64)
    return ConditionalSet(vocab, (lowest[:, None] & ~forms[None, :]) == 0)


def conditional_from_interpretation(R: RankedInterpretation) -> ConditionalSet:
    """The conditional ``{(a, b) : min a ⊆ b in R}``."""
    return conditional_of_rows(R.vocab, interpretations_to_table([R]))


def induced_conditional(theory_membership: Callable[[Formula], bool], vocab: Vocabulary) -> ConditionalSet:
    """Pairs ``(a, b)`` whose embedding ``*a -> b`` the predicate accepts.

    Makes one call per pair of canonical formulas; for theories given by a set
    of models :func:`conditional_of_rows` is much faster.
    """
    _check_size(vocab)
    n = 1 << vocab.size
    forms = [canonical_formula(m, vocab) for m in range(n)]
    m = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            m[a, b] = bool(theory_membership(Implies(Typ(forms[a]), forms[b])))
    return ConditionalSet(vocab, m)


# ----------------------------------------------------------- KLM checks

@dataclass(frozen=True)
class PropertyResult:
    property: str
    status: str  # "pass" or "fail"
    witness: tuple | None = None  # canonical masks (alpha, beta, gamma), as many as the rule uses

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self, vocab: Vocabulary) -> dict:
        out = {"property": self.property, "status": self.status}
        if self.witness is not None:
            names = ("alpha", "beta", "gamma")
            out["witness"] = {
                names[i]: [vocab.literals(v) for v in sorted(mask_to_set(m))]
                for i, m in enumerate(self.witness)
            }
        return out


@dataclass(frozen=True)
class KlmReport:
    vocab: Vocabulary
    results: tuple

    def __getitem__(self, name) -> PropertyResult:
        for r in self.results:
            if r.property == name:
                return r
        raise KeyError(name)

    @property
    def preferential(self) -> bool:
        return all(r.passed for r in self.results if r.property != "RM")

    @property
    def rational(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[PropertyResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> list:
        return [r.to_json(self.vocab) for r in self.results]

    def describe(self) -> str:
        lines = []
        for r in self.results:
            line = f"{r.property:4} {r.status}"
            if r.witness is not None:
                line += "  " + ", ".join(
                    f"{n}={canonical_formula(m, self.vocab)}"
                    for n, m in zip(("alpha", "beta", "gamma"), r.witness))
            lines.append(line)
        return "\n".join(lines)


def _first(bad: np.ndarray):
    """Row-major index tuple of the first True entry, or None."""
    flat = np.flatnonzero(bad.ravel())
    if len(flat) == 0:
        return None
    return np.unravel_index(flat[0], bad.shape)


def check_klm_properties(c: ConditionalSet, vocab: Vocabulary | None = None, domain=None) -> KlmReport:
    """Check Ref, LLE, And, Or, RW, CM and RM on ``c``.

    The rules quantify over ``domain`` (canonical masks or propositional
    formulas; default :func:`canonical_domain`), while the formulas they
    derive (conjunctions, disjunctions, negations) range over all canonical
    formulas.  The witness reported for a failed rule is the first violating
    tuple in domain order.  LLE holds by construction since equivalent
    formulas share one canonical form.
    """
    vocab = vocab or c.vocab
    if vocab != c.vocab:
        raise VocabularyMismatch("conditional set and vocabulary differ")
    _check_size(vocab)
    full = vocab.full_mask
    if domain is None:
        D = np.array(canonical_domain(vocab), dtype=np.int64)
    else:
        D = np.array([d if isinstance(d, (int, np.integer)) else canonical(d, vocab) for d in domain],
                     dtype=np.int64)
    M = c.matrix
    MD = M[np.ix_(D, D)]  # MD[i, j] = M[D[i], D[j]]
    AND = D[:, None] & D[None, :]
    results = []

    ref_bad = ~M[D, D]
    w = _first(ref_bad)
    results.append(PropertyResult("Ref", "pass") if w is None
                   else PropertyResult("Ref", "fail", (int(D[w[0]]),)))
    results.append(PropertyResult("LLE", "pass"))

    checks = {"And": None, "Or": None, "RW": None, "CM": None, "RM": None}
    subset = (D[:, None] & ~D[None, :] & full) == 0  # subset[j, k]: D[j] entails D[k]
    for i, a in enumerate(D):
        row = MD[i]  # a |~ D[j]
        pairs = row[:, None] & row[None, :]
        tests = {
            "And": pairs & ~M[a, AND],
            "Or": row[None, :] & MD & ~M[(a | D)[:, None], D[None, :]],
            "RW": row[:, None] & subset & ~row[None, :],
            "CM": pairs & ~M[(a & D)[:, None], D[None, :]],
            "RM": ~M[a, full & ~D][:, None] & row[None, :] & ~M[(a & D)[:, None], D[None, :]],
        }
        for name, bad in tests.items():
            if checks[name] is None:
                w = _first(bad)
                if w is not None:
                    checks[name] = (int(a), int(D[w[0]]), int(D[w[1]]))
        if all(v is not None for v in checks.values()):
            break
    for name in ("And", "Or", "RW", "CM", "RM"):
        wit = checks[name]
        results.append(PropertyResult(name, "pass") if wit is None else PropertyResult(name, "fail", wit))
    order = {p: k for k, p in enumerate(KLM_PROPERTIES)}
    return KlmReport(vocab, tuple(sorted(results, key=lambda r: order[r.property])))


# ------------------------------------------- from conditionals back to models

def reconstruct_interpretation(c: ConditionalSet) -> RankedInterpretation | None:
    """The interpretation generating ``c``, or None if there is none.

    A valuation ``v`` is possible iff ``{v} |~ F`` is absent; the minimal
    valuations of a set ``a`` are the ``v`` in ``a`` with ``a |~ !v`` absent.
    Peeling minimal sets off the possible valuations gives the only candidate,
    which is then checked.
    """
    vocab = c.vocab
    full = vocab.full_mask
    M = c.matrix
    possible = [v for v in vocab.valuations() if not M[1 << v, 0]]
    remaining = sum(1 << v for v in possible)
    ranks = [INF] * vocab.size
    level = 0
    while remaining:
        lowest = [v for v in mask_to_set(remaining) if not M[remaining, full & ~(1 << v)]]
        if not lowest:
            return None
        for v in lowest:
            ranks[v] = level
            remaining &= ~(1 << v)
        level += 1
    R = RankedInterpretation(vocab, tuple(ranks))
    return R if conditional_from_interpretation(R) == c else None


@lru_cache(maxsize=None)
def _all_matrices(vocab: Vocabulary) -> np.ndarray:
    """Conditional matrices of every interpretation, in enumeration order (small vocabularies)."""
    table = rank_table(vocab)
    forms = np.arange(1 << vocab.size, dtype=np.int64)
    lowest = np.stack([_min_union(vocab, table[k:k + 1]) for k in range(len(table))])
    return (lowest[:, :, None] & ~forms[None, None, :]) == 0


def find_generating_interpretation(c: ConditionalSet) -> RankedInterpretation | None:
    """Exhaustive search over all interpretations for one whose conditional is ``c``."""
    vocab = c.vocab
    table = rank_table(vocab)
    if len(vocab) <= 2:
        hit = np.flatnonzero((_all_matrices(vocab) == c.matrix[None]).all(axis=(1, 2)))
        return row_to_interpretation(vocab, table[hit[0]]) if len(hit) else None
    for row in table:
        if conditional_of_rows(vocab, row[None]) == c:
            return row_to_interpretation(vocab, row)
    return None


def random_conditional_sets(vocab: Vocabulary, n: int, seed: int = 0):
    """Yield ``n`` conditional sets of mixed provenance for property testing.

    Kinds cycle through: the conditional of a random interpretation, the
    intersection or union of two such, and a random perturbation of one.
    """
    rng = random.Random(seed)
    table = rank_table(vocab)
    n_forms = 1 << vocab.size

    def some():
        return conditional_of_rows(vocab, table[rng.randrange(len(table))][None])

    for k in range(n):
        kind = k % 4
        if kind == 0:
            yield some()
        elif kind == 1:
            yield some() & some()
        elif kind == 2:
            yield some() | some()
        else:
            c = some().matrix.copy()
            for _ in range(rng.randint(1, 3)):
                a, b = rng.randrange(n_forms), rng.randrange(n_forms)
                c[a, b] = ~c[a, b]
            yield ConditionalSet(vocab, c)
