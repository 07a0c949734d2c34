"""Valuations, ranked interpretations and satisfaction of typicality formulas.

A valuation over a vocabulary ``(a1, ..., an)`` is an integer in
``range(2**n)`` read in binary, ``a1`` being the most significant bit.  So
over ``f, p, r`` the valuation ``{!f, !p, !r}`` is 0 and ``{f, !p, !r}`` is 4.

Ranks are non-negative ints or :data:`INF` (``math.inf``).  Internally sets
of valuations are handled as Python int bitmasks; the public API returns
frozensets.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ConvexityViolation, EmptyInput, UnknownAtom, VocabularyMismatch
from .syntax import And, Atom, Bot, Formula, Iff, Implies, Not, Or, Top, Typ, atoms

__all__ = [
    "INF", "Vocabulary", "RankedInterpretation", "EntailmentMode",
    "extension", "minimal", "is_model", "satisfies_conditional", "layers",
    "mask_to_set", "set_to_mask", "resolve_vocab",
]

INF = math.inf


class EntailmentMode(enum.Enum):
    RANKED = "ranked"
    LM = "lm"
    PT = "pt"
    PTPRIME = "ptp"

    @classmethod
    def parse(cls, name) -> "EntailmentMode":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("'", "p").replace("′", "p")
        aliases = {"ranked": cls.RANKED, "cn0": cls.RANKED, "lm": cls.LM, "pt": cls.PT,
                   "ptp": cls.PTPRIME, "ptprime": cls.PTPRIME}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown entailment mode {name!r}") from None

    @property
    def label(self) -> str:
        return {"ranked": "ranked", "lm": "LM", "pt": "PT", "ptp": "PT'"}[self.value]


def mask_to_set(mask: int) -> frozenset:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def set_to_mask(vals: Iterable[int]) -> int:
    m = 0
    for v in vals:
        m |= 1 << v
    return m


_LIT_RE = re.compile(r"\s*(!|¬|~)?\s*([a-z][a-z0-9_]*)\s*")


@dataclass(frozen=True)
class Vocabulary:
    """Ordered tuple of distinct atom names."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError(f"duplicate atoms in vocabulary {self.atoms}")
        for a in self.atoms:
            Atom(a)  # validates the name

    @classmethod
    def of(cls, *atoms_or_formulas) -> "Vocabulary":
        """Sorted vocabulary of the given atom names and/or formulas' atoms."""
        names = set()
        for x in atoms_or_formulas:
            if isinstance(x, str):
                names.add(x)
            elif isinstance(x, Formula):
                names |= atoms(x)
            else:
                for y in x:
                    names |= {y} if isinstance(y, str) else atoms(y)
        return cls(tuple(sorted(names)))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    @property
    def size(self) -> int:
        """Number of valuations, ``|U|``."""
        return 1 << len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def valuations(self) -> range:
        return range(self.size)

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise UnknownAtom(atom, self.atoms) from None

    def value(self, v: int, atom: str) -> bool:
        return bool(v >> (len(self.atoms) - 1 - self.index(atom)) & 1)

    def atom_mask(self, atom: str) -> int:
        """Bitmask of the valuations where ``atom`` is true."""
        return _atom_mask(self, atom)

    def check(self, f: Formula) -> None:
        missing = atoms(f) - set(self.atoms)
        if missing:
            raise UnknownAtom(sorted(missing)[0], self.atoms)

    def literals(self, v: int, negation: str = "!") -> list[str]:
        n = len(self.atoms)
        return [a if v >> (n - 1 - i) & 1 else negation + a for i, a in enumerate(self.atoms)]

    def format_valuation(self, v: int, style: str = "set", unicode: bool = False) -> str:
        """``{b, !f, p}`` (set style) or ``b!fp`` (compact style)."""
        lits = self.literals(v, "¬" if unicode else "!")
        if style == "compact":
            return "".join(lits)
        return "{" + ", ".join(lits) + "}"

    def parse_valuation(self, text) -> int:
        """Parse ``"b, !f, p"``, ``"{b, ¬f, p}"`` or a literal list to an index.

        Atoms not mentioned are false.
        """
        if isinstance(text, str):
            body = text.strip().strip("{}[]")
            parts = [x for x in body.split(",") if x.strip()]
        else:
            parts = list(text)
        n = len(self.atoms)
        v = 0
        seen = set()
        for part in parts:
            m = _LIT_RE.fullmatch(part)
            if not m:
                raise ValueError(f"bad literal {part!r}")
            neg, name = m.groups()
            i = self.index(name)
            if name in seen:
                raise ValueError(f"atom {name!r} mentioned twice")
            seen.add(name)
            if not neg:
                v |= 1 << (n - 1 - i)
        return v


@lru_cache(maxsize=None)
def _atom_mask(vocab: Vocabulary, atom: str) -> int:
    shift = len(vocab.atoms) - 1 - vocab.index(atom)
    return set_to_mask(v for v in range(vocab.size) if v >> shift & 1)


def _check_rank(r):
    if r == INF:
        return INF
    if isinstance(r, bool) or not isinstance(r, int) or r < 0:
        raise ValueError(f"rank must be a natural number or INF, got {r!r}")
    return r


@dataclass(frozen=True)
class RankedInterpretation:
    """A convex rank function over all valuations of a vocabulary.

    ``ranks[v]`` is the rank of valuation ``v``; :data:`INF` marks an
    impossible valuation.  Two interpretations are equal iff they have the
    same vocabulary and the same rank function.
    """

    vocab: Vocabulary
    ranks: tuple

    def __post_init__(self):
        ranks = tuple(_check_rank(r) for r in self.ranks)
        if len(ranks) != self.vocab.size:
            raise ValueError(f"expected {self.vocab.size} ranks, got {len(ranks)}")
        object.__setattr__(self, "ranks", ranks)
        if not _convex(ranks):
            raise ConvexityViolation(f"rank function {ranks} is not convex")

    @classmethod
    def unchecked(cls, vocab: Vocabulary, ranks) -> "RankedInterpretation":
        """Build without the convexity check (intermediate values only)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "vocab", vocab)
        object.__setattr__(obj, "ranks", tuple(ranks))
        return obj

    @classmethod
    def from_ranks(cls, vocab: Vocabulary, ranks: Sequence) -> "RankedInterpretation":
        return cls(vocab, tuple(ranks))

    @classmethod
    def from_layers(cls, vocab: Vocabulary, layers: Sequence[Iterable], impossible=None):
        """Layer ``i`` lists the valuations of rank ``i``; anything unlisted is impossible.

        Valuations may be ints or anything :meth:`Vocabulary.parse_valuation` accepts.
        """
        ranks = [INF] * vocab.size
        seen = set()
        for i, layer in enumerate(layers):
            for v in layer:
                v = v if isinstance(v, int) else vocab.parse_valuation(v)
                if v in seen:
                    raise ValueError(f"valuation {vocab.format_valuation(v)} listed twice")
                seen.add(v)
                ranks[v] = i
        for v in impossible or ():
            v = v if isinstance(v, int) else vocab.parse_valuation(v)
            if v in seen:
                raise ValueError(f"valuation {vocab.format_valuation(v)} listed twice")
        return cls(vocab, tuple(ranks))

    @classmethod
    def all_zero(cls, vocab: Vocabulary) -> "RankedInterpretation":
        return cls(vocab, (0,) * vocab.size)

    @classmethod
    def all_impossible(cls, vocab: Vocabulary) -> "RankedInterpretation":
        return cls(vocab, (INF,) * vocab.size)

    @property
    def is_convex(self) -> bool:
        return _convex(self.ranks)

    def rank(self, v) -> float:
        v = v if isinstance(v, int) else self.vocab.parse_valuation(v)
        return self.ranks[v]

    @property
    def possible_mask(self) -> int:
        return set_to_mask(v for v, r in enumerate(self.ranks) if r != INF)

    @property
    def possible(self) -> frozenset:
        return frozenset(v for v, r in enumerate(self.ranks) if r != INF)

    @property
    def impossible(self) -> frozenset:
        return frozenset(v for v, r in enumerate(self.ranks) if r == INF)

    @property
    def height(self) -> int:
        """Number of finite layers."""
        finite = [r for r in self.ranks if r != INF]
        return max(finite) + 1 if finite else 0

    @property
    def layers(self) -> list[frozenset]:
        """Finite layers ``L0 .. Ln-1`` (empty layers can only occur when unchecked)."""
        out = [set() for _ in range(self.height)]
        for v, r in enumerate(self.ranks):
            if r != INF:
                out[r].add(v)
        return [frozenset(x) for x in out]

    def layer_masks(self) -> list[int]:
        out = [0] * self.height
        for v, r in enumerate(self.ranks):
            if r != INF:
                out[r] |= 1 << v
        return out

    def to_json(self) -> dict:
        lit = self.vocab.literals
        return {
            "vocab": list(self.vocab.atoms),
            "layers": [[lit(v) for v in sorted(layer)] for layer in self.layers],
            "impossible": [lit(v) for v in sorted(self.impossible)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RankedInterpretation":
        vocab = Vocabulary(tuple(data["vocab"]))
        return cls.from_layers(vocab, data["layers"], data.get("impossible", ()))

    def table(self, unicode: bool = False, style: str = "set") -> str:
        """Layer table, highest rank first, the ``inf`` row only when non-empty."""
        fmt = lambda vs: ", ".join(self.vocab.format_valuation(v, style, unicode) for v in sorted(vs))
        rows = []
        if self.impossible:
            rows.append(("∞" if unicode else "inf", fmt(self.impossible)))
        for i in reversed(range(self.height)):
            rows.append((str(i), fmt(self.layers[i])))
        if not rows:
            return "(empty)"
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{k.rjust(width)} | {body}" for k, body in rows)

    def __str__(self):
        return self.table()


def _convex(ranks) -> bool:
    finite = {r for r in ranks if r != INF}
    return not finite or finite == set(range(max(finite) + 1))


def _same_vocab(*rs: RankedInterpretation):
    v = rs[0].vocab
    for r in rs[1:]:
        if r.vocab != v:
            raise VocabularyMismatch(f"vocabularies differ: {v.atoms} vs {r.vocab.atoms}")
    return v


# ---------------------------------------------------------- satisfaction

def _min_mask(R: RankedInterpretation, mask: int) -> int:
    """The lowest-ranked valuations among ``mask`` (assumed possible)."""
    best = INF
    out = 0
    ranks = R.ranks
    v = 0
    m = mask
    while m:
        if m & 1:
            r = ranks[v]
            if r < best:
                best, out = r, 1 << v
            elif r == best:
                out |= 1 << v
        m >>= 1
        v += 1
    return out


def _ext(R: RankedInterpretation, f: Formula, possible: int, cache: dict) -> int:
    hit = cache.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = R.vocab.atom_mask(f.name) & possible
    elif isinstance(f, Top):
        out = possible
    elif isinstance(f, Bot):
        out = 0
    elif isinstance(f, Not):
        out = possible & ~_ext(R, f.sub, possible, cache)
    elif isinstance(f, Typ):
        out = _min_mask(R, _ext(R, f.sub, possible, cache))
    else:
        a = _ext(R, f.left, possible, cache)
        b = _ext(R, f.right, possible, cache)
        if isinstance(f, And):
            out = a & b
        elif isinstance(f, Or):
            out = a | b
        elif isinstance(f, Implies):
            out = (possible & ~a) | b
        elif isinstance(f, Iff):
            out = possible & ~(a ^ b)
        else:
            raise TypeError(f"not a formula: {f!r}")
    cache[f] = out
    return out


def extension_mask(R: RankedInterpretation, f: Formula) -> int:
    R.vocab.check(f)
    return _ext(R, f, R.possible_mask, {})


def extension(R: RankedInterpretation, f: Formula) -> frozenset:
    """The possible valuations of ``R`` that satisfy ``f``."""
    return mask_to_set(extension_mask(R, f))


def minimal(R: RankedInterpretation, f: Formula) -> frozenset:
    """The lowest-ranked valuations satisfying ``f``, i.e. the extension of ``*f``."""
    return extension(R, Typ(f))


def is_model(R: RankedInterpretation, kb) -> bool:
    """Every sentence of ``kb`` holds at every possible valuation of ``R``."""
    if isinstance(kb, Formula):
        kb = [kb]
    kb = list(kb)
    for f in kb:
        R.vocab.check(f)
    possible = R.possible_mask
    cache: dict = {}
    return all(_ext(R, f, possible, cache) == possible for f in kb)


def satisfies_conditional(R: RankedInterpretation, antecedent: Formula, consequent: Formula) -> bool:
    """``R`` satisfies ``antecedent |~ consequent``."""
    R.vocab.check(antecedent)
    R.vocab.check(consequent)
    possible = R.possible_mask
    cache: dict = {}
    lowest = _min_mask(R, _ext(R, antecedent, possible, cache))
    return lowest & ~_ext(R, consequent, possible, cache) == 0


def layers(R: RankedInterpretation) -> tuple[list[frozenset], frozenset]:
    """``([L0, ..., Ln-1], L_inf)``."""
    return R.layers, R.impossible


def resolve_vocab(vocab, *formulas: Formula) -> Vocabulary:
    """An explicit vocabulary (checked to cover ``formulas``) or their sorted atoms."""
    if vocab is None:
        vocab = Vocabulary.of(formulas)
        if not len(vocab):
            raise EmptyInput("no atoms occur in the input; give an explicit vocabulary")
        return vocab
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary(tuple(vocab))
    for f in formulas:
        vocab.check(f)
    return vocab
