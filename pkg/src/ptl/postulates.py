"""Instance checkers for the postulates P1-P10 (plus P5' and P9').

Every postulate quantifies over all knowledge bases and formulas; here it is
checked on given knowledge bases against a finite *query domain*:

* propositional formulas of the domain (by default every canonical formula),
* the typicality sentences ``*a -> b`` for domain formulas ``a`` and ``b``,
* any extra typicality formulas the caller lists (by default the KB itself).

A verdict of ``holds-on-instances`` is only a statement about those
instances.  ``fails`` always comes with a witness.  Defeasibility (P4) is
existential, so not finding a witness gives ``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .conditionals import (canonical, canonical_domain, canonical_formula,
                           check_klm_properties, conditional_of_rows, reconstruct_interpretation,
                           _min_union)
from .entailment import Theory, theory
from .enumeration import (DEFAULT_MAX_ATOMS, IMPOSSIBLE, batch_is_model, counter_models,
                          interpretations_to_table, rank_table)
from .errors import UnsupportedCombination
from .kbs import IMPOSSIBILITY
from .lm import rational_closure_oracle
from .semantics import EntailmentMode, RankedInterpretation, Vocabulary, resolve_vocab
from .syntax import (TOP, Formula, Implies, Not, Typ, as_formula, as_kb, conjoin, is_conditional,
                     is_propositional, render)

__all__ = [
    "POSTULATES", "HOLDS", "FAILS", "INCONCLUSIVE", "NOT_APPLICABLE", "PostulateVerdict",
    "QueryDomain", "query_domain", "check_postulate", "check_postulates", "cn0_closure_check",
    "ClosureReport", "impossibility_demo", "ImpossibilityReport",
]

POSTULATES = ("P1", "P2", "P3", "P4", "P5", "P5'", "P6", "P7", "P8", "P9", "P9'", "P10")
NAMES = {
    "P1": "Inclusion", "P2": "Cumulativity", "P3": "Ampliativeness", "P4": "Defeasibility",
    "P5": "Conditional Rationality", "P5'": "Conditional Single Model", "P6": "Single Model",
    "P7": "Respects Rational Closure", "P8": "Strict Entailment",
    "P9": "Conditional Strict Entailment", "P9'": "Classical Entailment",
    "P10": "Typical Entailment",
}
HOLDS = "holds-on-instances"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"


def _show(f: Formula) -> str:
    return render(f, minimal=True)


@dataclass(frozen=True)
class PostulateVerdict:
    postulate: str
    mode: EntailmentMode
    status: str
    witness: dict | None = None
    instances: int = 0
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_json(self) -> dict:
        out = {"postulate": self.postulate, "name": NAMES[self.postulate],
               "mode": self.mode.value, "status": self.status, "instances": self.instances}
        if self.witness is not None:
            out["witness"] = {k: _jsonable(v) for k, v in self.witness.items()}
        if self.note:
            out["note"] = self.note
        return out

    def describe(self) -> str:
        line = f"{self.postulate:4} {NAMES[self.postulate]:30} {self.status}"
        if self.witness:
            parts = []
            for k, v in self.witness.items():
                if k == "kb":
                    continue
                parts.append(f"{k}={_text(v)}")
            line += "  [" + "; ".join(parts) + "]"
        return line


def _text(v):
    if isinstance(v, Formula):
        return _show(v)
    if isinstance(v, (list, tuple)):
        return "{" + ", ".join(_text(x) for x in v) + "}"
    return str(v)


def _jsonable(v):
    if isinstance(v, Formula):
        return _show(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, RankedInterpretation):
        return v.to_json()
    return v


# ----------------------------------------------------------- query domain

def _size(f: Formula) -> int:
    if hasattr(f, "sub"):
        return 1 + _size(f.sub)
    if hasattr(f, "left"):
        return 1 + _size(f.left) + _size(f.right)
    return 1


def _prop_subformulas(f: Formula, out: set):
    if is_propositional(f):
        out.add(f)
    for attr in ("sub", "left", "right"):
        if hasattr(f, attr):
            _prop_subformulas(getattr(f, attr), out)


@dataclass
class QueryDomain:
    """Propositional domain formulas (as canonical masks) plus extra sentences.

    Membership of a theory over the domain is a flat boolean vector: first
    the propositional formulas, then ``*a -> b`` for every domain pair in
    row-major order, then the extras.
    """

    vocab: Vocabulary
    masks: np.ndarray
    extras: tuple = ()
    labels: dict = field(default_factory=dict)

    @property
    def n_props(self) -> int:
        return len(self.masks)

    def prop(self, i: int) -> Formula:
        m = int(self.masks[i])
        return self.labels.get(m) or canonical_formula(m, self.vocab)

    def formula(self, index: int) -> Formula:
        n = self.n_props
        if index < n:
            return self.prop(index)
        index -= n
        if index < n * n:
            a, b = divmod(index, n)
            return Implies(Typ(self.prop(a)), self.prop(b))
        return self.extras[index - n * n]

    def kind(self, index: int) -> str:
        n = self.n_props
        return "propositional" if index < n else "conditional" if index < n + n * n else "extra"

    def profile(self, th: Theory) -> np.ndarray:
        M = th.conditional().matrix
        full = self.vocab.full_mask
        D = self.masks
        props = M[full & ~D, 0]
        conds = M[np.ix_(D, D)].ravel()
        extras = th.holds_all(self.extras) if self.extras else np.zeros(0, dtype=bool)
        return np.concatenate([props, conds, extras])

    def top_conditionals(self) -> np.ndarray:
        """Flat indices of ``*T -> a`` for the domain formulas ``a``."""
        n = self.n_props
        hits = np.flatnonzero(self.masks == self.vocab.full_mask)
        if not len(hits):
            return np.zeros(0, dtype=np.int64)
        return n + hits[0] * n + np.arange(n)


def query_domain(vocab: Vocabulary, kind="canonical", kb=(), extras=None) -> QueryDomain:
    """Build a query domain.

    ``kind`` is ``"canonical"`` (all canonical formulas in canonical order),
    ``"subformulas"`` (propositional subformulas of ``kb``, the literals and T,
    ordered by size then text, one per canonical form) or an explicit list of
    propositional formulas.  ``extras`` defaults to the sentences of ``kb``.
    """
    kb = as_kb(kb)
    extras = kb if extras is None else tuple(as_formula(f) for f in extras)
    labels = {}
    if kind == "canonical":
        masks = canonical_domain(vocab)
    else:
        if kind == "subformulas":
            pool = set()
            for f in kb:
                _prop_subformulas(f, pool)
            for a in vocab.atoms:
                pool |= {as_formula(a), Not(as_formula(a))}
            pool.add(TOP)
            forms = sorted(pool, key=lambda f: (_size(f), _show(f)))
        else:
            forms = [as_formula(f) for f in kind]
        masks = []
        for f in forms:
            m = canonical(f, vocab)
            if m not in labels:
                labels[m] = f
                masks.append(m)
    return QueryDomain(vocab, np.array(masks, dtype=np.int64), tuple(extras), labels)


# ------------------------------------------------------------- checking

def _kb_vocab(kb, vocab):
    v = resolve_vocab(vocab, *kb)
    if len(v) < 2:
        raise UnsupportedCombination("postulate checks need a vocabulary of at least two atoms")
    return v


def _is_conditional_kb(kb) -> bool:
    return all(is_conditional(f) for f in kb)


def _first(mask: np.ndarray):
    idx = np.flatnonzero(mask)
    return int(idx[0]) if len(idx) else None


@lru_cache(maxsize=128)
def _cached_theory(kb, mode, vocab, max_atoms) -> Theory:
    th = theory(kb, mode, vocab, max_atoms)
    th.conditional()
    return th


class _Ctx:
    """Theories of one KB, computed on demand."""

    def __init__(self, kb, mode, vocab, queries, extras, max_atoms, klm_domain=None):
        self.kb = kb
        self.klm_domain = klm_domain
        self.mode = mode
        self.vocab = vocab
        self.max_atoms = max_atoms
        self.domain = query_domain(vocab, queries, kb, extras)

    def th(self, mode=None, kb=None) -> Theory:
        mode = self.mode if mode is None else mode
        kb = self.kb if kb is None else tuple(kb)
        return _cached_theory(kb, mode, self.vocab, self.max_atoms)

    def profile(self, mode=None, kb=None) -> np.ndarray:
        return self.domain.profile(self.th(mode, kb))


def _auto_extension(ctx: _Ctx):
    """``K`` plus its first consequence (in domain order) that ranked entailment misses."""
    mine = ctx.profile()
    base = ctx.profile(EntailmentMode.RANKED)
    i = _first(mine & ~base)
    if i is None:
        kbset = set(ctx.kb)
        for j in np.flatnonzero(mine):
            if ctx.domain.formula(int(j)) not in kbset:
                i = int(j)
                break
    if i is None:
        return None
    return ctx.kb + (ctx.domain.formula(i),)


def _negate_consequence(f: Formula) -> Formula:
    if isinstance(f, Implies) and isinstance(f.left, Typ) and is_propositional(f.right):
        return Implies(f.left, _negate(f.right))
    return _negate(f)


def _negate(f: Formula) -> Formula:
    return f.sub if isinstance(f, Not) else Not(f)


def _check_one(pid, ctx: _Ctx, extensions, pairs):
    """Return (status, witness, instances) for a single KB."""
    mode, kb, dom = ctx.mode, ctx.kb, ctx.domain
    wit = lambda **kw: {"kb": list(kb), **kw}

    if pid == "P1":
        th = ctx.th()
        for f in kb:
            if not th.holds(f):
                return FAILS, wit(formula=f), len(kb)
        return HOLDS, None, len(kb)

    if pid == "P2":
        mine = ctx.profile()
        cands = []
        auto = _auto_extension(ctx)
        if auto is not None:
            cands.append(auto)
        for ext in extensions or ():
            ext = as_kb(ext)
            if set(kb) <= set(ext) and all(ctx.th().holds(f) for f in ext):
                cands.append(tuple(ext))
        for ext in cands:
            other = ctx.profile(kb=ext)
            i = _first(mine != other)
            if i is not None:
                return FAILS, wit(extended_kb=list(ext), formula=dom.formula(i)), len(cands)
        return HOLDS, None, len(cands)

    if pid == "P3":
        i = _first(ctx.profile(EntailmentMode.RANKED) & ~ctx.profile())
        n = len(ctx.profile())
        return (HOLDS, None, n) if i is None else (FAILS, wit(formula=dom.formula(i)), n)

    if pid == "P4":
        tried = 0
        for k1, k2 in pairs or ():
            k1, k2 = as_kb(k1), as_kb(k2)
            tried += 1
            lost = _first(ctx.profile(kb=k1) & ~ctx.profile(kb=k2))
            if lost is not None:
                return HOLDS, {"kb": list(k1), "extended_kb": list(k2), "formula": dom.formula(lost)}, tried
        mine = ctx.profile()
        base = ctx.profile(EntailmentMode.RANKED)
        for i in np.flatnonzero(mine & ~base)[:20]:
            f = dom.formula(int(i))
            ext = kb + (_negate_consequence(f),)
            tried += 1
            lost = _first(mine & ~ctx.profile(kb=ext))
            if lost is not None:
                return HOLDS, wit(extended_kb=list(ext), formula=dom.formula(lost)), tried
        return INCONCLUSIVE, None, tried

    if pid == "P5":
        report = check_klm_properties(ctx.th().conditional(), ctx.vocab, ctx.klm_domain)
        bad = report.failures()
        if not bad:
            return HOLDS, None, 7
        r = bad[0]
        names = ("alpha", "beta", "gamma")
        return FAILS, wit(property=r.property,
                          **{names[k]: canonical_formula(m, ctx.vocab) for k, m in enumerate(r.witness)}), 7

    if pid in ("P5'", "P6"):
        th = ctx.th()
        R = reconstruct_interpretation(th.conditional())
        if R is None:
            report = check_klm_properties(th.conditional(), ctx.vocab)
            w = {"reason": "no single interpretation generates the induced conditional"}
            if report.failures():
                r = report.failures()[0]
                w["property"] = r.property
                for name, m in zip(("alpha", "beta", "gamma"), r.witness):
                    w[name] = canonical_formula(m, ctx.vocab)
            return FAILS, wit(**w), 1
        if pid == "P6":
            single = Theory(kb, ctx.vocab, mode, interpretations_to_table([R]))
            i = _first(dom.profile(single) != ctx.profile())
            if i is not None:
                return FAILS, wit(candidate=R, formula=dom.formula(i)), 1
        return HOLDS, None, 1

    if pid == "P7":
        oracle = rational_closure_oracle(kb, ctx.vocab)
        rc = conditional_of_rows(ctx.vocab, interpretations_to_table([oracle]))
        mine = ctx.th().conditional()
        diff = mine.matrix != rc.matrix
        n = diff.size
        i = _first(diff.ravel())
        if i is None:
            return HOLDS, None, n
        a, b = divmod(i, diff.shape[1])
        f = Implies(Typ(canonical_formula(a, ctx.vocab)), canonical_formula(b, ctx.vocab))
        return FAILS, wit(formula=f, in_mode=bool(mine.matrix[a, b])), n

    if pid in ("P8", "P9"):
        n = dom.n_props
        diff = ctx.profile()[:n] != ctx.profile(EntailmentMode.RANKED)[:n]
        i = _first(diff)
        return (HOLDS, None, n) if i is None else (FAILS, wit(formula=dom.formula(i)), n)

    if pid == "P9'":
        n = dom.n_props
        classical = canonical(conjoin(kb), ctx.vocab)
        expected = (classical & ~dom.masks) == 0
        i = _first(ctx.profile()[:n] != expected)
        return (HOLDS, None, n) if i is None else (FAILS, wit(formula=dom.formula(i)), n)

    if pid == "P10":
        idx = dom.top_conditionals()
        diff = ctx.profile()[idx] != ctx.profile(EntailmentMode.RANKED)[idx]
        i = _first(diff)
        return (HOLDS, None, len(idx)) if i is None else (FAILS, wit(formula=dom.formula(int(idx[i]))), len(idx))

    raise ValueError(f"unknown postulate {pid!r}")


def check_postulate(pid: str, mode, kbs, queries="canonical", vocab=None, extras=None,
                    extensions=None, pairs=None, klm_domain=None,
                    max_atoms: int = DEFAULT_MAX_ATOMS) -> PostulateVerdict:
    """Check postulate ``pid`` for ``mode`` on each KB in ``kbs``.

    ``queries`` selects the propositional part of the query domain (see
    :func:`query_domain`); ``extras`` adds typicality sentences (default: the
    KB's own).  ``extensions`` are extra candidate KBs for P2, ``pairs`` are
    ``(K, K')`` candidates for P4, and ``klm_domain`` restricts the formulas
    the KLM rules quantify over for P5.  P7 and P9 need conditional KBs and
    P9' a propositional one; anything else raises UnsupportedCombination.
    """
    if pid not in POSTULATES:
        raise ValueError(f"unknown postulate {pid!r}; expected one of {POSTULATES}")
    mode = EntailmentMode.parse(mode)
    kbs = [as_kb(k) for k in kbs]
    total = 0
    found_p4 = None
    for kb in kbs:
        if pid in ("P7", "P9") and not _is_conditional_kb(kb):
            raise UnsupportedCombination(f"{pid} applies to conditional knowledge bases only")
        if pid == "P9'" and not all(is_propositional(f) for f in kb):
            raise UnsupportedCombination("P9' applies to propositional knowledge bases only")
        ctx = _Ctx(kb, mode, _kb_vocab(kb, vocab), queries, extras, max_atoms, klm_domain)
        status, witness, n = _check_one(pid, ctx, extensions, pairs)
        total += n
        if pid == "P4":
            if status == HOLDS and found_p4 is None:
                found_p4 = witness
            continue
        if status == FAILS:
            return PostulateVerdict(pid, mode, FAILS, witness, total)
    if pid == "P4":
        if found_p4 is None:
            return PostulateVerdict(pid, mode, INCONCLUSIVE, None, total,
                                    "no defeasibility witness among the candidates tried")
        return PostulateVerdict(pid, mode, HOLDS, found_p4, total)
    return PostulateVerdict(pid, mode, HOLDS, None, total)


def applicable(pid: str, kb) -> bool:
    kb = as_kb(kb)
    if pid in ("P7", "P9"):
        return _is_conditional_kb(kb)
    if pid == "P9'":
        return all(is_propositional(f) for f in kb)
    return True


def check_postulates(kb, mode, postulates=POSTULATES, **kw) -> list[PostulateVerdict]:
    """All requested postulates on one KB; inapplicable ones get status ``not-applicable``."""
    mode = EntailmentMode.parse(mode)
    out = []
    for pid in postulates:
        if not applicable(pid, kb):
            out.append(PostulateVerdict(pid, mode, NOT_APPLICABLE))
        else:
            out.append(check_postulate(pid, mode, [kb], **kw))
    return out


# --------------------------------------------------------- closure check

@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    witness: Formula | None
    models_of_theory: int

    def __bool__(self):
        return self.closed


def _rows_satisfying(vocab: Vocabulary, rows: np.ndarray, bound: np.ndarray, chunk: int = 8192) -> np.ndarray:
    """Rows whose minimal ``a``-valuations lie inside ``bound[a]`` for every canonical ``a``."""
    size = vocab.size
    forms = np.arange(1 << size, dtype=np.int64)
    ok = np.zeros(len(rows), dtype=bool)
    for start in range(0, len(rows), chunk):
        r = rows[start:start + chunk].astype(np.int16)
        mins = np.zeros((len(r), len(forms)), dtype=np.int64)
        for v in range(size):
            live = r[:, v] != IMPOSSIBLE
            below = np.zeros(len(r), dtype=np.int64)
            for w in range(size):
                below |= (r[:, w] < r[:, v]).astype(np.int64) << w
            hit = live[:, None] & ((forms[None, :] & below[:, None]) == 0) & (forms >> v & 1).astype(bool)[None, :]
            mins |= hit.astype(np.int64) << v
        ok[start:start + chunk] = ((mins & ~bound[None, :]) == 0).all(axis=1)
    return ok


def cn0_closure_check(kb, mode, vocab=None, queries="canonical", extras=None,
                      max_atoms: int = DEFAULT_MAX_ATOMS) -> ClosureReport:
    """Is the theory of ``kb`` under ``mode`` closed under ranked consequence?

    The theory is approximated by its members in the query domain.  Its
    ranked models are found among all interpretations (pre-filtered on the
    possible valuations and bottom layer the theory allows), and whatever
    they all satisfy in the domain must already be in the theory.
    """
    kb = as_kb(kb)
    mode = EntailmentMode.parse(mode)
    vocab = resolve_vocab(vocab, *kb)
    dom = query_domain(vocab, queries, kb, extras)
    th = theory(kb, mode, vocab, max_atoms)
    mine = dom.profile(th)
    bound = _min_union(vocab, th.rows)  # the theory's conditional, per antecedent
    table = rank_table(vocab)
    possible = table != IMPOSSIBLE
    # every possible valuation of a model of the theory lies in the union of possible sets
    poss_union = int(np.bitwise_or.reduce(bound[[1 << v for v in range(vocab.size)]])) if len(th.rows) else 0
    keep = np.ones(len(table), dtype=bool)
    for v in range(vocab.size):
        if not poss_union >> v & 1:
            keep &= ~possible[:, v]
    bottom = int(bound[vocab.full_mask])
    for v in range(vocab.size):
        if not bottom >> v & 1:
            keep &= table[:, v] != 0
    cand = table[keep]
    cand = cand[_rows_satisfying(vocab, cand, bound)]
    sentences = [dom.formula(n_) for n_ in np.flatnonzero(mine) if dom.kind(int(n_)) == "extra"]
    if sentences:
        cand = cand[batch_is_model(vocab, cand, sentences)]
    closure = Theory(kb, vocab, EntailmentMode.RANKED, cand)
    theirs = dom.profile(closure)
    i = _first(theirs & ~mine)
    return ClosureReport(i is None, None if i is None else dom.formula(i), len(cand))


# ----------------------------------------------------- impossibility demo

@dataclass
class ImpossibilityReport:
    kb: tuple
    vocab: Vocabulary
    ranked: dict
    modes: dict

    @property
    def no_mode_satisfies_all(self) -> bool:
        return all(not m["all_hold"] for m in self.modes.values())

    def to_json(self) -> dict:
        return {
            "kb": [_show(f) for f in self.kb],
            "vocab": list(self.vocab.atoms),
            "ranked": {k: _jsonable(v) for k, v in self.ranked.items()},
            "modes": {m: {k: _jsonable(v) for k, v in d.items()} for m, d in self.modes.items()},
            "no_mode_satisfies_all": self.no_mode_satisfies_all,
        }

    def describe(self) -> str:
        lines = ["KB: " + ", ".join(_show(f) for f in self.kb), "",
                 "ranked entailment:"]
        for q in ("p", "*T -> !q"):
            info = self.ranked[q]
            lines.append(f"  {q:12} {'entailed' if info['entailed'] else 'not entailed'}"
                         f"  ({info['counter_models']} counter-models)")
        lines.append(f"  2-rank model ({{p,!q}}, {{!p,q}}) refutes p: {self.ranked['two_rank_refutes_p']}")
        lines.append(f"  1-rank model ({{p,q}}, {{p,!q}}) refutes *T -> !q: "
                     f"{self.ranked['one_rank_refutes_top_not_q']}")
        for m, d in self.modes.items():
            lines.append("")
            lines.append(f"{m}:")
            for q in CHAIN:
                lines.append(f"  {q:12} {'in' if d['membership'][q] else 'not in'} the theory")
            lines.append("  " + ", ".join(f"{p} {'ok' if d['postulates'][p] == HOLDS else 'FAILS'}"
                                          for p in CONFLICTING_POSTULATES))
            lines.append(f"  sacrificed here: {', '.join(d['sacrificed']) or 'none'}")
        lines.append("")
        lines.append("no mode satisfies all of " + ", ".join(CONFLICTING_POSTULATES) + ": "
                     + ("yes" if self.no_mode_satisfies_all else "NO"))
        return "\n".join(lines)


IMPOSSIBILITY_KB = IMPOSSIBILITY
CHAIN = ("p", "*T -> !q", "*q -> p", "*!p -> p")
CONFLICTING_POSTULATES = ("P1", "P2", "P3", "P5", "P8", "P10")


def impossibility_demo(vocab=("p", "q"), modes=(EntailmentMode.LM, EntailmentMode.PT, EntailmentMode.PTPRIME)) -> ImpossibilityReport:
    """Walk the chain of consequences on ``{*T -> p, *!p -> *q}`` for each mode."""
    kb = as_kb(IMPOSSIBILITY_KB)
    vocab = resolve_vocab(vocab, *kb)
    two_rank = RankedInterpretation.from_layers(vocab, [[["p", "!q"]], [["!p", "q"]]])
    one_rank = RankedInterpretation.from_layers(vocab, [[["p", "q"], ["p", "!q"]]])
    ranked = {}
    for q in ("p", "*T -> !q"):
        cms = counter_models(kb, q, vocab)
        ranked[q] = {"entailed": not cms, "counter_models": len(cms)}
    ranked["two_rank_refutes_p"] = two_rank in counter_models(kb, "p", vocab)
    ranked["one_rank_refutes_top_not_q"] = one_rank in counter_models(kb, "*T -> !q", vocab)
    ranked["two_rank_model"] = two_rank
    ranked["one_rank_model"] = one_rank
    out = {}
    for mode in modes:
        mode = EntailmentMode.parse(mode)
        th = theory(kb, mode, vocab)
        membership = {q: th.holds(q) for q in CHAIN}
        verdicts = {p: check_postulate(p, mode, [kb], vocab=vocab) for p in CONFLICTING_POSTULATES}
        sacrificed = [p for p, v in verdicts.items() if v.status != HOLDS]
        out[mode.label] = {
            "membership": membership,
            "postulates": {p: v.status for p, v in verdicts.items()},
            "witnesses": {p: v.witness for p, v in verdicts.items() if v.witness},
            "sacrificed": sacrificed,
            "all_hold": not sacrificed,
        }
    return ImpossibilityReport(kb, vocab, ranked, out)
