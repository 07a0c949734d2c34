"""Slow, independent reference implementations used as test oracles.

Nothing here uses the package's bitmask evaluator, rank tables or
filters; valuations are dicts and interpretations are plain rank lists.
"""

import itertools
import math

from ptl.syntax import And, Atom, Bot, Iff, Implies, Not, Or, Top, Typ

INF = math.inf


def valuations(atoms):
    """Valuations as dicts, in the package's index order (first atom most significant)."""
    return [dict(zip(atoms, bits)) for bits in itertools.product([False, True], repeat=len(atoms))]


def convex(ranks):
    finite = {r for r in ranks if r != INF}
    return all(j in finite for r in finite for j in range(r))


def all_interpretations(n_atoms):
    """Every convex rank list over 2**n valuations, by brute force over all assignments."""
    size = 2 ** n_atoms
    out = []
    for ranks in itertools.product(list(range(size)) + [INF], repeat=size):
        if convex(ranks):
            out.append(tuple(ranks))
    return out


def holds(atoms, ranks, f, i):
    """Truth of ``f`` at valuation index ``i`` of the interpretation ``ranks``."""
    vals = valuations(atoms)
    w = vals[i]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return w[f.name]
    if isinstance(f, Not):
        return not holds(atoms, ranks, f.sub, i)
    if isinstance(f, And):
        return holds(atoms, ranks, f.left, i) and holds(atoms, ranks, f.right, i)
    if isinstance(f, Or):
        return holds(atoms, ranks, f.left, i) or holds(atoms, ranks, f.right, i)
    if isinstance(f, Implies):
        return (not holds(atoms, ranks, f.left, i)) or holds(atoms, ranks, f.right, i)
    if isinstance(f, Iff):
        return holds(atoms, ranks, f.left, i) == holds(atoms, ranks, f.right, i)
    if isinstance(f, Typ):
        if ranks[i] == INF or not holds(atoms, ranks, f.sub, i):
            return False
        sat = [ranks[j] for j in range(len(vals)) if ranks[j] != INF and holds(atoms, ranks, f.sub, j)]
        return ranks[i] == min(sat)
    raise TypeError(f)


def satisfies(atoms, ranks, kb):
    return all(holds(atoms, ranks, f, i) for f in kb for i in range(len(ranks)) if ranks[i] != INF)


def models_of(atoms, ranks, f):
    """Indices of possible valuations where ``f`` is true."""
    return {i for i in range(len(ranks)) if ranks[i] != INF and holds(atoms, ranks, f, i)}


def prop_models(atoms, f):
    """Classical models of a propositional formula."""
    zero = (0,) * (2 ** len(atoms))
    return {i for i in range(len(zero)) if holds(atoms, zero, f, i)}


def layers(ranks):
    finite = [r for r in ranks if r != INF]
    n = max(finite) + 1 if finite else 0
    return [{i for i, r in enumerate(ranks) if r == k} for k in range(n)]


def lm_leq(r1, r2):
    """Layer-prefix preference, written directly from its definition."""
    L, M = layers(r1), layers(r2)
    n = max(len(L), len(M))
    L += [set()] * (n - len(L))
    M += [set()] * (n - len(M))
    for i in range(n):
        if L[i] != M[i]:
            return L[i] > M[i]
    return True


def pt_leq(r1, r2):
    return all(a <= b for a, b in zip(r1, r2))


def minimal_elements(items, leq):
    return [x for x in items if not any(leq(y, x) and not leq(x, y) for y in items)]


def ranked_union(rank_lists):
    lowest = [min(col) for col in zip(*rank_lists)]
    levels = sorted({r for r in lowest if r != INF})
    return tuple(INF if r == INF else levels.index(r) for r in lowest)


def fubini_bruteforce(m):
    """Number of ordered set partitions of an m-set, by counting surjections onto ranks."""
    if m == 0:
        return 1
    total = 0
    for k in range(1, m + 1):
        total += sum(1 for f in itertools.product(range(k), repeat=m) if set(f) == set(range(k)))
    return total
