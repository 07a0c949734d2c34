import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ptl.enumeration import enumerate_interpretations, models
from ptl.errors import EmptyInput, InvariantViolation, NotConditionalKB
from ptl.kbs import BIRDS, IMPOSSIBILITY, PENGUINS_CONDITIONAL, PENGUINS_ROBINS
from ptl.lm import (bump_outside, check_lm_minimum, global_checks_run, lm_entails, lm_minimal,
                    lm_preferred, lm_strictly_preferred, make_impossible_outside, ranked_union,
                    rational_closure_model, rational_closure_oracle)
from ptl.semantics import INF, RankedInterpretation, Vocabulary, is_model
from ptl.syntax import parse
from strategies import formulas

PQ = Vocabulary(("p", "q"))
FPR = Vocabulary(("f", "p", "r"))
ALL_2 = oracles.all_interpretations(2)


def test_penguins_robins_minimal_model_and_trace():
    R, trace = lm_minimal(PENGUINS_ROBINS)
    assert R.vocab == FPR
    assert R.layers == [frozenset({0, 4})]
    assert R.impossible == frozenset({1, 2, 3, 5, 6, 7})
    assert trace.satisfying_sets() == [frozenset({0, 4}), frozenset({0, 4})]
    assert trace.steps[0].interpretation == RankedInterpretation.all_zero(FPR)
    assert trace.steps[1].interpretation.ranks == (0, 1, 1, 1, 0, 1, 1, 1)
    data = trace.to_json()
    assert data[1]["satisfying_set"] == [["!f", "!p", "!r"], ["f", "!p", "!r"]]
    assert data[1]["layers"][0] == data[1]["satisfying_set"]


def test_impossibility_kb():
    R, _ = lm_minimal(IMPOSSIBILITY)
    assert R.layers == [frozenset({PQ.parse_valuation("p, q"), PQ.parse_valuation("p, !q")})]
    assert lm_entails(IMPOSSIBILITY, "p")
    assert lm_entails(IMPOSSIBILITY, "*q -> p")
    assert lm_entails(IMPOSSIBILITY, "*!p -> p")
    assert not lm_entails(IMPOSSIBILITY, "*T -> !q")


def test_birds_get_the_expected_conclusions():
    assert lm_entails(BIRDS, "*p -> *b")
    assert lm_entails(BIRDS, "*p -> f")
    assert not lm_entails(BIRDS + ("*p -> !f",), "*p -> f")


def test_unsatisfiable_kb_gives_all_impossible():
    R, _ = lm_minimal(["p", "!p"])
    assert R == RankedInterpretation.all_impossible(Vocabulary(("p",)))


def test_bump_and_cut():
    R = RankedInterpretation.all_zero(PQ)
    bumped = bump_outside(R, {0, 3})
    assert bumped.ranks == (0, 1, 1, 0)
    assert bump_outside(R, set()).ranks == (1, 1, 1, 1)
    assert not bump_outside(R, set()).is_convex
    assert make_impossible_outside(bumped, {0, 3}).ranks == (0, INF, INF, 0)


def test_ranked_union():
    a = RankedInterpretation(PQ, (0, 1, INF, INF))
    b = RankedInterpretation(PQ, (INF, 0, 2, 1))
    assert ranked_union([a, b]).ranks == (0, 0, 2, 1)
    assert ranked_union([a]) == a
    with pytest.raises(EmptyInput):
        ranked_union([])


def test_ranked_union_rows_matches_object_version():
    from ptl.enumeration import interpretations_to_table, rank_table, row_to_interpretation
    from ptl.lm import ranked_union_rows
    table = rank_table(PQ)
    rnd = random.Random(5)
    for _ in range(200):
        picks = rnd.sample(range(len(table)), rnd.randint(1, 6))
        rs = [row_to_interpretation(PQ, table[i]) for i in picks]
        expected = interpretations_to_table([ranked_union(rs)])[0]
        assert ranked_union_rows(table[picks]).tolist() == expected.tolist()


def test_rational_closure_penguins():
    R = rational_closure_model(PENGUINS_CONDITIONAL)
    assert R == rational_closure_oracle(PENGUINS_CONDITIONAL)
    # rank 0: no penguins, birds fly; rank 1: flightless birds; rank 2: the other penguins
    assert R.ranks == (0, 2, 0, 2, 1, 1, 0, 2)
    with pytest.raises(NotConditionalKB):
        rational_closure_model(["p -> b"])


def test_global_check_is_live():
    before = global_checks_run()
    lm_minimal(PENGUINS_ROBINS)
    assert global_checks_run() == before + 1
    not_minimal = RankedInterpretation.from_layers(FPR, [["!f, !p, !r"], ["f, !p, !r"]])
    assert is_model(not_minimal, [parse(x) for x in PENGUINS_ROBINS])
    with pytest.raises(InvariantViolation):
        check_lm_minimum(PENGUINS_ROBINS, FPR, not_minimal)


def _oracle_lm_minimum(kb):
    kb = [parse(x) if isinstance(x, str) else x for x in kb]
    ms = [r for r in ALL_2 if oracles.satisfies(PQ.atoms, r, kb)]
    least = [m for m in ms if all(oracles.lm_leq(m, o) for o in ms)]
    assert len(least) == 1
    return least[0]


@settings(max_examples=150)
@given(st.lists(formulas(("p", "q"), max_leaves=6), min_size=1, max_size=3))
def test_lm_minimal_matches_oracle(kb):
    R, trace = lm_minimal(kb, PQ)
    assert R.ranks == _oracle_lm_minimum(kb)
    sets = trace.satisfying_sets()
    assert all(a <= b for a, b in zip(sets, sets[1:]))


def test_lm_preference_is_a_partial_order():
    rs = list(enumerate_interpretations(PQ))
    for a in rs:
        assert lm_preferred(a, a)
        for b in rs:
            ab, ba = lm_preferred(a, b), lm_preferred(b, a)
            assert ab == oracles.lm_leq(a.ranks, b.ranks)
            if ab and ba:
                assert a == b
            assert lm_strictly_preferred(a, b) == (ab and not ba)
    rnd = random.Random(1)
    for _ in range(20000):
        a, b, c = rnd.sample(rs, 3)
        if lm_preferred(a, b) and lm_preferred(b, c):
            assert lm_preferred(a, c)


def test_preferred_rows_matches_scalar():
    from ptl.enumeration import rank_table
    from ptl.lm import lm_preferred_rows
    table = rank_table(PQ)
    rs = list(enumerate_interpretations(PQ))
    for R in rs[::7]:
        assert lm_preferred_rows(R, table).tolist() == [lm_preferred(R, S) for S in rs]


def test_lm_result_is_the_least_model():
    R, _ = lm_minimal(PENGUINS_ROBINS)
    assert all(lm_preferred(R, M) for M in models(PENGUINS_ROBINS))
