import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ptl.errors import ConvexityViolation, EmptyInput, UnknownAtom, VocabularyMismatch
from ptl.semantics import (INF, EntailmentMode, RankedInterpretation, Vocabulary, extension, is_model,
                           layers, mask_to_set, minimal, resolve_vocab, satisfies_conditional,
                           set_to_mask)
from ptl.syntax import parse
from strategies import formulas

FPR = Vocabulary(("f", "p", "r"))
PQ = Vocabulary(("p", "q"))
INTERPRETATIONS_2 = oracles.all_interpretations(2)


def test_valuation_order_first_atom_most_significant():
    assert FPR.parse_valuation("!f, !p, !r") == 0
    assert FPR.parse_valuation("{f, !p, !r}") == 4
    assert FPR.parse_valuation(["f", "p", "r"]) == 7
    assert FPR.format_valuation(4) == "{f, !p, !r}"
    assert FPR.format_valuation(4, style="compact", unicode=True) == "f¬p¬r"
    assert FPR.literals(5) == ["f", "!p", "r"]
    for v in FPR.valuations():
        assert FPR.parse_valuation(FPR.format_valuation(v)) == v


def test_vocabulary_checks():
    assert Vocabulary.of("r", "f", parse("*p -> f")).atoms == ("f", "p", "r")
    with pytest.raises(ValueError):
        Vocabulary(("p", "p"))
    with pytest.raises(UnknownAtom):
        FPR.index("b")
    with pytest.raises(UnknownAtom):
        FPR.check(parse("b -> f"))
    with pytest.raises(EmptyInput):
        resolve_vocab(None, parse("*T -> F"))
    assert resolve_vocab(["p", "q"], parse("p")) == PQ


def test_mask_helpers():
    assert mask_to_set(0b1010) == frozenset({1, 3})
    assert set_to_mask({1, 3}) == 0b1010


def test_convexity_enforced():
    with pytest.raises(ConvexityViolation):
        RankedInterpretation(PQ, (0, 2, INF, INF))
    with pytest.raises(ConvexityViolation):
        RankedInterpretation(PQ, (1, 1, 1, 1))
    R = RankedInterpretation.unchecked(PQ, (1, 1, 1, 1))
    assert not R.is_convex
    assert RankedInterpretation.all_impossible(PQ).height == 0


def test_from_layers_and_properties():
    R = RankedInterpretation.from_layers(FPR, [["!f, !p, !r", "f, !p, !r"]])
    assert R.ranks == (0, INF, INF, INF, 0, INF, INF, INF)
    assert R.layers == [frozenset({0, 4})]
    assert R.impossible == frozenset({1, 2, 3, 5, 6, 7})
    assert R.rank("f, !p, !r") == 0
    assert math.isinf(R.rank(["f", "p", "r"]))
    assert layers(R) == (R.layers, R.impossible)


def test_json_round_trip():
    R = RankedInterpretation(FPR, (1, INF, 0, 2, 1, INF, 0, 0))
    data = json.loads(json.dumps(R.to_json()))
    assert data["vocab"] == ["f", "p", "r"]
    assert data["layers"][0] == [["!f", "p", "!r"], ["f", "p", "!r"], ["f", "p", "r"]]
    assert RankedInterpretation.from_json(data) == R


def test_table_prints_highest_rank_first():
    R = RankedInterpretation(PQ, (1, INF, 0, 0))
    assert R.table().splitlines() == [
        "inf | {!p, q}",
        "  1 | {!p, !q}",
        "  0 | {p, !q}, {p, q}",
    ]
    assert "inf" not in RankedInterpretation.all_zero(PQ).table()


def test_typicality_picks_lowest_satisfying_valuations():
    R = RankedInterpretation(FPR, (1, INF, 0, 2, 1, INF, 0, 0))
    assert minimal(R, parse("f")) == frozenset({6, 7})
    assert minimal(R, parse("!p")) == frozenset({0, 4})
    assert extension(R, parse("*!p -> r")) == frozenset({2, 3, 6, 7})
    assert satisfies_conditional(R, parse("p"), parse("!r | f"))
    assert not satisfies_conditional(R, parse("!p"), parse("f"))


def test_mode_names():
    assert EntailmentMode.parse("PT'") is EntailmentMode.PTPRIME
    assert EntailmentMode.parse("ptp").label == "PT'"
    with pytest.raises(ValueError):
        EntailmentMode.parse("xx")


def test_mismatched_vocabularies_rejected():
    from ptl.lm import ranked_union
    with pytest.raises(VocabularyMismatch):
        ranked_union([RankedInterpretation.all_zero(PQ), RankedInterpretation.all_zero(FPR)])


@settings(max_examples=200)
@given(formulas(("p", "q"), max_leaves=10), st.sampled_from(INTERPRETATIONS_2))
def test_evaluator_matches_oracle(g, ranks):
    R = RankedInterpretation(PQ, ranks)
    assert extension(R, g) == frozenset(oracles.models_of(PQ.atoms, ranks, g))
    assert is_model(R, [g]) == oracles.satisfies(PQ.atoms, ranks, [g])
