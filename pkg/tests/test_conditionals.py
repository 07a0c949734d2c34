import pytest

import oracles
from ptl.conditionals import (ConditionalSet, canonical, canonical_domain, canonical_formula,
                              check_klm_properties, conditional_from_interpretation,
                              conditional_of_rows, embed, find_generating_interpretation,
                              induced_conditional, random_conditional_sets,
                              reconstruct_interpretation)
from ptl.entailment import theory
from ptl.enumeration import enumerate_interpretations, rank_table
from ptl.errors import NotPropositional, VocabularyTooLarge
from ptl.kbs import PENGUINS_ROBINS
from ptl.semantics import RankedInterpretation, Vocabulary, is_model, satisfies_conditional
from ptl.syntax import parse

PQ = Vocabulary(("p", "q"))
FPR = Vocabulary(("f", "p", "r"))


@pytest.mark.parametrize("vocab", [PQ, FPR])
def test_canonical_round_trip(vocab):
    for m in range(1 << vocab.size):
        g = canonical_formula(m, vocab)
        assert canonical(g, vocab) == m
        assert canonical(g, vocab) == sum(1 << v for v in oracles.prop_models(vocab.atoms, g))


def test_canonical_names():
    assert str(canonical_formula(0, PQ)) == "F"
    assert str(canonical_formula(15, PQ)) == "T"
    assert str(canonical_formula(canonical("!q", PQ), PQ)) == "!q"
    assert canonical("p & q | p & !q", PQ) == canonical("p", PQ)
    with pytest.raises(NotPropositional):
        canonical("*p", PQ)
    with pytest.raises(VocabularyTooLarge):
        canonical_domain(Vocabulary(("a", "b", "c", "d")))


def test_canonical_domain_order():
    d = canonical_domain(PQ)
    assert len(d) == 16 and len(set(d)) == 16
    head = [str(canonical_formula(m, PQ)) for m in d[:6]]
    assert head == ["T", "F", "p", "!p", "q", "!q"]


def test_embed():
    assert embed(("p", "q")) == parse("*p -> q")
    with pytest.raises(NotPropositional):
        embed(("*p", "q"))


def test_conditional_of_interpretation_matches_direct_check():
    forms = [canonical_formula(m, PQ) for m in range(16)]
    for R in list(enumerate_interpretations(PQ))[::5]:
        c = conditional_from_interpretation(R)
        for a in range(16):
            for b in range(16):
                assert c.contains(a, b) == satisfies_conditional(R, forms[a], forms[b])


def test_generic_route_agrees():
    for R in list(enumerate_interpretations(PQ))[::37]:
        slow = induced_conditional(lambda f: is_model(R, [f]), PQ)
        assert slow == conditional_from_interpretation(R)


def test_set_operations():
    rows = rank_table(PQ)
    a = conditional_of_rows(PQ, rows[10:11])
    b = conditional_of_rows(PQ, rows[20:21])
    assert a & b == conditional_of_rows(PQ, rows[[10, 20]])
    assert len(a | b) >= max(len(a), len(b))
    c = ConditionalSet.from_pairs(PQ, [("p", "q"), ("T", "!q")])
    assert ("p", "q") in c and c.contains("T", "!q") and len(c) == 2
    assert hash(c) == hash(ConditionalSet.from_pairs(PQ, [("T", "!q"), ("p", "q")]))


def test_empty_set_fails_reflexivity():
    report = check_klm_properties(ConditionalSet.from_pairs(PQ, []))
    assert not report["Ref"].passed
    assert not report.preferential


def test_every_interpretation_is_rational():
    for R in list(enumerate_interpretations(PQ))[::3]:
        assert check_klm_properties(conditional_from_interpretation(R)).rational


def test_pt_conditional_breaks_rational_monotonicity():
    th = theory(PENGUINS_ROBINS, "pt")
    c = th.conditional()
    report = check_klm_properties(c)
    assert report.preferential
    assert [r.property for r in report.failures()] == ["RM"]
    fmt = lambda w: tuple(str(canonical_formula(m, FPR)) for m in w)
    assert fmt(report["RM"].witness) == ("T", "f", "!r")
    narrow = check_klm_properties(c, domain=["!p", "f", "!r"])
    assert fmt(narrow["RM"].witness) == ("!p", "f", "!r")
    assert narrow.to_json()[-1]["witness"]["alpha"] == [["!f", "!p", "!r"], ["!f", "!p", "r"],
                                                        ["f", "!p", "!r"], ["f", "!p", "r"]]
    assert "RM   fail" in narrow.describe()


def test_reconstruction_inverts_every_interpretation():
    for R in enumerate_interpretations(PQ):
        assert reconstruct_interpretation(conditional_from_interpretation(R)) == R


def test_reconstruction_agrees_with_exhaustive_search():
    for c in random_conditional_sets(PQ, 120, seed=3):
        a = reconstruct_interpretation(c)
        b = find_generating_interpretation(c)
        assert a == b
        if a is not None:
            assert check_klm_properties(c).rational


def test_reconstruction_three_atoms():
    R = RankedInterpretation.from_layers(FPR, [["f,!p,!r"], ["!f,!p,!r", "!f,p,!r"], ["f,p,!r"]])
    c = conditional_from_interpretation(R)
    assert reconstruct_interpretation(c) == R
    m = c.matrix.copy()
    m[0b11110000, 0b00001111] = True
    assert reconstruct_interpretation(ConditionalSet(FPR, m)) is None
