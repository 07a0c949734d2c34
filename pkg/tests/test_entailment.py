import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptl.enumeration import ranked_entails
from ptl.entailment import entails, selected_models, theory
from ptl.errors import EmptyInput, UnknownAtom, VocabularyTooLarge
from ptl.kbs import BIRDS, IMPOSSIBILITY, PENGUINS_ROBINS, PENGUINS_ROBINS_WEAK
from ptl.lm import lm_entails
from ptl.pt import pt_entails, ptprime_entails
from ptl.semantics import Vocabulary
from strategies import formulas

PQ = Vocabulary(("p", "q"))


@pytest.mark.parametrize("mode, query, expected", [
    ("lm", "!p", True),
    ("ranked", "!p", False),
    ("pt", "!p", False),
    ("pt", "*!p -> !r", True),
    ("ptp", "*!p -> !r", True),
    ("lm", "*!r -> !p", True),
    ("pt", "*!r -> !p", True),
    ("lm", "*!r -> f", False),
    ("pt", "*!r -> f", False),
    ("ranked", "p -> !r", True),
])
def test_penguins_robins(mode, query, expected):
    assert entails(PENGUINS_ROBINS, query, mode) is expected


def test_query_atoms_extend_the_vocabulary():
    th = theory(BIRDS, "lm", ("b", "f", "p", "w"))
    assert th.vocab.atoms == ("b", "f", "p", "w")
    assert entails(BIRDS, "*b -> f", "lm", ("b", "f", "p", "w"))
    # an atom the KB never mentions is free: nothing is concluded about it
    assert not entails(BIRDS, "w", "lm", ("b", "f", "p", "w"))


def test_dispatch_agrees_with_direct_functions():
    for q in ("*T -> !f", "!p", "*r -> f"):
        assert entails(PENGUINS_ROBINS_WEAK, q, "lm") == lm_entails(PENGUINS_ROBINS_WEAK, q)
        assert entails(PENGUINS_ROBINS_WEAK, q, "pt") == pt_entails(PENGUINS_ROBINS_WEAK, q)
        assert entails(PENGUINS_ROBINS_WEAK, q, "ptp") == ptprime_entails(PENGUINS_ROBINS_WEAK, q)
        assert entails(PENGUINS_ROBINS_WEAK, q, "ranked") == ranked_entails(PENGUINS_ROBINS_WEAK, q)


def test_theory_helpers():
    th = theory(IMPOSSIBILITY, "pt")
    assert len(th.models) == len(selected_models(IMPOSSIBILITY, "pt"))
    assert th.holds_all(["*T -> p", "p"]).tolist() == [True, False]
    assert th.counter_models("p")
    assert th.conditional().contains("T", "p")


def test_errors():
    with pytest.raises(EmptyInput):
        entails(["*T -> T"], "T", "lm")
    with pytest.raises(UnknownAtom):
        entails(BIRDS, "x", "lm", ("b", "f", "p"))
    with pytest.raises(VocabularyTooLarge):
        entails(BIRDS, "a & c", "pt")


@settings(max_examples=60)
@given(st.lists(formulas(("p", "q"), max_leaves=5), min_size=1, max_size=3),
       formulas(("p", "q"), max_leaves=5), formulas(("p", "q"), max_leaves=5))
def test_ranked_entailment_is_monotone(kb, extra, query):
    if ranked_entails(kb, query, PQ):
        assert ranked_entails(kb + [extra], query, PQ)


@settings(max_examples=60)
@given(st.lists(formulas(("p", "q"), max_leaves=5), min_size=1, max_size=3),
       formulas(("p", "q"), max_leaves=5), st.sampled_from(["lm", "pt", "ptp"]))
def test_ranked_consequences_are_kept(kb, query, mode):
    # every mode selects a subset of the models, so it can only conclude more
    if ranked_entails(kb, query, PQ):
        assert entails(kb, query, mode, PQ)
