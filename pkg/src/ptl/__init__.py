"""Propositional typicality logic: syntax, ranked semantics and entailment."""

from .conditionals import (ConditionalSet, KlmReport, canonical, canonical_formula,
                           check_klm_properties, conditional_from_interpretation,
                           reconstruct_interpretation)
from .entailment import Theory, entails, selected_models, theory
from .enumeration import (enumerate_interpretations, interpretation_count, is_satisfiable, models,
                          ranked_entails)
from .errors import (ConvexityViolation, EmptyInput, InvariantViolation, NestedTypicality,
                     NotConditionalKB, NotPropositional, ParseError, PTLError, UnknownAtom,
                     UnsupportedCombination, VocabularyMismatch, VocabularyTooLarge)
from .kbfile import KbFile, load_kb, parse_kb_text
from .lm import lm_entails, lm_minimal, lm_preferred, ranked_union, rational_closure_model
from .postulates import check_postulate, check_postulates, impossibility_demo
from .pt import pt_entails, pt_minimal_models, ptprime_entails, ptprime_minimal_models
from .semantics import (INF, EntailmentMode, RankedInterpretation, Vocabulary, extension, is_model,
                        minimal)
from .syntax import Formula, parse, render, to_normal_form

__version__ = "0.1.0"

__all__ = [
    "ConvexityViolation", "EmptyInput", "InvariantViolation", "NestedTypicality", "NotConditionalKB",
    "NotPropositional", "ParseError", "PTLError", "UnknownAtom", "UnsupportedCombination",
    "VocabularyMismatch", "VocabularyTooLarge",
    "ConditionalSet", "KlmReport", "canonical", "canonical_formula", "check_klm_properties",
    "conditional_from_interpretation", "reconstruct_interpretation", "Theory", "entails",
    "selected_models", "theory", "enumerate_interpretations", "interpretation_count",
    "is_satisfiable", "models", "ranked_entails", "KbFile", "load_kb", "parse_kb_text",
    "lm_entails", "lm_minimal", "lm_preferred", "ranked_union", "rational_closure_model",
    "check_postulate", "check_postulates", "impossibility_demo", "pt_entails", "pt_minimal_models",
    "ptprime_entails", "ptprime_minimal_models", "INF", "EntailmentMode", "RankedInterpretation",
    "Vocabulary", "extension", "is_model", "minimal", "Formula", "parse", "render", "to_normal_form",
]
