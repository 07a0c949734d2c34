from pathlib import Path

import pytest

from ptl.errors import ParseError, UnknownAtom
from ptl.kbfile import load_kb, parse_kb_text
from ptl.kbs import ALL
from ptl.syntax import parse

KB_DIR = Path(__file__).resolve().parent.parent / "kbs"


def test_comments_blanks_and_positions():
    kb = parse_kb_text("# header\n\n*b -> f   # birds fly\n  p -> b\n")
    assert kb.formulas == (parse("*b -> f"), parse("p -> b"))
    assert [s.line for s in kb.sentences] == [3, 4]
    assert kb.sentences[0].text == "*b -> f"
    assert kb.declared_vocab is None
    assert kb.vocabulary().atoms == ("b", "f", "p")
    assert kb.vocabulary(parse("w")).atoms == ("b", "f", "p", "w")


def test_vocab_declaration():
    kb = parse_kb_text("vocab: q, p r\n*T -> p\n")
    assert kb.vocabulary().atoms == ("q", "p", "r")
    with pytest.raises(UnknownAtom):
        kb.vocabulary(parse("z"))
    with pytest.raises(ParseError):
        parse_kb_text("vocab: p\nvocab: q\n")
    with pytest.raises(ParseError) as exc:
        parse_kb_text("vocab: p\n\np & q\n")
    assert exc.value.line == 3


def test_parse_error_reports_file_line_and_column():
    with pytest.raises(ParseError) as exc:
        parse_kb_text("p\n# c\n*b -> (f\n", "demo.ptl")
    assert (exc.value.line, exc.value.column) == (3, 9)
    assert str(exc.value).startswith("demo.ptl: expected ')'")


def test_shipped_files_match_constants():
    names = {"birds": "birds", "penguins_robins": "penguins_robins",
             "penguins_robins_weak": "penguins_robins_weak", "impossibility": "impossibility",
             "penguins_conditional": "penguins_conditional"}
    for stem, key in names.items():
        kb = load_kb(KB_DIR / f"{stem}.ptl")
        assert kb.formulas == tuple(parse(x) for x in ALL[key])
