import pytest
from hypothesis import given, settings

from chambers_kos.diagnostics import Severity
from chambers_kos.transcript import (
    Directive,
    DirectiveKind,
    EmptySpan,
    PunctKind,
    PunctToken,
    Style,
    StyledSpan,
    UnbalancedDelimiter,
    UnknownDirective,
    lex,
    render,
    split_entries,
    validate_transcript,
)
from oracles import fixture, transcription


def kinds(doc):
    out = []
    for t in doc.tokens:
        if isinstance(t, StyledSpan):
            out.append((t.style, t.text))
        elif isinstance(t, PunctToken):
            out.append(t.kind)
        else:
            out.append((t.kind, t.value))
    return out


def test_head_tokens():
    doc = lex("@domain{MINEROLOGY} roman{, or the} italic{History of EARTH}")
    assert kinds(doc) == [
        (DirectiveKind.DOMAIN_START, "MINEROLOGY"),
        (Style.ROMAN, ", or the"),
        (Style.ITALIC, "History of EARTH"),
    ]


def test_empty_input_has_no_tokens():
    doc = lex("")
    assert doc.tokens == ()
    assert validate_transcript(doc) == []


def test_italic_list_with_commas_and_semicolon():
    doc = lex("italic{Mountain}, italic{Mine}, italic{Moss}, italic{Bog}, italic{Grotto};")
    spans = [t for t in doc.tokens if isinstance(t, StyledSpan)]
    punct = [t.kind for t in doc.tokens if isinstance(t, PunctToken)]
    assert [s.text for s in spans] == ["Mountain", "Mine", "Moss", "Bog", "Grotto"]
    assert all(s.style is Style.ITALIC for s in spans)
    assert punct.count(PunctKind.COMMA) == 4
    assert punct.count(PunctKind.SEMICOLON) == 1
    assert len(punct) == 5


def test_dash_etcetera_ordinal_interp_note():
    doc = lex("@ord{2}, italic{A}, &c. — @interp{Rites} @note{x}")
    k = kinds(doc)
    assert k[0] is PunctKind.ORDINAL and doc.tokens[0].ordinal == 2
    assert PunctKind.ET_CETERA in k and PunctKind.LONG_DASH in k
    assert (DirectiveKind.INTERPOLATE, "Rites") in k
    assert (DirectiveKind.NOTE, "x") in k


def test_minerology_fixture_is_valid():
    doc = lex(fixture("minerology.txt").read_text(encoding="utf-8"), "minerology.txt")
    assert validate_transcript(doc) == []


def test_italic_before_domain_is_one_error():
    diags = validate_transcript(lex("italic{Stray}, italic{More} @domain{LAW} roman{in} italic{Act}."))
    assert len(diags) == 1
    assert diags[0].severity is Severity.ERROR


def test_two_entries_validate_independently():
    doc = lex("@domain{LAW} roman{in} italic{Act}.\n@domain{ART} roman{as} italic{Painting}.")
    assert validate_transcript(doc) == []
    parts = split_entries(doc)
    assert len(parts) == 2
    assert all(isinstance(p.tokens[0], Directive) for p in parts)


@pytest.mark.parametrize(
    "source, error, pos",
    [
        ("@domain{X}\nitalic{Open", UnbalancedDelimiter, (2, 1)),
        ("@domain{X} @bogus{y}", UnknownDirective, (1, 12)),
        ("@domain{X} italic{}", EmptySpan, (1, 12)),
        ("@domain{X} italic{  }", EmptySpan, (1, 12)),
    ],
)
def test_lex_errors_report_position(source, error, pos):
    with pytest.raises(error) as info:
        lex(source)
    assert (info.value.line, info.value.col) == pos


def test_nested_span_is_rejected():
    with pytest.raises(UnbalancedDelimiter):
        lex("@domain{X} italic{a roman{b}}")


@settings(max_examples=150)
@given(transcription())
def test_round_trip(src):
    assert render(lex(src)) == src


@settings(max_examples=150)
@given(transcription())
def test_positions_nondecreasing(src):
    doc = lex(src)
    positions = [(t.line, t.col) for t in doc.tokens]
    assert positions == sorted(positions)


@settings(max_examples=50)
@given(transcription())
def test_lexing_is_deterministic(src):
    assert lex(src) == lex(src)
    assert validate_transcript(lex(src)) == []
