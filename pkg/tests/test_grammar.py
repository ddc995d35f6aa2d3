import re

import pytest
from hypothesis import given, settings

from chambers_kos.grammar import (
    DEFAULT_CONFIG,
    DanglingConnective,
    GrammarConfig,
    NormalizationEmpty,
    OrphanInstance,
    Origin,
    entry_concept_census,
    is_nesting_cue,
    normalize_facet_label,
    parse_document,
    parse_entry,
)
from chambers_kos.transcript import Style, StyledSpan, lex
from oracles import fixture, printed_italic_tally, transcription


def load(name):
    return parse_document(lex(fixture(name).read_text(encoding="utf-8"), name))


def facet(tree, label):
    found = [f for f in tree.walk() if f.facet_label == label]
    assert len(found) == 1, label
    return found[0]


@pytest.mark.parametrize(
    "connective, label",
    [
        ("Its Parts, as", "Parts"),
        ("Their Gods ;", "Gods"),
        ("as", "as"),
        ("with Operations relating to 'em, as", "Operations"),
        ("publish'd in", "publish'd"),
        ("Fossils or Minerals, as", "Fossils"),
        ("and their Phænomena, as", "Phænomena"),
        ("Ministers thereof ;", "Ministers"),
    ],
)
def test_normalize_facet_label(connective, label):
    assert normalize_facet_label(connective) == label


def test_stop_word_connective_is_strictly_empty():
    with pytest.raises(NormalizationEmpty):
        normalize_facet_label("as", strict=True)


def test_minerology_head_and_sections():
    (tree,) = load("minerology.txt")
    assert tree.headword == "MINEROLOGY"
    assert tree.alt_name == "History of EARTH"
    assert tree.scope_areas == ()
    parts = facet(tree, "Parts")
    assert [i.label for i in parts.instances] == ["Mountain", "Mine", "Moss", "Bog", "Grotto"]
    assert not any(i.open_ended for i in parts.instances)
    assert all(i.open_ended for i in facet(tree, "Phænomena").instances)
    strata = facet(tree, "Strata")
    assert [i.label for i in strata.instances] == ["Clay", "Bole", "Sand"]
    assert all(i.open_ended for i in strata.instances)
    fossils = facet(tree, "Fossils")
    assert fossils.alt_labels == ("Minerals",)
    assert parts.ordinal_section == 1 and fossils.ordinal_section == 2


def test_minerology_census_matches_printed_tally():
    (tree,) = load("minerology.txt")
    expected = printed_italic_tally(fixture("minerology_printed.txt").read_text(encoding="utf-8"))
    assert expected == 61
    census = entry_concept_census(tree)
    assert census.instance_count == expected
    # one facet per roman connective in the printed text
    assert census.facet_count == 12
    assert census.open_ended_list_count == 13


def test_emendation_recorded_on_instance():
    (tree,) = load("minerology.txt")
    quake = next(i for i in facet(tree, "Phænomena").instances if i.label == "Earthquake")
    assert quake.emendation and "Earth, quake" in quake.emendation


def test_law_fragment():
    (tree,) = load("law.txt")
    assert len(tree.facets) == 1
    f = tree.facets[0]
    assert f.connective == "publish'd in"
    assert len(f.instances) == 8
    assert all(i.open_ended for i in f.instances)
    assert entry_concept_census(tree) == (8, 1, 1)


def test_headword_only_entry():
    tree = parse_entry(lex("@domain{OPTICKS}"))
    assert tree.facets == ()
    assert entry_concept_census(tree) == (0, 0, 0)


def test_heathen_interpolation():
    (tree,) = load("heathen.txt")
    gods = facet(tree, "Gods")
    assert gods.instances[-1].label == "Genius"
    rites = facet(tree, "Rites")
    assert rites.origin is Origin.INTERPOLATED
    assert [i.label for i in rites.instances] == ["Apotheosis", "Sacrifice", "Feast", "Lustration"]


def test_heathen_without_interp_has_no_interpolated_nodes():
    text = fixture("heathen.txt").read_text(encoding="utf-8").replace("@interp{Rites}", "")
    (tree,) = parse_document(lex(text))
    assert all(f.origin is Origin.TEXTUAL for f in tree.walk())


def test_scope_areas():
    tree = parse_entry(lex("@domain{PHYSICKS} roman{including} sc{OPTICKS}, sc{MECHANICKS}. roman{Its Laws, as} italic{Motion}."))
    assert tree.scope_areas == ("OPTICKS", "MECHANICKS")


def test_dangling_connective():
    with pytest.raises(DanglingConnective):
        parse_entry(lex("@domain{LAW} roman{publish'd in}"))


def test_orphan_instance():
    with pytest.raises(OrphanInstance):
        parse_entry(lex("@domain{LAW} italic{Act}, italic{Statute}."))


def test_nesting_cue_makes_child_and_dash_resets():
    tree = parse_entry(lex("@domain{X} roman{Parts, as} italic{A}; roman{their Uses, as} italic{B}. — roman{their Kinds, as} italic{C}."))
    parts = facet(tree, "Parts")
    assert [c.facet_label for c in parts.children] == ["Uses"]
    # after the dash there is no anchor, so the cue opens an entry-level facet
    assert [f.facet_label for f in tree.facets] == ["Parts", "Kinds"]
    assert len(tree.topic_breaks) == 1


def test_grammar_config_extends_cues():
    cfg = GrammarConfig.from_text("nesting_cues = whereof\n")
    assert is_nesting_cue("whereof the Kinds", cfg)
    assert not is_nesting_cue("whereof the Kinds", DEFAULT_CONFIG)
    assert is_nesting_cue("their Gods", cfg)


def italic_count(src):
    return sum(1 for t in lex(src).tokens if isinstance(t, StyledSpan) and t.style is Style.ITALIC)


@settings(max_examples=150)
@given(transcription())
def test_span_conservation(src):
    trees = parse_document(lex(src))
    refs = sum(entry_concept_census(t).instance_count for t in trees)
    alts = sum(1 for t in trees if t.alt_name)
    assert italic_count(src) == refs + alts


@settings(max_examples=100)
@given(transcription())
def test_interp_removal_leaves_no_interpolated_nodes(src):
    stripped = re.sub(r"@interp\{[^}]*\}", "roman{Misc, as}", src)
    for tree in parse_document(lex(stripped)):
        assert all(f.origin is Origin.TEXTUAL for f in tree.walk())


@settings(max_examples=100)
@given(transcription())
def test_facet_order_and_determinism(src):
    doc = lex(src)
    trees = parse_document(doc)
    assert trees == parse_document(lex(src))
    for tree in trees:
        positions = [(f.line, f.col) for f in tree.walk()]
        assert positions == sorted(positions)


@settings(max_examples=100)
@given(transcription())
def test_etcetera_semantics(src):
    # every instance in a group shares the group's closing terminator
    for tree in parse_document(lex(src)):
        for f in tree.walk():
            by_group = {}
            for inst in f.instances:
                by_group.setdefault(inst.group, set()).add(inst.open_ended)
            assert all(len(v) == 1 for v in by_group.values())
